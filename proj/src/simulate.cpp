#include "varch/simulate.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "varch/errors.hpp"
#include "varch/kernel.hpp"
#include "varch/rng.hpp"

namespace varch {

namespace {

std::string padded_site_name(int index, int s_len) {
  std::string digits = std::to_string(index + 1);
  const std::size_t want = std::to_string(s_len).size();
  return "site" + std::string(want - std::min(want, digits.size()), '0') + digits;
}

}  // namespace

std::vector<SiteGroup> default_site_groups(int s_len) {
  std::vector<SiteGroup> groups(s_len);
  for (int s = 0; s < s_len; ++s) {
    groups[s] = s % 2 == 0 ? SiteGroup::Dredging : SiteGroup::Dump;
  }
  return groups;
}

Dataset simulate(const ModelSpec& spec, const ParameterSet& params, int t_len,
                 const std::vector<Eigen::MatrixXd>& covariates, std::uint64_t seed,
                 std::vector<SiteGroup> site_groups) {
  const int s_len = static_cast<int>(params.intercept.size());
  const int p_len = static_cast<int>(covariates.size());
  const int t0 = first_likelihood_time(spec.variant);
  if (t_len < t0 + 1) {
    fail(ErrorKind::ConstraintViolation, "simulate: need at least " + std::to_string(t0 + 1) +
                                             " time points for this variant");
  }
  params.validate(spec, s_len, p_len, /*missing_count=*/0);
  for (const auto& x : covariates) {
    if (x.rows() != t_len || x.cols() != s_len) {
      fail(ErrorKind::ConstraintViolation, "simulate: covariates must be T x S");
    }
  }
  if (static_cast<int>(spec.covariate_roles.size()) != p_len) {
    fail(ErrorKind::ConstraintViolation,
         "simulate: covariate_roles must match the covariate count");
  }
  if (site_groups.empty()) site_groups = default_site_groups(s_len);
  if (static_cast<int>(site_groups.size()) != s_len) {
    fail(ErrorKind::ConstraintViolation, "simulate: site_groups must have one entry per site");
  }

  Philox rng(seed);
  Dataset data;
  data.y.resize(t_len, s_len);
  data.missing = BoolGrid::Constant(t_len, s_len, false);
  data.covariates = covariates;
  data.covariate_roles = spec.covariate_roles;
  data.site_groups = std::move(site_groups);
  for (int s = 0; s < s_len; ++s) data.site_names.push_back(padded_site_name(s, s_len));
  const Date start = parse_date("2000-01-01");
  for (int t = 0; t < t_len; ++t) data.dates.push_back(Date{start.days + t});

  auto covariate_row = [&](int t) {
    Eigen::VectorXd xb = Eigen::VectorXd::Zero(s_len);
    for (int j = 0; j < p_len; ++j) {
      xb.array() += covariates[j].row(t).transpose().array() * params.beta.row(j).transpose().array();
    }
    return xb;
  };

  // Initial rows from the covariate-adjusted marginal with variance theta1.
  for (int t = 0; t < t0; ++t) {
    const Eigen::VectorXd mu = params.intercept + covariate_row(t);
    for (int s = 0; s < s_len; ++s) {
      data.y(t, s) = mu[s] + std::sqrt(params.theta1[s]) * rng.normal();
    }
  }

  Eigen::MatrixXd chol;
  if (spec.variant == Variant::VarIw) chol = cholesky(SpdMatrix(params.sigma)).matrix();
  for (int t = t0; t < t_len; ++t) {
    const Eigen::VectorXd mu = conditional_mean(params, spec, data.y, covariates, t);
    Eigen::VectorXd z(s_len);
    for (int s = 0; s < s_len; ++s) z[s] = rng.normal();
    if (spec.variant == Variant::VarIw) {
      data.y.row(t) = (mu + chol * z).transpose();
    } else {
      const SpdMatrix v = conditional_variance(params, spec, data.y, t);
      data.y.row(t) =
          (mu.array() + v.matrix().diagonal().array().sqrt() * z.array()).transpose();
    }
  }
  data.validate();
  return data;
}

MissingScheme MissingScheme::random_fraction(double p) {
  MissingScheme s;
  s.kind = Kind::RandomFraction;
  s.fraction = p;
  return s;
}

MissingScheme MissingScheme::block(int site, int start, int length) {
  MissingScheme s;
  s.kind = Kind::Blocks;
  s.blocks.push_back(Block{site, start, length});
  return s;
}

Dataset inject_missing(const Dataset& data, const MissingScheme& scheme, std::uint64_t seed) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  Dataset out = data;
  if (scheme.kind == MissingScheme::Kind::RandomFraction) {
    if (!(scheme.fraction >= 0.0 && scheme.fraction < 1.0)) {
      fail(ErrorKind::ConstraintViolation, "inject_missing: fraction must lie in [0, 1)");
    }
    Philox rng(seed);
    for (int t = 0; t < out.num_times(); ++t) {
      for (int s = 0; s < out.num_sites(); ++s) {
        if (rng.uniform() < scheme.fraction) {
          out.missing(t, s) = true;
          out.y(t, s) = nan;
        }
      }
    }
  } else {
    for (const auto& b : scheme.blocks) {
      if (b.site < 0 || b.site >= out.num_sites() || b.start < 0 || b.length < 0 ||
          b.start + b.length > out.num_times()) {
        fail(ErrorKind::ConstraintViolation, "inject_missing: block outside the panel");
      }
      for (int t = b.start; t < b.start + b.length; ++t) {
        out.missing(t, b.site) = true;
        out.y(t, b.site) = nan;
      }
    }
  }
  return out;
}

namespace {

Eigen::MatrixXd operation_indicator(int t_len, const std::vector<SiteGroup>& groups,
                                    SiteGroup active, int period, int duration, int offset) {
  const int s_len = static_cast<int>(groups.size());
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(t_len, s_len);
  for (int t = 0; t < t_len; ++t) {
    const int phase = (t - offset) % period;
    const bool on = t >= offset && phase >= 0 && phase < duration;
    if (!on) continue;
    for (int s = 0; s < s_len; ++s) {
      if (groups[s] == active) x(t, s) = 1.0;
    }
  }
  return x;
}

}  // namespace

Eigen::MatrixXd demo_dredging(int t_len, const std::vector<SiteGroup>& groups) {
  return operation_indicator(t_len, groups, SiteGroup::Dredging, 60, 10, 20);
}

Eigen::MatrixXd demo_dumping(int t_len, const std::vector<SiteGroup>& groups) {
  return operation_indicator(t_len, groups, SiteGroup::Dump, 45, 7, 35);
}

Eigen::MatrixXd demo_wind(int t_len, int s_len, std::uint64_t seed) {
  Philox rng(seed, /*stream=*/7);
  Eigen::VectorXd w(t_len);
  double level = 10.0;
  for (int t = 0; t < t_len; ++t) {
    level = 10.0 + 0.8 * (level - 10.0) + 3.0 * rng.normal();
    w[t] = std::max(0.0, level);
  }
  return w.replicate(1, s_len);
}

std::vector<Eigen::MatrixXd> demo_covariates(int t_len, const std::vector<SiteGroup>& groups,
                                             std::uint64_t seed) {
  return {demo_dumping(t_len, groups), demo_dredging(t_len, groups),
          demo_wind(t_len, static_cast<int>(groups.size()), seed)};
}

}  // namespace varch
