#include "varch/hmc.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include "varch/errors.hpp"
#include "varch/rng.hpp"

namespace varch {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDivergenceThreshold = 1000.0;  // Hamiltonian drift cutoff

struct State {
  Eigen::VectorXd q, p, grad;
  double logp = 0.0;
};

double kinetic(const Eigen::VectorXd& p, const Eigen::VectorXd& inv_mass) {
  return 0.5 * (p.array().square() * inv_mass.array()).sum();
}

// One in-place leapfrog step; false when the density or gradient went
// non-finite (the half-step updates are still applied, caller discards).
bool step_once(const Target& target, State& s, double eps, const Eigen::VectorXd& inv_mass) {
  s.p += 0.5 * eps * s.grad;
  s.q.array() += eps * inv_mass.array() * s.p.array();
  s.logp = target.value_and_grad(s.q, s.grad);
  if (!std::isfinite(s.logp) || !s.grad.allFinite()) return false;
  s.p += 0.5 * eps * s.grad;
  return true;
}

double log_sum_exp(double a, double b) {
  const double m = std::max(a, b);
  if (m == kNegInf) return kNegInf;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

int depth_for(int max_steps) {
  int d = 0;
  while ((1LL << (d + 1)) <= max_steps) ++d;
  return d;
}

struct Tree {
  State left, right;            // trajectory endpoints
  State sample;                 // multinomially selected candidate
  Eigen::VectorXd rho;          // summed momentum over leaves
  double log_weight = kNegInf;  // logsumexp of H0 - H over leaves
  bool ok = false;              // no divergence, no internal U-turn
};

struct IterStats {
  double accept_stat = 0.0;
  bool divergent = false;
  bool capped = false;
};

// Running mean/variance for the diagonal metric window.
struct Welford {
  long n = 0;
  Eigen::VectorXd mean, m2;

  explicit Welford(int dim)
      : mean(Eigen::VectorXd::Zero(dim)), m2(Eigen::VectorXd::Zero(dim)) {}

  void add(const Eigen::VectorXd& x) {
    ++n;
    const Eigen::VectorXd d1 = x - mean;
    mean += d1 / static_cast<double>(n);
    m2.array() += d1.array() * (x - mean).array();
  }
  Eigen::VectorXd variance() const { return m2 / static_cast<double>(n - 1); }
};

class Chain {
 public:
  Chain(const Target& target, const SamplerConfig& cfg, int index)
      : target_(target),
        cfg_(cfg),
        rng_(cfg.seed, static_cast<std::uint64_t>(index)),
        max_depth_(depth_for(cfg.max_leapfrog_steps)),
        inv_mass_(Eigen::VectorXd::Ones(target.dim())) {}

  void run(Eigen::MatrixXd& unc, Eigen::MatrixXd& con, ChainTelemetry& tel) {
    State cur = init_state();
    // The doubling search can return an absurd step size when the first probe
    // lands in a flat stretch far from the typical set; one early trajectory
    // at that size can carry the chain tens of units away. Cap the
    // pre-adaptation value hard (dual averaging grows it back if warranted).
    epsilon_ = std::min(find_epsilon(cur), 0.25);

    // Dual averaging (Hoffman-Gelman schedule).
    double mu = std::log(10.0 * epsilon_);
    double log_eps_bar = 0.0, h_bar = 0.0;
    int da_n = 0;
    constexpr double gamma = 0.05, t0 = 10.0, kappa = 0.75;

    const int w = cfg_.n_warmup;
    const int metric_begin = w / 2;
    const int metric_end = (9 * w) / 10;  // last stretch re-tunes the step size
    const bool adapt_metric = metric_end - metric_begin >= 10;
    // Growing estimation windows inside [metric_begin, metric_end): the metric
    // refreshes at every window close, so the later part of warmup already
    // runs under a useful scaling instead of waiting for a single estimate at
    // the very end. Each refresh restarts the step-size search.
    std::vector<int> window_ends;
    if (adapt_metric) {
      int pos = metric_begin;
      int size = 25;
      while (pos < metric_end) {
        int end = std::min(pos + size, metric_end);
        if (metric_end - end < 2 * size) end = metric_end;
        window_ends.push_back(end);
        pos = end;
        size *= 2;
      }
    }
    std::size_t window_idx = 0;
    Welford acc(target_.dim());

    // While the step size is still settling, a single long trajectory can
    // carry a chain an absurd distance (the dual-averaging transient explores
    // epsilon up to ~10x too large). Bound both the step size and the
    // trajectory length until the first few adaptation iterations have
    // passed; the stationary distribution is unaffected by either limit.
    const int early_len = std::min(25, w / 4);
    constexpr int kEarlyDepthCap = 3;
    constexpr double kEarlyStepCap = 0.5;

    int kept = 0;
    double accept_sum = 0.0;
    int accept_n = 0;
    for (int iter = 0; iter < cfg_.n_iter; ++iter) {
      const bool early = iter < early_len;
      if (early) epsilon_ = std::min(epsilon_, kEarlyStepCap);
      const int depth_limit = early ? std::min(kEarlyDepthCap, max_depth_) : max_depth_;
      const IterStats st = transition(cur, depth_limit);
      if (iter < w) {
        ++da_n;
        const double eta = 1.0 / (da_n + t0);
        h_bar = (1.0 - eta) * h_bar + eta * (cfg_.target_accept - st.accept_stat);
        const double log_eps = mu - std::sqrt(static_cast<double>(da_n)) / gamma * h_bar;
        const double x_eta = std::pow(static_cast<double>(da_n), -kappa);
        log_eps_bar = x_eta * log_eps + (1.0 - x_eta) * log_eps_bar;
        epsilon_ = std::exp(log_eps);
        if (adapt_metric && iter >= metric_begin && iter < metric_end) {
          acc.add(cur.q);
          if (iter + 1 == window_ends[window_idx]) {
            const double n = static_cast<double>(acc.n);
            // Shrink toward a small constant so short windows cannot produce
            // a degenerate scaling.
            inv_mass_ =
                ((n / (n + 5.0)) * acc.variance().array() + 1e-3 * (5.0 / (n + 5.0))).matrix();
            epsilon_ = std::min(find_epsilon(cur), 1.0);
            mu = std::log(10.0 * epsilon_);
            log_eps_bar = 0.0;
            h_bar = 0.0;
            da_n = 0;
            acc = Welford(target_.dim());
            ++window_idx;
          }
        }
        if (iter + 1 == w) epsilon_ = std::exp(log_eps_bar);
      } else {
        accept_sum += st.accept_stat;
        ++accept_n;
        if (st.divergent) ++tel.divergences;
        if (st.capped) ++tel.max_depth_hits;
        unc.row(kept) = cur.q.transpose();
        con.row(kept) = target_.constrain(cur.q).transpose();
        ++kept;
      }
    }
    tel.step_size = epsilon_;
    tel.accept_rate = accept_n > 0 ? accept_sum / accept_n : 0.0;
  }

 private:
  State init_state() {
    const int dim = target_.dim();
    for (int attempt = 0; attempt < 100; ++attempt) {
      State s;
      s.q.resize(dim);
      for (int i = 0; i < dim; ++i) s.q[i] = rng_.uniform(-2.0, 2.0);
      s.logp = target_.value_and_grad(s.q, s.grad);
      if (std::isfinite(s.logp) && s.grad.allFinite()) {
        s.p = Eigen::VectorXd::Zero(dim);
        return s;
      }
    }
    fail(ErrorKind::AllInitializationsFailed,
         "no finite-density start point found in 100 attempts");
  }

  Eigen::VectorXd draw_momentum() {
    Eigen::VectorXd p(target_.dim());
    for (int i = 0; i < p.size(); ++i) p[i] = rng_.normal() / std::sqrt(inv_mass_[i]);
    return p;
  }

  // Doubling/halving heuristic for an initial step size whose one-step
  // acceptance straddles 1/2.
  double find_epsilon(const State& start) {
    double eps = 1.0;
    const Eigen::VectorXd p = draw_momentum();
    const double h0 = -start.logp + kinetic(p, inv_mass_);
    auto log_ratio = [&](double e) {
      State s = start;
      s.p = p;
      if (!step_once(target_, s, e, inv_mass_)) return kNegInf;
      return h0 - (-s.logp + kinetic(s.p, inv_mass_));
    };
    double lr = log_ratio(eps);
    const double a = lr > std::log(0.5) ? 1.0 : -1.0;
    for (int it = 0; it < 100 && a * lr > -a * std::log(2.0); ++it) {
      eps *= a > 0 ? 2.0 : 0.5;
      if (eps > 1e7 || eps < 1e-10) break;
      lr = log_ratio(eps);
    }
    return eps;
  }

  bool uturn(const Eigen::VectorXd& rho, const State& left, const State& right) const {
    const double a = rho.dot((inv_mass_.array() * left.p.array()).matrix());
    const double b = rho.dot((inv_mass_.array() * right.p.array()).matrix());
    return a <= 0.0 || b <= 0.0;
  }

  Tree build_tree(int depth, const State& from, double dir) {
    if (depth == 0) {
      State s = from;
      const bool finite = step_once(target_, s, dir * epsilon_, inv_mass_);
      double dh = finite ? (-s.logp + kinetic(s.p, inv_mass_)) - h0_ : kInf;
      if (!std::isfinite(dh)) dh = kInf;
      Tree t;
      t.left = s;
      t.right = s;
      t.sample = std::move(s);
      t.rho = t.left.p;
      if (dh > kDivergenceThreshold) {
        divergent_ = true;
        t.ok = false;
      } else {
        t.log_weight = -dh;
        t.ok = true;
      }
      sum_alpha_ += dh > 0.0 ? std::exp(-dh) : 1.0;
      ++n_alpha_;
      return t;
    }
    Tree first = build_tree(depth - 1, from, dir);
    if (!first.ok) return first;
    Tree second = build_tree(depth - 1, dir > 0 ? first.right : first.left, dir);
    if (!second.ok) {
      first.ok = false;
      return first;
    }
    Tree t;
    t.left = dir > 0 ? std::move(first.left) : std::move(second.left);
    t.right = dir > 0 ? std::move(second.right) : std::move(first.right);
    t.log_weight = log_sum_exp(first.log_weight, second.log_weight);
    t.sample = rng_.uniform() < std::exp(second.log_weight - t.log_weight)
                   ? std::move(second.sample)
                   : std::move(first.sample);
    t.rho = first.rho + second.rho;
    t.ok = !uturn(t.rho, t.left, t.right);
    return t;
  }

  IterStats transition(State& cur, int depth_limit) {
    cur.p = draw_momentum();
    h0_ = -cur.logp + kinetic(cur.p, inv_mass_);
    divergent_ = false;
    sum_alpha_ = 0.0;
    n_alpha_ = 0;

    Tree tree;
    tree.left = cur;
    tree.right = cur;
    tree.sample = cur;
    tree.rho = cur.p;
    tree.log_weight = 0.0;
    tree.ok = true;

    IterStats st;
    bool capped = true;
    for (int depth = 0; depth < depth_limit; ++depth) {
      const double dir = rng_.uniform() < 0.5 ? -1.0 : 1.0;
      Tree sub = build_tree(depth, dir > 0 ? tree.right : tree.left, dir);
      if (!sub.ok) {
        capped = false;
        break;
      }
      // Biased progressive sampling: favour the fresh half of the trajectory.
      if (sub.log_weight >= tree.log_weight ||
          rng_.uniform() < std::exp(sub.log_weight - tree.log_weight)) {
        tree.sample = sub.sample;
      }
      tree.log_weight = log_sum_exp(tree.log_weight, sub.log_weight);
      tree.rho += sub.rho;
      if (dir > 0) {
        tree.right = std::move(sub.right);
      } else {
        tree.left = std::move(sub.left);
      }
      if (uturn(tree.rho, tree.left, tree.right)) {
        capped = false;
        break;
      }
    }
    st.capped = capped;
    st.divergent = divergent_;
    st.accept_stat = n_alpha_ > 0 ? sum_alpha_ / n_alpha_ : 0.0;
    cur = std::move(tree.sample);
    return st;
  }

  const Target& target_;
  const SamplerConfig& cfg_;
  Philox rng_;
  int max_depth_;
  Eigen::VectorXd inv_mass_;
  double epsilon_ = 1.0;
  double h0_ = 0.0;
  bool divergent_ = false;
  double sum_alpha_ = 0.0;
  int n_alpha_ = 0;
};

}  // namespace

void SamplerConfig::validate() const {
  if (n_chains < 1 || n_iter < 1 || n_warmup < 1 || max_leapfrog_steps < 1) {
    fail(ErrorKind::ConfigError, "sampler counts must be positive");
  }
  if (n_warmup >= n_iter) {
    fail(ErrorKind::ConfigError, "n_warmup (" + std::to_string(n_warmup) +
                                     ") must be smaller than n_iter (" +
                                     std::to_string(n_iter) + ")");
  }
  if (!(target_accept > 0.0 && target_accept < 1.0)) {
    fail(ErrorKind::ConfigError, "target_accept must lie in (0, 1)");
  }
}

Eigen::VectorXd PosteriorDraws::pooled(int column) const {
  const int kept = num_kept();
  Eigen::VectorXd out(static_cast<Eigen::Index>(kept) * num_chains());
  for (int c = 0; c < num_chains(); ++c) out.segment(c * kept, kept) = constrained[c].col(column);
  return out;
}

std::vector<Eigen::VectorXd> PosteriorDraws::per_chain(int column) const {
  std::vector<Eigen::VectorXd> out;
  out.reserve(constrained.size());
  for (const auto& m : constrained) out.push_back(m.col(column));
  return out;
}

int PosteriorDraws::column_of(const std::string& name) const {
  for (int i = 0; i < static_cast<int>(names.size()); ++i) {
    if (names[i] == name) return i;
  }
  return -1;
}

LeapfrogResult leapfrog(const Target& target, const Eigen::VectorXd& position,
                        const Eigen::VectorXd& momentum, double step_size, int n_steps,
                        const Eigen::VectorXd& inv_mass) {
  const Eigen::VectorXd im =
      inv_mass.size() == 0 ? Eigen::VectorXd::Ones(position.size()) : inv_mass;
  State s;
  s.q = position;
  s.p = momentum;
  s.logp = target.value_and_grad(s.q, s.grad);
  const double h0 = -s.logp + kinetic(s.p, im);

  LeapfrogResult out;
  out.divergent = !std::isfinite(h0);
  for (int i = 0; i < n_steps && !out.divergent; ++i) {
    const bool finite = step_once(target, s, step_size, im);
    const double h = finite ? -s.logp + kinetic(s.p, im) : kInf;
    if (!finite || h - h0 > kDivergenceThreshold) out.divergent = true;
  }
  out.position = std::move(s.q);
  out.momentum = std::move(s.p);
  out.grad = std::move(s.grad);
  out.value = s.logp;
  return out;
}

PosteriorDraws run_chains(const Target& target, const SamplerConfig& config) {
  config.validate();
  const int kept = config.n_iter - config.n_warmup;
  const int dim = target.dim();
  const int con_dim = static_cast<int>(target.constrain(Eigen::VectorXd::Zero(dim)).size());

  PosteriorDraws out;
  out.names = target.names();
  out.unconstrained.assign(config.n_chains, Eigen::MatrixXd(kept, dim));
  out.constrained.assign(config.n_chains, Eigen::MatrixXd(kept, con_dim));
  out.telemetry.assign(config.n_chains, ChainTelemetry{});

  std::vector<std::exception_ptr> failures(config.n_chains);
  std::vector<std::thread> workers;
  workers.reserve(config.n_chains);
  for (int c = 0; c < config.n_chains; ++c) {
    workers.emplace_back([&, c] {
      try {
        Chain chain(target, config, c);
        chain.run(out.unconstrained[c], out.constrained[c], out.telemetry[c]);
      } catch (...) {
        failures[c] = std::current_exception();
      }
    });
  }
  for (auto& worker : workers) worker.join();
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  return out;
}

}  // namespace varch
