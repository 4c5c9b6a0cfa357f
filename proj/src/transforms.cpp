#include "varch/transforms.hpp"

#include <cmath>
#include <string>

#include "varch/errors.hpp"

namespace varch {

double logistic(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

double log_logistic(double u) {
  // log(1/(1+e^-u)) = -log1p(e^-u) for u >= 0, and u - log1p(e^u) otherwise
  if (u >= 0.0) return -std::log1p(std::exp(-u));
  return u - std::log1p(std::exp(u));
}

TransformResult to_unconstrained(double value, Support support) {
  switch (support.kind) {
    case Support::Kind::Positive: {
      if (!(value > 0.0)) {
        fail(ErrorKind::OutOfSupport,
             "to_unconstrained: value " + std::to_string(value) + " not positive");
      }
      const double u = std::log(value);
      return {u, u};
    }
    case Support::Kind::Interval: {
      const double width = support.hi - support.lo;
      if (!(value > support.lo && value < support.hi)) {
        fail(ErrorKind::OutOfSupport,
             "to_unconstrained: value " + std::to_string(value) + " outside (" +
                 std::to_string(support.lo) + ", " + std::to_string(support.hi) + ")");
      }
      const double p = (value - support.lo) / width;
      const double u = std::log(p) - std::log1p(-p);
      const double log_jac = std::log(width) + std::log(p) + std::log1p(-p);
      return {u, log_jac};
    }
    case Support::Kind::Unbounded:
      return {value, 0.0};
  }
  return {value, 0.0};
}

TransformResult from_unconstrained(double u, Support support) {
  switch (support.kind) {
    case Support::Kind::Positive:
      return {std::exp(u), u};
    case Support::Kind::Interval: {
      const double width = support.hi - support.lo;
      const double p = logistic(u);
      const double log_jac = std::log(width) + log_logistic(u) + log_logistic(-u);
      return {support.lo + width * p, log_jac};
    }
    case Support::Kind::Unbounded:
      return {u, 0.0};
  }
  return {u, 0.0};
}

}  // namespace varch
