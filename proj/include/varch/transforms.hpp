#pragma once

namespace varch {

/// Support of a scalar parameter in constrained space.
struct Support {
  enum class Kind { Positive, Interval, Unbounded };

  Kind kind = Kind::Unbounded;
  double lo = 0.0;
  double hi = 0.0;

  static Support positive() { return {Kind::Positive, 0.0, 0.0}; }
  static Support interval(double lo, double hi) { return {Kind::Interval, lo, hi}; }
  static Support unbounded() { return {Kind::Unbounded, 0.0, 0.0}; }
};

/// A point in the other coordinate system plus the log absolute derivative of
/// the unconstrained -> constrained map at that point. Adding log_jacobian to
/// a constrained-space log density gives the matching unconstrained density.
struct TransformResult {
  double value = 0.0;
  double log_jacobian = 0.0;
};

/// Maps a constrained value into unconstrained space. Throws OutOfSupport
/// when the value violates the support (boundaries excluded).
TransformResult to_unconstrained(double value, Support support);

/// Inverse map: unconstrained coordinate back to the constrained value.
TransformResult from_unconstrained(double u, Support support);

// Stable logistic helpers used by the interval transform and the model core.
double logistic(double u);
double log_logistic(double u);  // log sigma(u) without overflow

}  // namespace varch
