#pragma once

#include <cmath>

#include "advbound/errors.hpp"

namespace advbound {

/// A probability, kept in [0,1] by construction.
class Probability {
 public:
  explicit Probability(double value) : v_(value) {
    if (!(value >= 0.0 && value <= 1.0))
      throw DomainError("probability outside [0,1]");
  }

  /// Clamps into [0,1]. NaN is rejected, +-inf clamps to the nearest bound.
  static Probability clamped(double value) {
    if (std::isnan(value)) throw DomainError("probability is NaN");
    if (value < 0.0) value = 0.0;
    if (value > 1.0) value = 1.0;
    return Probability(value);
  }

  double value() const noexcept { return v_; }

 private:
  double v_;
};

/// Argument of the standard normal CDF. Always finite: the quantile of 0 or 1
/// is reported as an error upstream, never stored as +-inf.
class ZScore {
 public:
  explicit ZScore(double value) : v_(value) {
    if (!std::isfinite(value)) throw DomainError("z-score must be finite");
  }
  double value() const noexcept { return v_; }

 private:
  double v_;
};

// Standard normal CDF Phi(z) = (2*pi)^{-1/2} * integral_{-inf}^{z} e^{-t^2/2} dt.
Probability std_normal_cdf(ZScore z);

// Survival function Phibar(z) = 1 - Phi(z), computed directly through the
// complementary error function so large z does not cancel.
Probability std_normal_sf(ZScore z);

// Inverse of std_normal_cdf on (0,1). p in {0,1} is a domain error.
ZScore std_normal_quantile(Probability p);

// Mills-type tail bound e^{-z^2/2} / (sqrt(2*pi) * z), an upper bound on
// std_normal_sf for every z > 0.
Probability mills_sf_upper(ZScore z);

// Log-space tails for compositions that would underflow in linear space
// (dimension-dependent bounds push z far beyond the double range of Phibar).
double log_std_normal_sf(double z);
double log_std_normal_cdf(double z);

// Standard normal density.
double std_normal_pdf(double z);

}  // namespace advbound
