#pragma once

#include <cstdint>
#include <string>

#include "advbound/norms.hpp"
#include "advbound/specfun.hpp"

namespace advbound {

/// Scalar constants a susceptibility bound consumes: ambient dimension n,
/// class fraction f_c, and the density supremum (U_c on the cube, V_c on the
/// sphere, both normalized so a uniform density has supremum 1).
struct ClassStats {
  std::int64_t n;
  double f_c;
  double density_sup;

  ClassStats(std::int64_t n_, double f_c_, double density_sup_)
      : n(n_), f_c(f_c_), density_sup(density_sup_) {
    if (n < 1) throw DomainError("dimension n must be >= 1");
    if (!(f_c >= 0.0 && f_c <= 1.0)) throw DomainError("class fraction f_c outside [0,1]");
    if (!(density_sup >= 1.0))
      throw DomainError("density supremum must be >= 1 (a density below 1 cannot integrate to 1)");
  }
};

/// A probability lower bound plus a validity flag. Formulas can go negative;
/// the value is clamped to [0,1] and a clamped-to-zero bound is still valid
/// (vacuously true), with the note saying so. valid=false marks a regime
/// where the formula is not a bound at all.
struct BoundValue {
  Probability probability;
  bool valid;
  std::string note;
};

// --- sphere ---

// Lemma-level: normalized measure of the geodesic eps-expansion of a half
// sphere is at least 1 - sqrt(pi/8) * exp(-(n-1) eps^2 / 2).
BoundValue half_sphere_expansion_bound(std::int64_t n, double eps);

// Probability that a sample from class c on S^{n-1} is misclassified or has a
// geodesic eps-adversarial example: 1 - V_c sqrt(pi/8) exp(-(n-1) eps^2 / 2).
// Requires f_c <= 1/2.
BoundValue sphere_susceptibility_bound(const ClassStats& stats, double eps);

// --- cube, p > 0 ---

// Phi(Phi^{-1}(vol) + sqrt(2 pi n) n^{-1/p*} eps): the tight expansion bound
// for any measurable subset of the unit cube.
BoundValue cube_expansion_bound_tight(Probability vol, const NormOrder& norm,
                                      std::int64_t n, double eps);

enum class SimpleVariant {
  // 1 - exp(-pi n^{1-2/p*} eps^2) / (2 pi n^{1/2-1/p*}): NOT a valid lower
  // bound (the slab oracle is a counterexample); kept for comparison.
  AsPrinted,
  // Same with an extra eps in the denominator, the form the Mills tail bound
  // actually yields from the tight bound at vol = 1/2. Default.
  Mills,
};

// Simplified expansion bound for sets with vol >= 1/2 (caller's obligation).
BoundValue cube_expansion_bound_simple(const NormOrder& norm, std::int64_t n,
                                       double eps, SimpleVariant variant);

enum class CubeBoundForm { Tight, SimpleMills, SimpleAsPrinted, LinfRefined };

// Susceptibility on the cube: 1 - U_c * (tail term per form). Requires
// f_c <= 1/2 (strictly < 1/2 for LinfRefined, whose alpha must be finite and
// positive to help).
BoundValue cube_susceptibility_bound(const ClassStats& stats, const NormOrder& norm,
                                     double eps, CubeBoundForm form);

// --- cube, small p ---

// 1 - exp(-eps^{2p}/n)/vol for finite p>0; 1 - exp(-eps^2/n)/vol for p=0
// (eps an integer count of changed coordinates; eps >= n covers the cube).
BoundValue small_p_expansion_bound(Probability vol, const NormOrder& norm,
                                   std::int64_t n, double eps);

// The optimized-alpha variant: 1 - exp(-(2/n)(eps^p - sqrt(n log(1/vol)/2))^2),
// a bound only when eps^p >= sqrt(n log(1/vol)/2). p=0 uses exponent eps^p := eps.
BoundValue small_p_expansion_bound_tight(Probability vol, double p, std::int64_t n,
                                         double eps);

// --- sparse (l0) ---

// 1 - 2 U_c exp(-eps^2/n), eps = number of modifiable pixels. f_c <= 1/2.
BoundValue sparse_susceptibility_bound(const ClassStats& stats, std::int64_t eps);

// --- existence ---

struct ExistenceThreshold {
  Probability threshold;
  bool valid;
  std::string note;
};

// Support-volume threshold above which some point of the class admits an
// eps-adversarial example: (1/2) exp(-pi eps^2 n^{1-2/p*}) for p>0;
// exp(-2 (eps - sqrt(n log2 / 2))^2 / n) for p=0, valid only when
// eps >= sqrt(n log2 / 2).
ExistenceThreshold existence_support_threshold(const NormOrder& norm, std::int64_t n,
                                               double eps);

// True iff support_vol >= threshold. Errors out when the threshold regime is
// invalid rather than comparing against a non-bound.
bool existence_check(Probability support_vol, const NormOrder& norm, std::int64_t n,
                     double eps);

// --- resolution transfer ---

struct RescaleTransfer {
  double eps;
  double p_fool;
};

enum class TransferDirection { Up, Down };

// An eps-adversarial guarantee at base resolution transfers to b*eps at b-fold
// resolution with the same probability, and back.
RescaleTransfer mnist_rescale_transfer(double eps, Probability p_fool, std::int64_t b,
                                       TransferDirection direction);

}  // namespace advbound
