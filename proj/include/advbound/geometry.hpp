#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "advbound/norms.hpp"
#include "advbound/rng.hpp"
#include "advbound/specfun.hpp"

namespace advbound {

using Point = std::vector<double>;

// --- metrics ---

/// Geodesic (sphere-only) or an lp metric.
class Metric {
 public:
  static Metric geodesic() { return Metric(true, NormOrder::finite(2.0)); }
  static Metric lp(NormOrder order) { return Metric(false, order); }

  bool is_geodesic() const noexcept { return geodesic_; }
  const NormOrder& order() const {
    if (geodesic_) throw DomainError("geodesic metric has no norm order");
    return order_;
  }
  std::string label() const { return geodesic_ ? "geodesic" : "l" + order_.label(); }

 private:
  Metric(bool geodesic, NormOrder order) : geodesic_(geodesic), order_(order) {}
  bool geodesic_;
  NormOrder order_;
};

// Distance between two points. Geodesic requires unit vectors. For finite
// p < 1 this is the quasi-norm (sum |z_i|^p)^{1/p}; l0 counts differing
// coordinates.
double distance(std::span<const double> x, std::span<const double> y, const Metric& metric);

// --- parametric sets with closed-form distances ---

struct SphereCap {
  Point axis;    // unit vector
  double angle;  // polar angle in [0, pi]; pi/2 is a half sphere
};
struct CubeSlab {
  int coord_index;
  double width;  // the set {x : x[coord_index] <= width}, width in (0,1)
};
struct SubCube {
  double side;  // the set [0, side]^n, side in (0,1)
};
struct GaussianHalfspace {
  double offset;  // the set {z : z[0] <= offset}
};
struct SetDescriptor;
struct FiniteUnion {
  std::vector<SetDescriptor> members;
};

/// A subset of the sphere, cube, or Gaussian space that admits an exact
/// point-to-set distance, so eps-expansion membership is decidable exactly.
struct SetDescriptor {
  std::variant<SphereCap, CubeSlab, SubCube, GaussianHalfspace, FiniteUnion> shape;
};

enum class Ambient { Sphere, Cube, Gaussian };

// The space the descriptor lives in; members of a union must agree.
Ambient ambient_space(const SetDescriptor& set);

// Exact distance from x to the set in the given metric; throws
// CapabilityError for unsupported (set, metric) pairs.
double distance_to_set(std::span<const double> x, const SetDescriptor& set,
                       const Metric& metric);

// --- sampling ---

// Uniform point on S^{n-1} (normalized Gaussian vector), n >= 2.
Point sample_sphere(std::int64_t n, Rng& rng);

// Uniform point in [0,1]^n.
Point sample_cube(std::int64_t n, Rng& rng);

// Standard Gaussian vector in R^n.
Point sample_gaussian(std::int64_t n, Rng& rng);

// --- exact oracles ---

// Normalized measure of the spherical cap {x : angle(x, axis) <= theta} on
// S^{n-1}: adaptive quadrature of sin^{n-2} in log space (relative tolerance
// 1e-10; Gaussian limit approximation above n = 10^6).
Probability cap_measure(std::int64_t n, double theta);

// cap_measure(n, pi/2 + eps): the exact geodesic expansion of a half sphere.
Probability half_sphere_expansion_exact(std::int64_t n, double eps);

// Expansion of the slab {x_1 <= a} in any lp, p > 0: min(1, a + eps).
Probability slab_expansion_exact(double a, double eps, const NormOrder& norm);

// d0-expansion of [0,a]^n: volume of {at most eps coordinates exceed a},
// the binomial tail sum_{k<=eps} C(n,k) (1-a)^k a^{n-k}.
Probability subcube_hamming_expansion_exact(double a, std::int64_t n, std::int64_t eps);

// Gaussian isoperimetry: the l2 eps-expansion of any set of the given mass
// has measure at least Phi(Phi^{-1}(mass) + eps), with equality for half
// spaces.
Probability gaussian_halfspace_expansion_exact(Probability mass, double eps);

// --- Monte Carlo estimator ---

struct ExpansionEstimate {
  double estimate;
  double std_error;  // sqrt(est*(1-est)/samples)
  std::int64_t samples;
  std::uint64_t seed;
  std::int64_t hits;
};

// Bernoulli estimate of the measure of the eps-expansion of `set`: sample the
// ambient space uniformly, count distance_to_set(x) <= eps. Work is split
// into fixed-size shards with derived RNG streams, so the result is
// bit-identical for any thread count. The parallel kernel runs the shards
// under OpenMP; the _serial variant is the reference implementation.
ExpansionEstimate mc_expansion_measure(const SetDescriptor& set, std::int64_t n,
                                       const Metric& metric, double eps,
                                       std::int64_t samples, std::uint64_t seed);
ExpansionEstimate mc_expansion_measure_serial(const SetDescriptor& set, std::int64_t n,
                                              const Metric& metric, double eps,
                                              std::int64_t samples, std::uint64_t seed);

// --- Gaussian-to-cube transport ---

// Coordinatewise Phi: pushes the standard Gaussian forward to the uniform
// measure on the cube, with the Lipschitz pullback
// ||Phi(z)-Phi(w)||_p <= (n^{1/p*}/sqrt(2 pi n)) ||z-w||_2.
Point gauss_to_cube_transport(std::span<const double> z);

}  // namespace advbound
