#include "advbound/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace advbound {
namespace {

constexpr double kPi = 3.14159265358979323846;

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double polar_angle(std::span<const double> x, std::span<const double> axis) {
  double c = dot(x, axis);
  c = std::clamp(c, -1.0, 1.0);
  return std::acos(c);
}

// ---- adaptive Simpson ----

template <class F>
double simpson_rec(const F& f, double a, double fa, double b, double fb, double m,
                   double fm, double whole, double tol, int depth) {
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double err = left + right - whole;
  if (depth <= 0 || std::fabs(err) <= 15.0 * tol)
    return left + right + err / 15.0;
  return simpson_rec(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol) {
  double m = 0.5 * (a + b);
  double fa = f(a), fb = f(b), fm = f(m);
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, fa, b, fb, m, fm, whole, tol, 60);
}

// int_lo^hi exp(m*(log sin t - log_scale)) dt, integrand kept in [0,1] by the
// caller's choice of log_scale.
double sin_power_integral(double m, double lo, double hi, double log_scale) {
  auto f = [m, log_scale](double t) {
    if (t <= 0.0 || t >= kPi) return m > 0.0 ? 0.0 : std::exp(-m * log_scale);
    return std::exp(m * (std::log(std::sin(t)) - log_scale));
  };
  return adaptive_simpson(f, lo, hi, 1e-14 * (hi - lo));
}

// ---- Monte Carlo shard kernel (shared by the OpenMP and serial drivers) ----

constexpr std::int64_t kShardSize = 1 << 16;

void fill_sample(Ambient ambient, Rng& rng, Point& x) {
  switch (ambient) {
    case Ambient::Cube:
      for (auto& v : x) v = rng.next_unit();
      break;
    case Ambient::Gaussian:
      for (auto& v : x) v = rng.next_gaussian();
      break;
    case Ambient::Sphere: {
      double norm2 = 0.0;
      do {
        norm2 = 0.0;
        for (auto& v : x) {
          v = rng.next_gaussian();
          norm2 += v * v;
        }
      } while (norm2 == 0.0);
      double inv = 1.0 / std::sqrt(norm2);
      for (auto& v : x) v *= inv;
      break;
    }
  }
}

std::int64_t mc_shard_hits(const SetDescriptor& set, Ambient ambient, std::int64_t n,
                           const Metric& metric, double eps, std::int64_t shard,
                           std::int64_t count, std::uint64_t seed) {
  Rng rng(seed, static_cast<std::uint64_t>(shard));
  Point x(static_cast<std::size_t>(n));
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < count; ++i) {
    fill_sample(ambient, rng, x);
    if (distance_to_set(x, set, metric) <= eps) ++hits;
  }
  return hits;
}

struct McPlan {
  Ambient ambient;
  std::int64_t nshards;
};

McPlan mc_prepare(const SetDescriptor& set, std::int64_t n, const Metric& metric,
                  double eps, std::int64_t samples) {
  if (samples < 1) throw DomainError("sample count must be >= 1");
  if (n < 1) throw DomainError("dimension must be >= 1");
  if (!(eps >= 0.0)) throw DomainError("expansion radius must be >= 0");
  Ambient ambient = ambient_space(set);
  if (ambient == Ambient::Sphere && n < 2)
    throw DomainError("sphere ambient requires n >= 2");
  // probe once so capability errors surface before the parallel region
  Point probe(static_cast<std::size_t>(n), 0.0);
  if (ambient == Ambient::Sphere) probe[0] = 1.0;
  if (ambient == Ambient::Cube) std::fill(probe.begin(), probe.end(), 0.5);
  (void)distance_to_set(probe, set, metric);
  return {ambient, (samples + kShardSize - 1) / kShardSize};
}

ExpansionEstimate mc_finish(std::int64_t hits, std::int64_t samples, std::uint64_t seed) {
  double est = static_cast<double>(hits) / static_cast<double>(samples);
  double se = std::sqrt(est * (1.0 - est) / static_cast<double>(samples));
  return {est, se, samples, seed, hits};
}

}  // namespace

// ---- metrics ----

double distance(std::span<const double> x, std::span<const double> y,
                const Metric& metric) {
  if (x.size() != y.size()) throw DomainError("distance: dimension mismatch");
  if (metric.is_geodesic()) {
    double c = std::clamp(dot(x, y), -1.0, 1.0);
    return std::acos(c);
  }
  const NormOrder& order = metric.order();
  switch (order.kind()) {
    case NormOrder::Kind::Zero: {
      double count = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != y[i]) count += 1.0;
      return count;
    }
    case NormOrder::Kind::Infinity: {
      double mx = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i)
        mx = std::max(mx, std::fabs(x[i] - y[i]));
      return mx;
    }
    default: {
      double p = order.p();
      if (p == 2.0) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
          double d = x[i] - y[i];
          s += d * d;
        }
        return std::sqrt(s);
      }
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i)
        s += std::pow(std::fabs(x[i] - y[i]), p);
      return std::pow(s, 1.0 / p);
    }
  }
}

// ---- set descriptors ----

Ambient ambient_space(const SetDescriptor& set) {
  struct Visitor {
    Ambient operator()(const SphereCap&) const { return Ambient::Sphere; }
    Ambient operator()(const CubeSlab&) const { return Ambient::Cube; }
    Ambient operator()(const SubCube&) const { return Ambient::Cube; }
    Ambient operator()(const GaussianHalfspace&) const { return Ambient::Gaussian; }
    Ambient operator()(const FiniteUnion& u) const {
      if (u.members.empty()) throw DomainError("empty finite union");
      Ambient first = ambient_space(u.members.front());
      for (const auto& m : u.members)
        if (ambient_space(m) != first)
          throw DomainError("finite union mixes ambient spaces");
      return first;
    }
  };
  return std::visit(Visitor{}, set.shape);
}

namespace {

double cap_distance(std::span<const double> x, const SphereCap& cap, const Metric& metric) {
  if (!(cap.angle >= 0.0 && cap.angle <= kPi))
    throw DomainError("cap angle outside [0, pi]");
  if (cap.axis.size() != x.size()) throw DomainError("cap axis dimension mismatch");
  double gap = std::max(0.0, polar_angle(x, cap.axis) - cap.angle);
  if (metric.is_geodesic()) return gap;
  const NormOrder& order = metric.order();
  if (order.kind() == NormOrder::Kind::Finite && order.p() == 2.0)
    return 2.0 * std::sin(0.5 * gap);  // chord through the nearest cap point
  throw CapabilityError("sphere caps support geodesic and l2 distances only");
}

double halfline_distance(double overshoot, const Metric& metric) {
  // distance when only one coordinate needs to move by `overshoot`
  if (overshoot <= 0.0) return 0.0;
  if (metric.is_geodesic())
    throw CapabilityError("geodesic metric applies to sphere sets only");
  if (metric.order().kind() == NormOrder::Kind::Zero) return 1.0;
  return overshoot;
}

double subcube_distance(std::span<const double> x, const SubCube& sc, const Metric& metric) {
  if (!(sc.side > 0.0 && sc.side < 1.0)) throw DomainError("sub-cube side outside (0,1)");
  if (metric.is_geodesic())
    throw CapabilityError("geodesic metric applies to sphere sets only");
  const NormOrder& order = metric.order();
  switch (order.kind()) {
    case NormOrder::Kind::Zero: {
      double count = 0.0;
      for (double v : x)
        if (v > sc.side) count += 1.0;
      return count;
    }
    case NormOrder::Kind::Infinity: {
      double mx = 0.0;
      for (double v : x) mx = std::max(mx, v - sc.side);
      return std::max(0.0, mx);
    }
    default: {
      double p = order.p();
      double s = 0.0;
      for (double v : x)
        if (v > sc.side) s += std::pow(v - sc.side, p);
      return std::pow(s, 1.0 / p);
    }
  }
}

}  // namespace

double distance_to_set(std::span<const double> x, const SetDescriptor& set,
                       const Metric& metric) {
  struct Visitor {
    std::span<const double> x;
    const Metric& metric;
    double operator()(const SphereCap& c) const { return cap_distance(x, c, metric); }
    double operator()(const CubeSlab& s) const {
      if (!(s.width > 0.0 && s.width < 1.0)) throw DomainError("slab width outside (0,1)");
      if (s.coord_index < 0 || static_cast<std::size_t>(s.coord_index) >= x.size())
        throw DomainError("slab coordinate index out of range");
      return halfline_distance(x[static_cast<std::size_t>(s.coord_index)] - s.width, metric);
    }
    double operator()(const SubCube& s) const { return subcube_distance(x, s, metric); }
    double operator()(const GaussianHalfspace& h) const {
      return halfline_distance(x[0] - h.offset, metric);
    }
    double operator()(const FiniteUnion& u) const {
      if (u.members.empty()) throw DomainError("empty finite union");
      double best = std::numeric_limits<double>::infinity();
      for (const auto& m : u.members)
        best = std::min(best, distance_to_set(x, m, metric));
      return best;
    }
  };
  return std::visit(Visitor{x, metric}, set.shape);
}

// ---- sampling ----

Point sample_sphere(std::int64_t n, Rng& rng) {
  if (n < 2) throw DomainError("sphere sampling requires n >= 2");
  Point x(static_cast<std::size_t>(n));
  fill_sample(Ambient::Sphere, rng, x);
  return x;
}

Point sample_cube(std::int64_t n, Rng& rng) {
  if (n < 1) throw DomainError("cube sampling requires n >= 1");
  Point x(static_cast<std::size_t>(n));
  fill_sample(Ambient::Cube, rng, x);
  return x;
}

Point sample_gaussian(std::int64_t n, Rng& rng) {
  if (n < 1) throw DomainError("gaussian sampling requires n >= 1");
  Point x(static_cast<std::size_t>(n));
  fill_sample(Ambient::Gaussian, rng, x);
  return x;
}

// ---- exact oracles ----

Probability cap_measure(std::int64_t n, double theta) {
  if (n < 2) throw DomainError("cap measure requires n >= 2");
  if (!(theta >= 0.0 && theta <= kPi)) throw DomainError("cap angle outside [0, pi]");
  if (theta == 0.0) return Probability(0.0);
  if (theta == kPi) return Probability(1.0);
  double m = static_cast<double>(n - 2);
  if (m == 0.0) return Probability(theta / kPi);  // S^1: arc length
  if (theta > kPi / 2.0)
    return Probability(1.0 - cap_measure(n, kPi - theta).value());
  if (theta == kPi / 2.0) return Probability(0.5);

  if (n > 1000000) {
    // Gaussian limit of the latitude distribution
    double u = (kPi / 2.0 - theta) * std::sqrt(m);
    return std_normal_sf(ZScore(u));
  }

  // numerator scaled by its peak value sin(theta)^m, everything else in logs
  double log_peak = m * std::log(std::sin(theta));
  double num = sin_power_integral(m, 0.0, theta, std::log(std::sin(theta)));
  double denom = 2.0 * sin_power_integral(m, 0.0, kPi / 2.0, 0.0);
  double log_ratio = log_peak + std::log(num) - std::log(denom);
  if (log_ratio < -745.0) return Probability(0.0);
  return Probability::clamped(std::exp(log_ratio));
}

Probability half_sphere_expansion_exact(std::int64_t n, double eps) {
  if (!(eps >= 0.0 && eps <= kPi / 2.0))
    throw DomainError("half-sphere expansion radius outside [0, pi/2]");
  return cap_measure(n, kPi / 2.0 + eps);
}

Probability slab_expansion_exact(double a, double eps, const NormOrder& norm) {
  if (!(a > 0.0 && a < 1.0)) throw DomainError("slab width outside (0,1)");
  if (!(eps >= 0.0)) throw DomainError("expansion radius must be >= 0");
  if (norm.is_zero())
    throw DomainError("slab expansion oracle is for p > 0 metrics");
  return Probability(std::min(1.0, a + eps));
}

Probability subcube_hamming_expansion_exact(double a, std::int64_t n, std::int64_t eps) {
  if (!(a > 0.0 && a < 1.0)) throw DomainError("sub-cube side outside (0,1)");
  if (n < 1) throw DomainError("dimension must be >= 1");
  if (eps < 0) throw DomainError("Hamming radius must be >= 0");
  if (eps >= n) return Probability(1.0);
  long double log_a = logl(static_cast<long double>(a));
  long double log_1ma = log1pl(static_cast<long double>(-a));
  long double total = 0.0L;
  for (std::int64_t k = 0; k <= eps; ++k) {
    long double lc = lgammal(static_cast<long double>(n + 1)) -
                     lgammal(static_cast<long double>(k + 1)) -
                     lgammal(static_cast<long double>(n - k + 1));
    total += expl(lc + static_cast<long double>(k) * log_1ma +
                  static_cast<long double>(n - k) * log_a);
  }
  return Probability::clamped(static_cast<double>(total));
}

Probability gaussian_halfspace_expansion_exact(Probability mass, double eps) {
  if (mass.value() <= 0.0 || mass.value() >= 1.0)
    throw DomainError("halfspace mass must be in (0,1)");
  if (!(eps >= 0.0)) throw DomainError("expansion radius must be >= 0");
  double a = std_normal_quantile(mass).value();
  return std_normal_cdf(ZScore(a + eps));
}

// ---- Monte Carlo estimator ----

ExpansionEstimate mc_expansion_measure(const SetDescriptor& set, std::int64_t n,
                                       const Metric& metric, double eps,
                                       std::int64_t samples, std::uint64_t seed) {
  McPlan plan = mc_prepare(set, n, metric, eps, samples);
  std::int64_t hits = 0;
#pragma omp parallel for reduction(+ : hits) schedule(dynamic)
  for (std::int64_t s = 0; s < plan.nshards; ++s) {
    std::int64_t count = std::min(kShardSize, samples - s * kShardSize);
    hits += mc_shard_hits(set, plan.ambient, n, metric, eps, s, count, seed);
  }
  return mc_finish(hits, samples, seed);
}

ExpansionEstimate mc_expansion_measure_serial(const SetDescriptor& set, std::int64_t n,
                                              const Metric& metric, double eps,
                                              std::int64_t samples, std::uint64_t seed) {
  McPlan plan = mc_prepare(set, n, metric, eps, samples);
  std::int64_t hits = 0;
  for (std::int64_t s = 0; s < plan.nshards; ++s) {
    std::int64_t count = std::min(kShardSize, samples - s * kShardSize);
    hits += mc_shard_hits(set, plan.ambient, n, metric, eps, s, count, seed);
  }
  return mc_finish(hits, samples, seed);
}

// ---- transport ----

Point gauss_to_cube_transport(std::span<const double> z) {
  Point out(z.size());
  for (std::size_t i = 0; i < z.size(); ++i)
    out[i] = std_normal_cdf(ZScore(z[i])).value();
  return out;
}

}  // namespace advbound
