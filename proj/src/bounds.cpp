#include "advbound/bounds.hpp"

#include <cmath>

namespace advbound {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2Pi = 2.50662827463100050242;
// 0.5*log(pi/8)
const double kLogSqrtPi8 = 0.5 * std::log(kPi / 8.0);

const char* kVacuousNote = "vacuous: formula value <= 0, clamped (still a true bound)";

// 1 - exp(log_term), clamped into [0,1]; notes the clamp when it fires.
BoundValue from_log_term(double log_term, std::string note = "") {
  double v = -std::expm1(log_term);
  if (v <= 0.0) {
    if (!note.empty()) note += "; ";
    note += kVacuousNote;
    return {Probability(0.0), true, std::move(note)};
  }
  return {Probability::clamped(v), true, std::move(note)};
}

// n^e computed as exp(e log n); exact 1 when the exponent is exactly 0, which
// keeps p >= 2 results bit-identical across dimensions.
double n_pow(std::int64_t n, double e) {
  if (e == 0.0) return 1.0;
  return std::exp(e * std::log(static_cast<double>(n)));
}

void require_expansion_norm(const NormOrder& norm) {
  if (norm.is_zero())
    throw DomainError("this bound requires p > 0; the l0 norm has its own forms");
}

void require_fraction_hypothesis(const ClassStats& stats) {
  if (!(stats.f_c <= 0.5))
    throw PreconditionError("theorem hypothesis violated: requires f_c <= 1/2");
}

bool is_integer(double x) { return std::floor(x) == x; }

}  // namespace

BoundValue half_sphere_expansion_bound(std::int64_t n, double eps) {
  if (n < 2) throw DomainError("sphere bound requires n >= 2");
  if (!(eps >= 0.0)) throw DomainError("expansion radius must be >= 0");
  return from_log_term(kLogSqrtPi8 - 0.5 * static_cast<double>(n - 1) * eps * eps);
}

BoundValue sphere_susceptibility_bound(const ClassStats& stats, double eps) {
  require_fraction_hypothesis(stats);
  if (stats.n < 2) throw DomainError("sphere bound requires n >= 2");
  if (!(eps >= 0.0)) throw DomainError("expansion radius must be >= 0");
  double log_term = std::log(stats.density_sup) + kLogSqrtPi8 -
                    0.5 * static_cast<double>(stats.n - 1) * eps * eps;
  return from_log_term(log_term);
}

BoundValue cube_expansion_bound_tight(Probability vol, const NormOrder& norm,
                                      std::int64_t n, double eps) {
  require_expansion_norm(norm);
  if (vol.value() <= 0.0 || vol.value() >= 1.0)
    throw DomainError("tight cube bound needs vol in (0,1): alpha is undefined at the ends");
  if (n < 1) throw DomainError("dimension must be >= 1");
  if (!(eps >= 0.0)) throw DomainError("expansion radius must be >= 0");
  double alpha = std_normal_quantile(vol).value();
  double shift = kSqrt2Pi * n_pow(n, 0.5 - 1.0 / norm.p_star()) * eps;
  return {std_normal_cdf(ZScore(alpha + shift)), true, ""};
}

BoundValue cube_expansion_bound_simple(const NormOrder& norm, std::int64_t n, double eps,
                                       SimpleVariant variant) {
  require_expansion_norm(norm);
  if (n < 1) throw DomainError("dimension must be >= 1");
  if (!(eps > 0.0)) throw DomainError("simplified cube bound requires eps > 0");
  double p_star = norm.p_star();
  double log_num = -kPi * eps * eps * n_pow(n, 1.0 - 2.0 / p_star);
  double log_den = std::log(2.0 * kPi) + (0.5 - 1.0 / p_star) * std::log(static_cast<double>(n));
  std::string note;
  if (variant == SimpleVariant::Mills) {
    log_den += std::log(eps);
  } else {
    note =
        "as_printed form is not a certified lower bound "
        "(counterexample: slab width 1/2, p=2, n=100, eps=0.2)";
  }
  return from_log_term(log_num - log_den, std::move(note));
}

BoundValue cube_susceptibility_bound(const ClassStats& stats, const NormOrder& norm,
                                     double eps, CubeBoundForm form) {
  require_expansion_norm(norm);
  require_fraction_hypothesis(stats);
  if (!(eps > 0.0)) throw DomainError("cube susceptibility bound requires eps > 0");

  if (form == CubeBoundForm::LinfRefined) {
    if (!(stats.f_c < 0.5))
      throw PreconditionError("refined form requires f_c < 1/2 strictly");
    if (norm.p_star() != 2.0)
      throw PreconditionError("refined form applies to p >= 2 (including inf)");
  }

  // f_c = 0: the class region is null, so every sample is already
  // misclassified and the probability is 1.
  if (stats.f_c == 0.0 &&
      (form == CubeBoundForm::Tight || form == CubeBoundForm::LinfRefined))
    return {Probability(1.0), true, "f_c = 0: class region has measure zero"};

  double log_tail;
  switch (form) {
    case CubeBoundForm::Tight: {
      double alpha = std_normal_quantile(Probability(1.0 - stats.f_c)).value();
      double shift = kSqrt2Pi * n_pow(stats.n, 0.5 - 1.0 / norm.p_star()) * eps;
      log_tail = log_std_normal_sf(alpha + shift);
      break;
    }
    case CubeBoundForm::LinfRefined: {
      double alpha = std_normal_quantile(Probability(1.0 - stats.f_c)).value();
      log_tail = log_std_normal_sf(alpha + kSqrt2Pi * eps);
      break;
    }
    default: {
      double p_star = norm.p_star();
      log_tail = -kPi * eps * eps * n_pow(stats.n, 1.0 - 2.0 / p_star) -
                 std::log(2.0 * kPi) -
                 (0.5 - 1.0 / p_star) * std::log(static_cast<double>(stats.n));
      if (form == CubeBoundForm::SimpleMills) log_tail -= std::log(eps);
      break;
    }
  }
  std::string note;
  if (form == CubeBoundForm::SimpleAsPrinted)
    note =
        "as_printed form is not a certified lower bound "
        "(counterexample: slab width 1/2, p=2, n=100, eps=0.2)";
  return from_log_term(std::log(stats.density_sup) + log_tail, std::move(note));
}

BoundValue small_p_expansion_bound(Probability vol, const NormOrder& norm, std::int64_t n,
                                   double eps) {
  if (norm.is_infinity())
    throw DomainError("small-p bound covers finite p >= 0 only");
  if (vol.value() <= 0.0) throw DomainError("set volume must be positive");
  if (n < 1) throw DomainError("dimension must be >= 1");
  if (!(eps >= 0.0)) throw DomainError("expansion radius must be >= 0");

  double exponent;
  if (norm.is_zero()) {
    if (!is_integer(eps))
      throw DomainError("l0 radius must be a nonnegative integer");
    if (eps >= static_cast<double>(n))
      return {Probability(1.0), true, "eps >= n: the expansion is the whole cube"};
    exponent = -eps * eps / static_cast<double>(n);
  } else {
    exponent = -std::pow(eps, 2.0 * norm.p()) / static_cast<double>(n);
  }
  return from_log_term(exponent - std::log(vol.value()));
}

BoundValue small_p_expansion_bound_tight(Probability vol, double p, std::int64_t n,
                                         double eps) {
  if (vol.value() <= 0.0) throw DomainError("set volume must be positive");
  if (!(p >= 0.0)) throw DomainError("norm order must be >= 0");
  if (n < 1) throw DomainError("dimension must be >= 1");
  if (!(eps >= 0.0)) throw DomainError("expansion radius must be >= 0");

  // p = 0 uses exponent eps itself
  double e = p == 0.0 ? eps : std::pow(eps, p);
  double threshold = std::sqrt(-static_cast<double>(n) * std::log(vol.value()) / 2.0);
  double gap = e - threshold;
  double log_term = -2.0 / static_cast<double>(n) * gap * gap;
  if (gap < 0.0) {
    double v = -std::expm1(log_term);
    return {Probability::clamped(v), false,
            "not a bound here: requires eps^p >= sqrt(n log(1/vol)/2)"};
  }
  return from_log_term(log_term);
}

BoundValue sparse_susceptibility_bound(const ClassStats& stats, std::int64_t eps) {
  require_fraction_hypothesis(stats);
  if (eps < 0) throw DomainError("pixel budget must be >= 0");
  double e = static_cast<double>(eps);
  double log_term = std::log(2.0) + std::log(stats.density_sup) -
                    e * e / static_cast<double>(stats.n);
  return from_log_term(log_term);
}

ExistenceThreshold existence_support_threshold(const NormOrder& norm, std::int64_t n,
                                               double eps) {
  if (n < 1) throw DomainError("dimension must be >= 1");
  if (norm.is_zero()) {
    if (!(eps >= 0.0) || !is_integer(eps))
      throw DomainError("l0 radius must be a nonnegative integer");
    double edge = std::sqrt(static_cast<double>(n) * std::log(2.0) / 2.0);
    double gap = eps - edge;
    double value = std::exp(-2.0 * gap * gap / static_cast<double>(n));
    if (eps < edge)
      return {Probability::clamped(value), false,
              "threshold valid only for eps >= sqrt(n log2 / 2)"};
    return {Probability::clamped(value), true, ""};
  }
  if (!(eps > 0.0)) throw DomainError("existence threshold requires eps > 0");
  double log_thr = std::log(0.5) - kPi * eps * eps * n_pow(n, 1.0 - 2.0 / norm.p_star());
  return {Probability::clamped(std::exp(log_thr)), true, ""};
}

bool existence_check(Probability support_vol, const NormOrder& norm, std::int64_t n,
                     double eps) {
  ExistenceThreshold thr = existence_support_threshold(norm, n, eps);
  if (!thr.valid)
    throw PreconditionError("existence threshold invalid in this regime: " + thr.note);
  return support_vol.value() >= thr.threshold.value();
}

RescaleTransfer mnist_rescale_transfer(double eps, Probability p_fool, std::int64_t b,
                                       TransferDirection direction) {
  if (b < 1) throw DomainError("expansion factor b must be a positive integer");
  if (!(eps >= 0.0)) throw DomainError("radius must be >= 0");
  double scaled = direction == TransferDirection::Up ? eps * static_cast<double>(b)
                                                     : eps / static_cast<double>(b);
  return {scaled, p_fool.value()};
}

}  // namespace advbound
