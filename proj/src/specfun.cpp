#include "advbound/specfun.hpp"

#include <cmath>
#include <limits>

namespace advbound {
namespace {

constexpr double kSqrt2Pi = 2.50662827463100050242;
constexpr double kSqrt1_2 = 0.70710678118654752440;
constexpr double kLogSqrt2Pi = 0.91893853320467274178;

// Rational approximations for erf/erfc from the Cephes library (Moshier).
const double kErfcP[] = {
    2.46196981473530512524e-10, 5.64189564831068821977e-1, 7.46321056442269912687e0,
    4.86371970985681366614e1,   1.96520832956077098242e2,  5.26445194995477358631e2,
    9.34528527171957607540e2,   1.02755188689515710272e3,  5.57535335369399327526e2};
const double kErfcQ[] = {
    1.32281951154744992508e1, 8.67072140885989742329e1, 3.54937778887819891062e2,
    9.75708501743205489753e2, 1.82390916687909736289e3, 2.24633760818710981792e3,
    1.65666309194161350182e3, 5.57535340817727675546e2};
const double kErfcR[] = {5.64189583547755073984e-1, 1.27536670759978104416e0,
                         5.01905042251180477414e0,  6.16021097993053585195e0,
                         7.40974269950448939160e0,  2.97886665372100240670e0};
const double kErfcS[] = {2.26052863220117276590e0, 9.39603524938001434673e0,
                         1.20489539808096656605e1, 1.70814450747565897222e1,
                         9.60896809063285878198e0, 3.36907645100081516050e0};
const double kErfT[] = {9.60497373987051638749e0, 9.00260197203842689217e1,
                        2.23200534594684319226e3, 7.00332514112805075473e3,
                        5.55923013010394962768e4};
const double kErfU[] = {3.35617141647503099647e1, 5.21357949780152679795e2,
                        4.59432382970980127987e3, 2.26290000613890934246e4,
                        4.92673942608635921086e4};

double polevl(double x, const double* coef, int n) {
  double ans = coef[0];
  for (int i = 1; i <= n; ++i) ans = ans * x + coef[i];
  return ans;
}

double p1evl(double x, const double* coef, int n) {
  double ans = x + coef[0];
  for (int i = 1; i < n; ++i) ans = ans * x + coef[i];
  return ans;
}

// exp(-x*x) with the argument squared in double-double pieces, so the
// relative error stays O(eps) instead of O(x^2 eps) for large x.
double exp_neg_xsq(double x) {
  constexpr double kSplit = 134217729.0;  // 2^27 + 1
  double c = kSplit * x;
  double xh = c - (c - x);
  double xl = x - xh;
  double hi = xh * xh;
  double lo = 2.0 * xh * xl + xl * xl;
  return std::exp(-hi) * std::exp(-lo);
}

double erf_impl(double x);

double erfc_impl(double a) {
  double x = std::fabs(a);
  if (x < 1.0) return 1.0 - erf_impl(a);

  double z = exp_neg_xsq(a);
  double y;
  if (x < 8.0)
    y = z * polevl(x, kErfcP, 8) / p1evl(x, kErfcQ, 8);
  else
    y = z * polevl(x, kErfcR, 5) / p1evl(x, kErfcS, 6);

  if (a < 0.0) y = 2.0 - y;
  return y;  // underflows to 0 beyond x ~ 26.6 (z ~ 37.6)
}

double erf_impl(double x) {
  if (std::fabs(x) > 1.0) return 1.0 - erfc_impl(x);
  double z = x * x;
  return x * polevl(z, kErfT, 4) / p1evl(z, kErfU, 5);
}

double cdf_impl(double a) {
  double x = a * kSqrt1_2;
  double z = std::fabs(x);
  if (z < kSqrt1_2) return 0.5 + 0.5 * erf_impl(x);
  double y = 0.5 * erfc_impl(z);
  return x > 0.0 ? 1.0 - y : y;
}

double sf_impl(double a) { return cdf_impl(-a); }

double pdf_impl(double z) { return std::exp(-0.5 * z * z) / kSqrt2Pi; }

// log Phibar(z) for z >= 0. Below the underflow edge, log of the direct
// value; above it, the asymptotic tail series.
double log_sf_nonneg(double z) {
  if (z < 36.0) return std::log(sf_impl(z));
  double iz2 = 1.0 / (z * z);
  double series = -iz2 * (1.0 - iz2 * (3.0 - iz2 * (15.0 - iz2 * 105.0)));
  return -0.5 * z * z - std::log(z) - kLogSqrt2Pi + std::log1p(series);
}

}  // namespace

Probability std_normal_cdf(ZScore z) {
  return Probability(cdf_impl(z.value()));
}

Probability std_normal_sf(ZScore z) {
  return Probability(sf_impl(z.value()));
}

double std_normal_pdf(double z) { return pdf_impl(z); }

double log_std_normal_sf(double z) {
  if (std::isnan(z)) throw DomainError("log_std_normal_sf: NaN argument");
  if (z >= 0.0) return log_sf_nonneg(z);
  // Phibar(z) = 1 - Phibar(-z)
  return std::log1p(-std::exp(log_sf_nonneg(-z)));
}

double log_std_normal_cdf(double z) { return log_std_normal_sf(-z); }

ZScore std_normal_quantile(Probability p) {
  double pv = p.value();
  if (pv <= 0.0 || pv >= 1.0)
    throw DomainError("quantile defined only on the open interval (0,1)");

  // Work on the lower half; reflect at the end.
  bool flipped = false;
  if (pv > 0.5) {
    pv = 1.0 - pv;
    flipped = true;
  }

  // Crude tail start, then guarded Newton on cdf(x) - p with a maintained
  // bracket; bisection whenever a step escapes it.
  double x;
  if (pv > 0.1) {
    x = (pv - 0.5) * kSqrt2Pi;
  } else {
    double t = std::sqrt(-2.0 * std::log(pv));
    x = -(t - std::log(t) / t);
  }
  double lo = -40.0, hi = 0.5;
  for (int it = 0; it < 100; ++it) {
    double f = cdf_impl(x) - pv;
    if (f > 0.0)
      hi = x;
    else if (f < 0.0)
      lo = x;
    double d = pdf_impl(x);
    double step = d > 0.0 ? f / d : 0.0;
    double next = x - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 1e-15 * (1.0 + std::fabs(x))) {
      x = next;
      break;
    }
    x = next;
  }
  return ZScore(flipped ? -x : x);
}

Probability mills_sf_upper(ZScore z) {
  double zv = z.value();
  if (!(zv > 0.0)) throw DomainError("Mills tail bound requires z > 0");
  double v = exp_neg_xsq(zv * kSqrt1_2) / (kSqrt2Pi * zv);
  return Probability::clamped(v);
}

}  // namespace advbound
