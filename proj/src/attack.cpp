#include "advbound/attack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace advbound {
namespace {

double norm_l2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double norm_lp(std::span<const double> v, const NormOrder& norm) {
  switch (norm.kind()) {
    case NormOrder::Kind::Zero: {
      double c = 0.0;
      for (double x : v)
        if (x != 0.0) c += 1.0;
      return c;
    }
    case NormOrder::Kind::Infinity: {
      double m = 0.0;
      for (double x : v) m = std::max(m, std::fabs(x));
      return m;
    }
    default: {
      double p = norm.p();
      if (p == 2.0) return norm_l2(v);
      double s = 0.0;
      for (double x : v) s += std::pow(std::fabs(x), p);
      return std::pow(s, 1.0 / p);
    }
  }
}

void check_in_cube(std::span<const double> x) {
  for (double v : x)
    if (!(v >= 0.0 && v <= 1.0)) throw DomainError("point outside the unit cube");
}

// margin loss gradient: direction increasing max_{j != c} s_j - s_c
struct MarginGrad {
  std::vector<double> grad;
  int runner_up;
};

MarginGrad margin_grad(const Classifier& model, std::span<const double> x, int label) {
  std::vector<double> s = model.scores(x);
  int best = -1;
  for (int j = 0; j < static_cast<int>(s.size()); ++j) {
    if (j == label) continue;
    if (best < 0 || s[j] > s[best]) best = j;
  }
  return {model.score_diff_grad(x, best, label), best};
}

}  // namespace

int Classifier::predict(std::span<const double> x) const {
  std::vector<double> s = scores(x);
  int best = 0;
  for (int j = 1; j < static_cast<int>(s.size()); ++j)
    if (s[j] > s[best]) best = j;
  return best;
}

// ---- linear model ----

LinearModel::LinearModel(std::vector<std::vector<double>> weights,
                         std::vector<double> biases)
    : weights_(std::move(weights)), biases_(std::move(biases)) {
  if (weights_.empty() || weights_.size() != biases_.size())
    throw DomainError("linear model needs one weight row and bias per class");
  dim_ = static_cast<std::int64_t>(weights_.front().size());
  for (const auto& row : weights_) {
    if (static_cast<std::int64_t>(row.size()) != dim_)
      throw DomainError("ragged weight matrix");
    for (double w : row)
      if (!std::isfinite(w)) throw DomainError("non-finite weight");
  }
  for (double b : biases_)
    if (!std::isfinite(b)) throw DomainError("non-finite bias");
}

std::vector<double> LinearModel::scores(std::span<const double> x) const {
  std::vector<double> s(weights_.size());
  for (std::size_t j = 0; j < weights_.size(); ++j)
    s[j] = biases_[j] +
           std::inner_product(weights_[j].begin(), weights_[j].end(), x.begin(), 0.0);
  return s;
}

std::vector<double> LinearModel::score_diff_grad(std::span<const double>, int j,
                                                 int c) const {
  std::vector<double> g(static_cast<std::size_t>(dim_));
  for (std::int64_t i = 0; i < dim_; ++i)
    g[static_cast<std::size_t>(i)] = weights_[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] -
                                     weights_[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)];
  return g;
}

// ---- one-hidden-layer model ----

Mlp1Model::Mlp1Model(std::vector<std::vector<double>> w1, std::vector<double> b1,
                     std::vector<std::vector<double>> w2, std::vector<double> b2)
    : w1_(std::move(w1)), b1_(std::move(b1)), w2_(std::move(w2)), b2_(std::move(b2)) {
  if (w1_.empty() || w2_.empty() || w1_.size() != b1_.size() || w2_.size() != b2_.size())
    throw DomainError("inconsistent mlp shapes");
  dim_ = static_cast<std::int64_t>(w1_.front().size());
  for (const auto& row : w1_)
    if (row.size() != w1_.front().size()) throw DomainError("ragged w1");
  for (const auto& row : w2_)
    if (row.size() != w1_.size()) throw DomainError("w2 width must match hidden size");
}

Mlp1Model Mlp1Model::random(std::int64_t dim, int hidden, int classes,
                            std::uint64_t seed) {
  if (dim < 1 || hidden < 1 || classes < 1)
    throw DomainError("mlp shape parameters must be positive");
  Rng rng(seed);
  double s1 = 1.0 / std::sqrt(static_cast<double>(dim));
  double s2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  std::vector<std::vector<double>> w1(static_cast<std::size_t>(hidden),
                                      std::vector<double>(static_cast<std::size_t>(dim)));
  std::vector<double> b1(static_cast<std::size_t>(hidden));
  std::vector<std::vector<double>> w2(static_cast<std::size_t>(classes),
                                      std::vector<double>(static_cast<std::size_t>(hidden)));
  std::vector<double> b2(static_cast<std::size_t>(classes));
  for (auto& row : w1)
    for (auto& w : row) w = s1 * rng.next_gaussian();
  for (auto& b : b1) b = 0.1 * rng.next_gaussian();
  for (auto& row : w2)
    for (auto& w : row) w = s2 * rng.next_gaussian();
  for (auto& b : b2) b = 0.1 * rng.next_gaussian();
  return Mlp1Model(std::move(w1), std::move(b1), std::move(w2), std::move(b2));
}

std::vector<double> Mlp1Model::hidden_act(std::span<const double> x) const {
  std::vector<double> a(w1_.size());
  for (std::size_t i = 0; i < w1_.size(); ++i)
    a[i] = std::tanh(b1_[i] +
                     std::inner_product(w1_[i].begin(), w1_[i].end(), x.begin(), 0.0));
  return a;
}

std::vector<double> Mlp1Model::scores(std::span<const double> x) const {
  std::vector<double> a = hidden_act(x);
  std::vector<double> s(w2_.size());
  for (std::size_t j = 0; j < w2_.size(); ++j)
    s[j] = b2_[j] + std::inner_product(w2_[j].begin(), w2_[j].end(), a.begin(), 0.0);
  return s;
}

std::vector<double> Mlp1Model::score_diff_grad(std::span<const double> x, int j,
                                               int c) const {
  std::vector<double> a = hidden_act(x);
  std::vector<double> g(static_cast<std::size_t>(dim_), 0.0);
  for (std::size_t i = 0; i < w1_.size(); ++i) {
    double back = (w2_[static_cast<std::size_t>(j)][i] - w2_[static_cast<std::size_t>(c)][i]) *
                  (1.0 - a[i] * a[i]);
    if (back == 0.0) continue;
    for (std::int64_t k = 0; k < dim_; ++k)
      g[static_cast<std::size_t>(k)] += back * w1_[i][static_cast<std::size_t>(k)];
  }
  return g;
}

// ---- data ----

Dataset synth_dataset(std::int64_t n, int m, double spread, std::int64_t count,
                      std::uint64_t seed) {
  if (n < 1 || m < 1) throw DomainError("need n >= 1 and m >= 1");
  if (!(spread > 0.0)) throw DomainError("spread must be > 0");
  if (count < 0) throw DomainError("count must be >= 0");

  // class centers keep a minimum separation when geometry allows
  Rng center_rng(seed, 0);
  double min_sep = std::max(0.25, 3.0 * spread);
  std::vector<std::vector<double>> centers;
  for (int c = 0; c < m; ++c) {
    std::vector<double> center(static_cast<std::size_t>(n));
    for (int attempt = 0; attempt < 200; ++attempt) {
      for (auto& v : center) v = 0.2 + 0.6 * center_rng.next_unit();
      bool ok = true;
      for (const auto& prev : centers) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < center.size(); ++i) {
          double d = center[i] - prev[i];
          d2 += d * d;
        }
        if (d2 < min_sep * min_sep) {
          ok = false;
          break;
        }
      }
      if (ok) break;
    }
    centers.push_back(center);
  }

  Dataset out;
  out.dim = n;
  out.xs.reserve(static_cast<std::size_t>(count * n));
  out.labels.reserve(static_cast<std::size_t>(count));
  Rng point_rng(seed, 1);
  for (std::int64_t i = 0; i < count; ++i) {
    int label = static_cast<int>(i % m);
    for (std::int64_t k = 0; k < n; ++k) {
      double v = centers[static_cast<std::size_t>(label)][static_cast<std::size_t>(k)] +
                 spread * point_rng.next_gaussian();
      out.xs.push_back(std::clamp(v, 0.0, 1.0));
    }
    out.labels.push_back(label);
  }
  return out;
}

std::pair<Dataset, Dataset> split_dataset(const Dataset& data, std::int64_t first_count) {
  if (first_count < 0 || first_count > data.count())
    throw DomainError("split point outside the dataset");
  Dataset head, tail;
  head.dim = tail.dim = data.dim;
  head.xs.assign(data.xs.begin(), data.xs.begin() + first_count * data.dim);
  head.labels.assign(data.labels.begin(), data.labels.begin() + first_count);
  tail.xs.assign(data.xs.begin() + first_count * data.dim, data.xs.end());
  tail.labels.assign(data.labels.begin() + first_count, data.labels.end());
  return {std::move(head), std::move(tail)};
}

// ---- training ----

namespace {

double softmax_loss_and_grad(const Dataset& data, const std::vector<std::vector<double>>& w,
                             const std::vector<double>& b,
                             std::vector<std::vector<double>>* gw,
                             std::vector<double>* gb) {
  const int m = static_cast<int>(w.size());
  const std::int64_t n = data.dim;
  const std::int64_t count = data.count();
  if (gw) {
    for (auto& row : *gw) std::fill(row.begin(), row.end(), 0.0);
    std::fill(gb->begin(), gb->end(), 0.0);
  }
  double loss = 0.0;
  std::vector<double> s(static_cast<std::size_t>(m));
  for (std::int64_t i = 0; i < count; ++i) {
    auto x = data.point(i);
    for (int j = 0; j < m; ++j)
      s[static_cast<std::size_t>(j)] =
          b[static_cast<std::size_t>(j)] +
          std::inner_product(w[static_cast<std::size_t>(j)].begin(),
                             w[static_cast<std::size_t>(j)].end(), x.begin(), 0.0);
    double mx = *std::max_element(s.begin(), s.end());
    double z = 0.0;
    for (double v : s) z += std::exp(v - mx);
    int label = data.labels[static_cast<std::size_t>(i)];
    loss += std::log(z) + mx - s[static_cast<std::size_t>(label)];
    if (gw) {
      for (int j = 0; j < m; ++j) {
        double p = std::exp(s[static_cast<std::size_t>(j)] - mx) / z;
        double coef = (p - (j == label ? 1.0 : 0.0)) / static_cast<double>(count);
        if (coef == 0.0) continue;
        auto& grow = (*gw)[static_cast<std::size_t>(j)];
        for (std::int64_t k = 0; k < n; ++k)
          grow[static_cast<std::size_t>(k)] += coef * x[static_cast<std::size_t>(k)];
        (*gb)[static_cast<std::size_t>(j)] += coef;
      }
    }
  }
  return loss / static_cast<double>(count);
}

}  // namespace

LinearModel train_linear(const Dataset& data, int epochs, double lr, std::uint64_t seed) {
  if (data.count() == 0) throw DomainError("cannot train on an empty dataset");
  if (epochs < 0 || !(lr > 0.0)) throw DomainError("need epochs >= 0 and lr > 0");
  int m = 1 + *std::max_element(data.labels.begin(), data.labels.end());
  const std::int64_t n = data.dim;

  Rng rng(seed);
  std::vector<std::vector<double>> w(static_cast<std::size_t>(m),
                                     std::vector<double>(static_cast<std::size_t>(n)));
  std::vector<double> b(static_cast<std::size_t>(m), 0.0);
  for (auto& row : w)
    for (auto& v : row) v = 0.01 * rng.next_gaussian();

  std::vector<std::vector<double>> gw(static_cast<std::size_t>(m),
                                      std::vector<double>(static_cast<std::size_t>(n)));
  std::vector<double> gb(static_cast<std::size_t>(m));
  std::vector<std::vector<double>> wc = w;
  std::vector<double> bc = b;

  double loss = softmax_loss_and_grad(data, w, b, nullptr, nullptr);
  for (int epoch = 0; epoch < epochs; ++epoch) {
    softmax_loss_and_grad(data, w, b, &gw, &gb);
    // backtracking: halve lr until the step does not increase the loss
    bool accepted = false;
    for (int half = 0; half < 60 && !accepted; ++half) {
      for (int j = 0; j < m; ++j) {
        for (std::int64_t k = 0; k < n; ++k)
          wc[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
              w[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] -
              lr * gw[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
        bc[static_cast<std::size_t>(j)] =
            b[static_cast<std::size_t>(j)] - lr * gb[static_cast<std::size_t>(j)];
      }
      double cand = softmax_loss_and_grad(data, wc, bc, nullptr, nullptr);
      if (cand <= loss) {
        w = wc;
        b = bc;
        loss = cand;
        accepted = true;
      } else {
        lr *= 0.5;
      }
    }
    if (!accepted) break;  // no decrease possible at float resolution
  }
  return LinearModel(std::move(w), std::move(b));
}

// ---- PGD ----

namespace {

// keep delta inside the lp ball and the cube; the box clip only shrinks
// coordinates toward x, so one rescale+clip round restores joint feasibility
// (the loop mirrors the alternating-projection contract with its 10-round cap)
void project(std::span<const double> x, std::vector<double>& delta, const NormOrder& norm,
             double eps) {
  if (norm.is_infinity()) {
    for (std::size_t i = 0; i < delta.size(); ++i) {
      double d = std::clamp(delta[i], -eps, eps);
      delta[i] = std::clamp(x[i] + d, 0.0, 1.0) - x[i];
    }
    return;
  }
  for (int round = 0; round < 10; ++round) {
    double nn = norm_lp(delta, norm);
    if (nn > eps && nn > 0.0) {
      double scale = eps / nn;
      for (auto& d : delta) d *= scale;
    }
    for (std::size_t i = 0; i < delta.size(); ++i)
      delta[i] = std::clamp(x[i] + delta[i], 0.0, 1.0) - x[i];
    if (norm_lp(delta, norm) <= eps * (1.0 + 1e-12)) break;
  }
}

AttackResult l0_attack(const Classifier& model, std::span<const double> x, int label,
                       std::int64_t budget, int steps,
                       std::vector<double> current) {
  const std::size_t n = x.size();
  std::vector<std::size_t> order(n);
  for (int it = 0; it < steps; ++it) {
    if (model.predict(current) != label) return {true, std::move(current)};
    MarginGrad mg = margin_grad(model, current, label);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::fabs(mg.grad[a]) > std::fabs(mg.grad[b]);
    });
    std::vector<double> candidate(x.begin(), x.end());
    for (std::int64_t k = 0; k < budget && k < static_cast<std::int64_t>(n); ++k) {
      std::size_t i = order[static_cast<std::size_t>(k)];
      if (mg.grad[i] == 0.0) continue;
      candidate[i] = mg.grad[i] > 0.0 ? 1.0 : 0.0;
    }
    if (candidate == current) break;  // fixed point, no better proposal
    current = std::move(candidate);
  }
  return {model.predict(current) != label, std::move(current)};
}

}  // namespace

AttackResult pgd_attack_from(const Classifier& model, std::span<const double> x,
                             std::span<const double> start, int label,
                             const NormOrder& norm, double eps, int steps,
                             double step_size, std::uint64_t seed) {
  if (x.size() != static_cast<std::size_t>(model.dim()) || start.size() != x.size())
    throw DomainError("attack point dimension mismatch");
  if (label < 0 || label >= model.num_classes()) throw DomainError("label out of range");
  check_in_cube(x);
  if (!(eps >= 0.0)) throw DomainError("attack radius must be >= 0");
  if (steps < 1) throw DomainError("need steps >= 1");
  if (norm.kind() == NormOrder::Kind::Finite && norm.p() < 1.0)
    throw CapabilityError("pgd projection supports p >= 1, inf, and 0");

  if (eps == 0.0) {
    std::vector<double> point(x.begin(), x.end());
    return {model.predict(point) != label, std::move(point)};
  }

  if (norm.is_zero()) {
    std::int64_t budget = static_cast<std::int64_t>(eps);
    std::vector<double> current(start.begin(), start.end());
    return l0_attack(model, x, label, budget, steps, std::move(current));
  }

  double step = step_size > 0.0 ? step_size : eps * 2.5 / static_cast<double>(steps);
  Rng rng(seed);

  auto margin_value = [&](std::span<const double> pt) {
    std::vector<double> s = model.scores(pt);
    double best = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < static_cast<int>(s.size()); ++j)
      if (j != label)
        best = std::max(best, s[static_cast<std::size_t>(j)] - s[static_cast<std::size_t>(label)]);
    return best;
  };

  auto run_once = [&](std::vector<double> delta) -> AttackResult {
    project(x, delta, norm, eps);
    std::vector<double> point(x.size());
    for (int it = 0; it <= steps; ++it) {
      for (std::size_t i = 0; i < x.size(); ++i) point[i] = x[i] + delta[i];
      if (model.predict(point) != label) return {true, std::move(point)};
      if (it == steps) break;

      MarginGrad mg = margin_grad(model, point, label);
      if (norm.is_infinity()) {
        for (std::size_t i = 0; i < delta.size(); ++i) {
          double g = mg.grad[i];
          double s = g > 0.0 ? 1.0 : (g < 0.0 ? -1.0 : 0.0);
          delta[i] += step * s;
        }
      } else {
        double gn = norm_l2(mg.grad);
        if (gn == 0.0) {
          // flat spot: a seeded nudge so the iteration cannot stall forever
          for (auto& g : mg.grad) g = rng.next_gaussian();
          gn = norm_l2(mg.grad);
        }
        for (std::size_t i = 0; i < delta.size(); ++i)
          delta[i] += step * mg.grad[i] / gn;
      }
      project(x, delta, norm, eps);
    }
    return {false, std::move(point)};
  };

  std::vector<double> delta(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) delta[i] = start[i] - x[i];
  AttackResult best = run_once(std::move(delta));
  if (best.success) return best;

  // the top-two margin surface has local maxima once there are three or more
  // classes; seeded random restarts inside the ball recover the usual
  // multi-start PGD behavior
  double best_loss = margin_value(best.point);
  for (int restart = 0; restart < 4; ++restart) {
    std::vector<double> d(x.size());
    if (norm.is_infinity()) {
      for (auto& v : d) v = (2.0 * rng.next_unit() - 1.0) * eps;
    } else {
      for (auto& v : d) v = rng.next_gaussian();
      double nn = norm_lp(d, norm);
      double radius = eps * rng.next_unit_open();
      if (nn > 0.0)
        for (auto& v : d) v *= radius / nn;
    }
    AttackResult attempt = run_once(std::move(d));
    if (attempt.success) return attempt;
    double loss = margin_value(attempt.point);
    if (loss > best_loss) {
      best_loss = loss;
      best = std::move(attempt);
    }
  }
  return best;
}

AttackResult pgd_attack(const Classifier& model, std::span<const double> x, int label,
                        const NormOrder& norm, double eps, int steps, double step_size,
                        std::uint64_t seed) {
  return pgd_attack_from(model, x, x, label, norm, eps, steps, step_size, seed);
}

// ---- susceptibility curves ----

namespace {

// index of the first grid radius that fools the model on point i, or
// grid.size() when none does; 0 with no attack when already misclassified
std::vector<std::int64_t> first_fooled_index(const Classifier& model, const Dataset& data,
                                             const NormOrder& norm,
                                             const std::vector<double>& grid, int steps,
                                             double step_size, std::uint64_t seed,
                                             bool parallel) {
  const std::int64_t count = data.count();
  std::vector<std::int64_t> first(static_cast<std::size_t>(count),
                                  static_cast<std::int64_t>(grid.size()));
  const std::int64_t g0 = static_cast<std::int64_t>(grid.size());

#pragma omp parallel for schedule(dynamic, 8) if (parallel)
  for (std::int64_t i = 0; i < count; ++i) {
    auto x = data.point(i);
    int label = data.labels[static_cast<std::size_t>(i)];
    if (model.predict(x) != label) {
      first[static_cast<std::size_t>(i)] = 0;
      continue;
    }
    std::vector<double> warm(x.begin(), x.end());
    std::int64_t found = g0;
    for (std::int64_t g = 0; g < g0; ++g) {
      double eps = grid[static_cast<std::size_t>(g)];
      if (eps == 0.0) continue;  // correctly classified, nothing to do at 0
      AttackResult res = pgd_attack_from(model, x, warm, label, norm, eps, steps,
                                         step_size, seed ^ static_cast<std::uint64_t>(i));
      warm = res.point;
      if (res.success) {
        found = g;
        break;
      }
    }
    first[static_cast<std::size_t>(i)] = found;
  }
  return first;
}

SusceptibilityCurve curve_impl(const Classifier& model, const Dataset& data,
                               const NormOrder& norm, const std::vector<double>& grid,
                               int steps, double step_size, std::uint64_t seed,
                               bool parallel) {
  if (grid.empty()) throw DomainError("eps grid must be nonempty");
  for (std::size_t g = 0; g < grid.size(); ++g) {
    if (!(grid[g] >= 0.0)) throw DomainError("eps grid entries must be >= 0");
    if (g > 0 && !(grid[g] > grid[g - 1]))
      throw DomainError("eps grid must be strictly increasing");
  }
  if (data.count() == 0) throw DomainError("empty dataset");
  if (norm.kind() == NormOrder::Kind::Finite && norm.p() < 1.0)
    throw CapabilityError("pgd projection supports p >= 1, inf, and 0");
  if (data.dim != model.dim()) throw DomainError("dataset/model dimension mismatch");

  std::vector<std::int64_t> first =
      first_fooled_index(model, data, norm, grid, steps, step_size, seed, parallel);

  SusceptibilityCurve curve;
  curve.reserve(grid.size());
  const double total = static_cast<double>(data.count());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    std::int64_t fooled = 0;
    for (std::int64_t f : first)
      if (f <= static_cast<std::int64_t>(g)) ++fooled;
    curve.push_back({grid[g], static_cast<double>(fooled) / total, data.count()});
  }
  return curve;
}

}  // namespace

SusceptibilityCurve susceptibility_curve(const Classifier& model, const Dataset& data,
                                         const NormOrder& norm,
                                         const std::vector<double>& eps_grid, int steps,
                                         double step_size, std::uint64_t seed) {
  return curve_impl(model, data, norm, eps_grid, steps, step_size, seed, true);
}

SusceptibilityCurve susceptibility_curve_serial(const Classifier& model,
                                                const Dataset& data, const NormOrder& norm,
                                                const std::vector<double>& eps_grid,
                                                int steps, double step_size,
                                                std::uint64_t seed) {
  return curve_impl(model, data, norm, eps_grid, steps, step_size, seed, false);
}

// ---- margin oracle ----

double linear_margin_distance(const LinearModel& model, std::span<const double> x,
                              int label) {
  if (label < 0 || label >= model.num_classes()) throw DomainError("label out of range");
  if (model.predict(x) != label) return 0.0;
  std::vector<double> s = model.scores(x);
  const auto& w = model.weights();
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < model.num_classes(); ++j) {
    if (j == label) continue;
    double dw2 = 0.0;
    for (std::size_t k = 0; k < w[static_cast<std::size_t>(j)].size(); ++k) {
      double d = w[static_cast<std::size_t>(label)][k] - w[static_cast<std::size_t>(j)][k];
      dw2 += d * d;
    }
    if (dw2 == 0.0) continue;  // parallel scores, no boundary with this class
    double gap = s[static_cast<std::size_t>(label)] - s[static_cast<std::size_t>(j)];
    best = std::min(best, gap / std::sqrt(dw2));
  }
  return std::max(0.0, best);
}

}  // namespace advbound
