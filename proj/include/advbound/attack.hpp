#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "advbound/norms.hpp"
#include "advbound/rng.hpp"

namespace advbound {

/// Labeled points in [0,1]^n, flat row-major storage.
struct Dataset {
  std::int64_t dim = 0;
  std::vector<double> xs;      // count * dim
  std::vector<int> labels;

  std::int64_t count() const { return static_cast<std::int64_t>(labels.size()); }
  std::span<const double> point(std::int64_t i) const {
    return std::span<const double>(xs.data() + i * dim, static_cast<std::size_t>(dim));
  }
};

/// Discrete classifier with differentiable class scores.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual std::int64_t dim() const = 0;
  virtual int num_classes() const = 0;
  virtual std::vector<double> scores(std::span<const double> x) const = 0;
  // gradient of s_j(x) - s_c(x) with respect to x
  virtual std::vector<double> score_diff_grad(std::span<const double> x, int j,
                                              int c) const = 0;

  // argmax of scores, ties broken by lowest class index
  int predict(std::span<const double> x) const;
};

/// Affine scores s = W x + b.
class LinearModel : public Classifier {
 public:
  LinearModel(std::vector<std::vector<double>> weights, std::vector<double> biases);

  std::int64_t dim() const override { return dim_; }
  int num_classes() const override { return static_cast<int>(weights_.size()); }
  std::vector<double> scores(std::span<const double> x) const override;
  std::vector<double> score_diff_grad(std::span<const double> x, int j,
                                      int c) const override;

  const std::vector<std::vector<double>>& weights() const { return weights_; }
  const std::vector<double>& biases() const { return biases_; }

 private:
  std::vector<std::vector<double>> weights_;  // m x n
  std::vector<double> biases_;                // m
  std::int64_t dim_;
};

/// One-hidden-layer network with tanh activation and analytic gradients.
class Mlp1Model : public Classifier {
 public:
  Mlp1Model(std::vector<std::vector<double>> w1, std::vector<double> b1,
            std::vector<std::vector<double>> w2, std::vector<double> b2);

  static Mlp1Model random(std::int64_t dim, int hidden, int classes, std::uint64_t seed);

  std::int64_t dim() const override { return dim_; }
  int num_classes() const override { return static_cast<int>(w2_.size()); }
  std::vector<double> scores(std::span<const double> x) const override;
  std::vector<double> score_diff_grad(std::span<const double> x, int j,
                                      int c) const override;

 private:
  std::vector<double> hidden_act(std::span<const double> x) const;
  std::vector<std::vector<double>> w1_;  // h x n
  std::vector<double> b1_;               // h
  std::vector<std::vector<double>> w2_;  // m x h
  std::vector<double> b2_;               // m
  std::int64_t dim_;
};

// Synthetic classification data: m class centers in the cube, points drawn
// from a truncated isotropic Gaussian of scale `spread` around each center,
// clipped to [0,1]^n. Deterministic per seed.
Dataset synth_dataset(std::int64_t n, int m, double spread, std::int64_t count,
                      std::uint64_t seed);

// First `first_count` points and the rest, e.g. a train/test split of one
// draw (both halves then share the class centers).
std::pair<Dataset, Dataset> split_dataset(const Dataset& data, std::int64_t first_count);

// Multinomial logistic regression by full-batch gradient descent with
// backtracking (lr halves whenever a step would increase the loss), so the
// training loss is nonincreasing per epoch. Deterministic per seed.
LinearModel train_linear(const Dataset& data, int epochs, double lr, std::uint64_t seed);

struct AttackResult {
  bool success;               // model prediction != label at `point`
  std::vector<double> point;  // final iterate, always feasible
};

// Projected gradient ascent on the margin loss max_{j!=c} s_j - s_c inside
// {||x'-x||_p <= eps} intersect [0,1]^n. Supported norms: l2 and any finite
// p >= 1 (radial rescale then box clip, repeated to joint feasibility),
// l_inf (coordinate clip), and l0 (keep the eps highest-|gradient|
// coordinates and push each to its loss-increasing box extreme).
AttackResult pgd_attack(const Classifier& model, std::span<const double> x, int label,
                        const NormOrder& norm, double eps, int steps, double step_size,
                        std::uint64_t seed);

// As above but starting from a feasible warm-start perturbation of x.
AttackResult pgd_attack_from(const Classifier& model, std::span<const double> x,
                             std::span<const double> start, int label,
                             const NormOrder& norm, double eps, int steps,
                             double step_size, std::uint64_t seed);

struct CurvePoint {
  double eps;
  double fooled_fraction;
  std::int64_t n_points;
};

/// Fraction of points misclassified or successfully attacked, per eps.
/// Nondecreasing in eps by the warm-start contract.
using SusceptibilityCurve = std::vector<CurvePoint>;

// step_size <= 0 selects the default eps * 2.5 / steps per grid point.
// Per-point attacks run under OpenMP; results do not depend on thread count.
SusceptibilityCurve susceptibility_curve(const Classifier& model, const Dataset& data,
                                         const NormOrder& norm,
                                         const std::vector<double>& eps_grid, int steps,
                                         double step_size, std::uint64_t seed);
SusceptibilityCurve susceptibility_curve_serial(const Classifier& model,
                                                const Dataset& data, const NormOrder& norm,
                                                const std::vector<double>& eps_grid,
                                                int steps, double step_size,
                                                std::uint64_t seed);

// Exact l2 distance from x to the decision boundary of a linear model,
// ignoring the box: min_{j != label} (s_label - s_j) / ||w_label - w_j||_2.
// Returns 0 when x is already misclassified.
double linear_margin_distance(const LinearModel& model, std::span<const double> x,
                              int label);

}  // namespace advbound
