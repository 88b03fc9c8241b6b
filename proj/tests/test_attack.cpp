#include "advbound/attack.hpp"

#include <algorithm>
#include <cmath>

#include "doctest.h"

using namespace advbound;

namespace {

const NormOrder l2 = NormOrder::finite(2);
const NormOrder linf = NormOrder::infinity();

double lp_norm(std::span<const double> v, const NormOrder& n) {
  if (n.is_zero()) {
    double c = 0;
    for (double x : v)
      if (x != 0.0) c += 1;
    return c;
  }
  if (n.is_infinity()) {
    double m = 0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
  }
  double s = 0;
  for (double x : v) s += std::pow(std::fabs(x), n.p());
  return std::pow(s, 1.0 / n.p());
}

bool feasible(std::span<const double> x, std::span<const double> pt, const NormOrder& n,
              double eps) {
  std::vector<double> delta(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(pt[i] >= 0.0 && pt[i] <= 1.0)) return false;
    delta[i] = pt[i] - x[i];
  }
  return lp_norm(delta, n) <= eps * (1.0 + 1e-9);
}

// central finite difference of s_j - s_c
std::vector<double> fd_grad(const Classifier& model, std::vector<double> x, int j, int c,
                            double h) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double keep = x[i];
    x[i] = keep + h;
    auto sp = model.scores(x);
    x[i] = keep - h;
    auto sm = model.scores(x);
    x[i] = keep;
    g[i] = ((sp[static_cast<std::size_t>(j)] - sp[static_cast<std::size_t>(c)]) -
            (sm[static_cast<std::size_t>(j)] - sm[static_cast<std::size_t>(c)])) /
           (2 * h);
  }
  return g;
}

double grad_rel_err(std::span<const double> a, std::span<const double> b) {
  double diff = 0, ref = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    ref += b[i] * b[i];
  }
  return std::sqrt(diff) / std::max(std::sqrt(ref), 1e-12);
}

}  // namespace

TEST_CASE("predict breaks ties toward the lowest class index") {
  LinearModel m({{1.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}, {0.0, 0.0, 0.0});
  std::vector<double> x = {0.5, 0.25};
  CHECK(m.predict(x) == 0);  // classes 0 and 1 tie
  std::vector<double> y = {0.25, 0.5};
  CHECK(m.predict(y) == 2);
}

TEST_CASE("analytic gradients match finite differences") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    std::int64_t n = 3 + static_cast<std::int64_t>(rng.next_unit() * 12);
    int classes = 2 + static_cast<int>(rng.next_unit() * 3);

    std::vector<std::vector<double>> w(static_cast<std::size_t>(classes),
                                       std::vector<double>(static_cast<std::size_t>(n)));
    std::vector<double> b(static_cast<std::size_t>(classes));
    for (auto& row : w)
      for (auto& v : row) v = rng.next_gaussian();
    for (auto& v : b) v = rng.next_gaussian();
    LinearModel lin(w, b);
    Mlp1Model mlp = Mlp1Model::random(n, 7, classes, 1000 + static_cast<std::uint64_t>(trial));

    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& v : x) v = rng.next_unit();
    int c = static_cast<int>(rng.next_unit() * classes);
    int j = (c + 1) % classes;

    for (const Classifier* model : {static_cast<const Classifier*>(&lin),
                                    static_cast<const Classifier*>(&mlp)}) {
      auto analytic = model->score_diff_grad(x, j, c);
      auto numeric = fd_grad(*model, x, j, c, 1e-5);
      REQUIRE(grad_rel_err(analytic, numeric) <= 1e-5);
    }
  }
}

TEST_CASE("synthetic dataset generation") {
  Dataset empty = synth_dataset(4, 2, 0.1, 0, 3);
  CHECK(empty.count() == 0);

  // degenerate spread concentrates each class at its center
  Dataset tight = synth_dataset(6, 3, 1e-9, 90, 5);
  for (std::int64_t i = 3; i < tight.count(); ++i) {
    auto a = tight.point(i);
    auto b = tight.point(i % 3);
    double d = 0;
    for (std::size_t k = 0; k < a.size(); ++k) d += (a[k] - b[k]) * (a[k] - b[k]);
    REQUIRE(std::sqrt(d) < 1e-6);
  }

  Dataset once = synth_dataset(5, 2, 0.1, 100, 7);
  Dataset again = synth_dataset(5, 2, 0.1, 100, 7);
  CHECK(once.xs == again.xs);
  CHECK(once.labels == again.labels);
  for (double v : once.xs) REQUIRE((v >= 0.0 && v <= 1.0));

  CHECK_THROWS_AS(synth_dataset(0, 2, 0.1, 10, 1), DomainError);
  CHECK_THROWS_AS(synth_dataset(4, 2, 0.0, 10, 1), DomainError);
}

TEST_CASE("training reaches separable optima deterministically") {
  Dataset data = synth_dataset(2, 2, 0.05, 1000, 11);
  LinearModel m = train_linear(data, 400, 1.0, 21);
  std::int64_t correct = 0;
  for (std::int64_t i = 0; i < data.count(); ++i)
    if (m.predict(data.point(i)) == data.labels[static_cast<std::size_t>(i)]) ++correct;
  CHECK(static_cast<double>(correct) / static_cast<double>(data.count()) >= 0.99);

  LinearModel m2 = train_linear(data, 400, 1.0, 21);
  CHECK(m.weights() == m2.weights());
  CHECK(m.biases() == m2.biases());

  // single-class data predicts that class everywhere
  Dataset mono = synth_dataset(3, 1, 0.1, 50, 13);
  LinearModel single = train_linear(mono, 50, 0.5, 1);
  Rng rng(2);
  for (int i = 0; i < 20; ++i) {
    std::vector<double> x = {rng.next_unit(), rng.next_unit(), rng.next_unit()};
    CHECK(single.predict(x) == 0);
  }

  Dataset none;
  none.dim = 3;
  CHECK_THROWS_AS(train_linear(none, 10, 0.1, 1), DomainError);
}

TEST_CASE("pgd at eps=0 reduces to a misclassification check") {
  LinearModel m({{1.0, 0.0}, {0.0, 1.0}}, {0.0, 0.0});
  std::vector<double> x = {0.8, 0.2};
  CHECK(!pgd_attack(m, x, 0, l2, 0.0, 10, 0.0, 1).success);
  CHECK(pgd_attack(m, x, 1, l2, 0.0, 10, 0.0, 1).success);
}

TEST_CASE("pgd iterates stay feasible step by step") {
  Rng rng(23);
  Dataset data = synth_dataset(6, 3, 0.15, 30, 31);
  LinearModel m = train_linear(data, 100, 1.0, 31);
  for (const NormOrder& norm : {l2, linf, NormOrder::finite(3.0)}) {
    for (std::int64_t i = 0; i < 10; ++i) {
      auto x = data.point(i);
      double eps = 0.05 + rng.next_unit() * 0.4;
      std::vector<double> warm(x.begin(), x.end());
      // drive the attack one step at a time: every intermediate iterate is a
      // returned point and must satisfy both constraints
      for (int s = 0; s < 25; ++s) {
        auto res = pgd_attack_from(m, x, warm, data.labels[static_cast<std::size_t>(i)],
                                   norm, eps, 1, eps * 0.2, 7);
        REQUIRE(feasible(x, res.point, norm, eps));
        warm = res.point;
      }
    }
  }
}

TEST_CASE("pgd with the full l-inf budget matches the exhaustive vertex oracle") {
  Rng rng(37);
  int agreements = 0, total = 0;
  for (int trial = 0; trial < 60; ++trial) {
    std::int64_t n = 2 + static_cast<std::int64_t>(rng.next_unit() * 4);  // n <= 6
    int classes = 2 + static_cast<int>(rng.next_unit() * 2);
    std::vector<std::vector<double>> w(static_cast<std::size_t>(classes),
                                       std::vector<double>(static_cast<std::size_t>(n)));
    std::vector<double> b(static_cast<std::size_t>(classes));
    for (auto& row : w)
      for (auto& v : row) v = rng.next_gaussian();
    for (auto& v : b) v = 0.3 * rng.next_gaussian();
    LinearModel m(w, b);

    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& v : x) v = rng.next_unit();
    int label = m.predict(x);

    // linear scores: some class beats `label` somewhere iff it does at a vertex
    bool vertex_win = false;
    for (std::int64_t mask = 0; mask < (1LL << n); ++mask) {
      std::vector<double> v(static_cast<std::size_t>(n));
      for (std::int64_t k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = (mask >> k) & 1 ? 1.0 : 0.0;
      if (m.predict(v) != label) {
        vertex_win = true;
        break;
      }
    }

    auto res = pgd_attack(m, x, label, linf, 1.0, 300, 0.02, 5);
    total++;
    if (res.success == vertex_win) agreements++;
  }
  // gradient ascent on a convex piecewise-linear margin with the whole cube
  // reachable: expect exact agreement
  CHECK(agreements == total);
}

TEST_CASE("pgd-l2 success agrees with the margin oracle on interior points") {
  // a 2-class boundary through the middle of the cube, with test points kept
  // at least 0.3 away from every box face so the oracle ignores the box
  // legitimately
  const std::int64_t n = 20;
  Rng rng(41);
  std::vector<double> w1(static_cast<std::size_t>(n));
  for (auto& v : w1) v = rng.next_gaussian();
  double b1 = 0.0;
  for (double v : w1) b1 -= 0.5 * v;  // boundary passes through the center
  LinearModel m({std::vector<double>(static_cast<std::size_t>(n), 0.0), w1}, {0.0, b1});

  int considered = 0, agreed = 0;
  for (int i = 0; i < 200; ++i) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (auto& v : x) v = 0.3 + 0.4 * rng.next_unit();
    int label = m.predict(x);
    double margin = linear_margin_distance(m, x, label);
    for (double eps : {0.05, 0.1, 0.2}) {
      if (!(margin + eps < 0.3)) continue;  // interior regime only
      ++considered;
      bool oracle_says = margin <= eps;
      auto res = pgd_attack(m, x, label, l2, eps, 100, 0.0, 3);
      if (res.success == oracle_says) ++agreed;
    }
  }
  REQUIRE(considered > 100);
  CHECK(static_cast<double>(agreed) / considered >= 0.99);
}

TEST_CASE("l0 attack flips the highest-leverage pixels to box extremes") {
  // class 1 wins once more than half the coordinates are pushed to 1
  std::int64_t n = 8;
  std::vector<std::vector<double>> w = {std::vector<double>(8, 0.0),
                                        std::vector<double>(8, 0.5)};
  LinearModel m(w, {0.0, -2.0});
  std::vector<double> x(static_cast<std::size_t>(n), 0.0);
  REQUIRE(m.predict(x) == 0);

  auto fail = pgd_attack(m, x, 0, NormOrder::zero(), 4.0, 20, 0.0, 9);
  CHECK(!fail.success);  // 4 pixels give a tie, which keeps class 0
  auto win = pgd_attack(m, x, 0, NormOrder::zero(), 5.0, 20, 0.0, 9);
  CHECK(win.success);
  CHECK(feasible(x, win.point, NormOrder::zero(), 5.0));
}

TEST_CASE("linear margin distance") {
  LinearModel m({{1.0}, {-1.0}}, {0.0, 0.0});
  std::vector<double> x = {0.3};
  CHECK(m.predict(x) == 0);
  CHECK(linear_margin_distance(m, x, 0) == doctest::Approx(0.3).epsilon(1e-12));

  // scale invariance of the ratio
  LinearModel scaled({{7.0}, {-7.0}}, {0.0, 0.0});
  CHECK(linear_margin_distance(scaled, x, 0) == doctest::Approx(0.3).epsilon(1e-12));

  // on the bisector the distance vanishes (tie predicts class 0)
  std::vector<double> mid = {0.0};
  CHECK(linear_margin_distance(m, mid, 0) == 0.0);
  // misclassified points report 0
  CHECK(linear_margin_distance(m, x, 1) == 0.0);

  // cross-check against a 1-d line search
  for (double xv : {0.1, 0.45, 0.9}) {
    std::vector<double> pt = {xv};
    double dist = linear_margin_distance(m, pt, 0);
    double probe = 0.0;
    while (m.predict(std::vector<double>{xv - probe}) == 0 && probe < 2.0) probe += 1e-4;
    CHECK(dist == doctest::Approx(probe).epsilon(1e-2));
  }
}

TEST_CASE("susceptibility curve: eps0 is the test error, monotone, deterministic") {
  auto [train, test] = split_dataset(synth_dataset(10, 2, 0.2, 350, 51), 200);
  LinearModel m = train_linear(train, 150, 1.0, 51);

  std::vector<double> grid = {0.0, 0.05, 0.1, 0.2, 0.4, 0.8, 1.6};
  auto curve = susceptibility_curve(m, test, l2, grid, 40, 0.0, 61);
  REQUIRE(curve.size() == grid.size());

  std::int64_t errors = 0;
  for (std::int64_t i = 0; i < test.count(); ++i)
    if (m.predict(test.point(i)) != test.labels[static_cast<std::size_t>(i)]) ++errors;
  CHECK(curve[0].fooled_fraction ==
        static_cast<double>(errors) / static_cast<double>(test.count()));

  for (std::size_t g = 1; g < curve.size(); ++g)
    REQUIRE(curve[g].fooled_fraction >= curve[g - 1].fooled_fraction);
  CHECK(curve.back().fooled_fraction > 0.9);  // large eps fools nearly everything

  auto serial = susceptibility_curve_serial(m, test, l2, grid, 40, 0.0, 61);
  for (std::size_t g = 0; g < curve.size(); ++g)
    REQUIRE(curve[g].fooled_fraction == serial[g].fooled_fraction);

  CHECK_THROWS_AS(susceptibility_curve(m, test, l2, {0.1, 0.1}, 10, 0.0, 1), DomainError);
  CHECK_THROWS_AS(susceptibility_curve(m, test, l2, {}, 10, 0.0, 1), DomainError);
}

TEST_CASE("concentrated classes show a sharper susceptibility rise than diffuse ones") {
  auto rise_width = [](const SusceptibilityCurve& c) {
    double lo = c.back().eps, hi = c.back().eps;
    for (const auto& pt : c)
      if (pt.fooled_fraction >= 0.1) {
        lo = pt.eps;
        break;
      }
    for (const auto& pt : c)
      if (pt.fooled_fraction >= 0.9) {
        hi = pt.eps;
        break;
      }
    return hi - lo;
  };

  std::vector<double> grid;
  for (int i = 0; i <= 60; ++i) grid.push_back(0.01 + 0.05 * i);

  auto [conc_train, conc_test] = split_dataset(synth_dataset(100, 2, 0.02, 500, 71), 300);
  LinearModel conc_model = train_linear(conc_train, 150, 1.0, 71);
  auto conc = susceptibility_curve(conc_model, conc_test, l2, grid, 40, 0.0, 75);

  auto [diff_train, diff_test] = split_dataset(synth_dataset(100, 2, 0.2, 500, 71), 300);
  LinearModel diff_model = train_linear(diff_train, 150, 1.0, 71);
  auto diff = susceptibility_curve(diff_model, diff_test, l2, grid, 40, 0.0, 75);

  CHECK(rise_width(conc) < rise_width(diff));
}
