#include "advbound/bounds.hpp"

#include <cmath>

#include "advbound/geometry.hpp"
#include "advbound/rng.hpp"
#include "doctest.h"

using namespace advbound;

namespace {
double rel_err(double got, double want) { return std::fabs((got - want) / want); }
const NormOrder l2 = NormOrder::finite(2);
}  // namespace

TEST_CASE("half-sphere expansion bound") {
  for (std::int64_t n : {2, 10, 1000}) {
    CHECK(rel_err(half_sphere_expansion_bound(n, 0.0).probability.value(),
                  0.37334293134224987) < 1e-13);
  }
  CHECK(rel_err(half_sphere_expansion_bound(1000, 0.1).probability.value(),
                0.99575645310635292) < 1e-13);
  // dominated by the exact S^2 value
  CHECK(half_sphere_expansion_bound(3, 0.5).probability.value() ==
        doctest::Approx(0.51195898421211308));
  CHECK(half_sphere_expansion_bound(3, 0.5).probability.value() <= 0.7397127693021015);
  CHECK_THROWS_AS(half_sphere_expansion_bound(1, 0.1), DomainError);
  CHECK_THROWS_AS(half_sphere_expansion_bound(10, -0.5), DomainError);
}

TEST_CASE("half-sphere bound is dominated by the cap-measure oracle") {
  for (std::int64_t n : {3, 10, 100, 1000, 5000}) {
    for (int i = 1; i <= 20; ++i) {
      double eps = i * 0.05;
      double bound = half_sphere_expansion_bound(n, eps).probability.value();
      double exact = half_sphere_expansion_exact(n, eps).value();
      REQUIRE(bound <= exact);
    }
  }
}

TEST_CASE("sphere susceptibility bound") {
  ClassStats uniform(1000, 0.5, 1.0);
  CHECK(rel_err(sphere_susceptibility_bound(uniform, 0.1).probability.value(),
                0.99575645310635292) < 1e-13);

  ClassStats hemi(3, 0.5, 2.0);
  auto b = sphere_susceptibility_bound(hemi, 0.5);
  CHECK(b.probability.value() == doctest::Approx(0.023917968424226155));
  // the exact unsafe mass of a hemisphere classifier with uniform-on-class
  // density is sin(eps); the bound must sit below it
  CHECK(b.probability.value() <= std::sin(0.5));

  // vacuous at eps=0 once V_c >= 1/sqrt(pi/8) ~ 1.596
  auto v = sphere_susceptibility_bound(ClassStats(50, 0.5, 1.7), 0.0);
  CHECK(v.probability.value() == 0.0);
  CHECK(v.valid);
  CHECK(!v.note.empty());

  CHECK_THROWS_AS(sphere_susceptibility_bound(ClassStats(50, 0.6, 1.0), 0.1),
                  PreconditionError);
  CHECK_THROWS_WITH_AS(sphere_susceptibility_bound(ClassStats(50, 0.6, 1.0), 0.1),
                       doctest::Contains("f_c <= 1/2"), PreconditionError);
}

TEST_CASE("tight cube expansion bound") {
  auto b = cube_expansion_bound_tight(Probability(0.5), l2, 100, 0.2);
  CHECK(rel_err(b.probability.value(), 0.69192902362985373) < 1e-12);
  // n cancels for p >= 2
  auto b2 = cube_expansion_bound_tight(Probability(0.5), l2, 10000, 0.2);
  CHECK(b.probability.value() == b2.probability.value());

  for (const NormOrder& norm : {NormOrder::finite(0.7), l2, NormOrder::infinity()}) {
    CHECK(cube_expansion_bound_tight(Probability(0.5), norm, 100, 0.0).probability.value() ==
          0.5);
  }
  CHECK_THROWS_AS(cube_expansion_bound_tight(Probability(0.0), l2, 100, 0.1), DomainError);
  CHECK_THROWS_AS(cube_expansion_bound_tight(Probability(1.0), l2, 100, 0.1), DomainError);
  CHECK_THROWS_AS(cube_expansion_bound_tight(Probability(0.5), NormOrder::zero(), 100, 0.1),
                  DomainError);
}

TEST_CASE("tight cube bound is dominated by the slab oracle") {
  int checked = 0;
  for (double a : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (double p : {0.5, 1.0, 2.0, 3.0}) {
      NormOrder norm = NormOrder::finite(p);
      for (std::int64_t n : {5, 50, 500}) {
        for (double eps : {0.05, 0.2, 0.5, 1.0}) {
          double bound =
              cube_expansion_bound_tight(Probability(a), norm, n, eps).probability.value();
          double oracle = slab_expansion_exact(a, eps, norm).value();
          REQUIRE(bound <= oracle);
          ++checked;
        }
      }
    }
    // l-infinity rides the p* = 2 branch
    double bound = cube_expansion_bound_tight(Probability(a), NormOrder::infinity(), 64, 0.3)
                       .probability.value();
    REQUIRE(bound <= slab_expansion_exact(a, 0.3, NormOrder::finite(2)).value());
    ++checked;
  }
  CHECK(checked >= 50);
}

TEST_CASE("simplified cube bound: mills vs as-printed erratum") {
  auto mills = cube_expansion_bound_simple(l2, 100, 0.2, SimpleVariant::Mills);
  auto printed = cube_expansion_bound_simple(l2, 100, 0.2, SimpleVariant::AsPrinted);
  CHECK(rel_err(mills.probability.value(), 0.29819722387429386) < 1e-12);
  CHECK(rel_err(printed.probability.value(), 0.85963944477485877) < 1e-12);

  double slab = slab_expansion_exact(0.5, 0.2, l2).value();  // 0.7
  double tight =
      cube_expansion_bound_tight(Probability(0.5), l2, 100, 0.2).probability.value();
  CHECK(mills.probability.value() <= tight);
  CHECK(tight <= slab);
  CHECK(printed.probability.value() > slab);  // the as-printed form overshoots
  CHECK(!printed.note.empty());

  // mills approaches 1 monotonically in eps for p=1
  NormOrder l1 = NormOrder::finite(1);
  double prev = 0.0;
  for (double eps : {1.0, 2.0, 4.0, 8.0, 16.0}) {
    double v = cube_expansion_bound_simple(l1, 100, eps, SimpleVariant::Mills)
                   .probability.value();
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(prev > 0.999);

  CHECK_THROWS_AS(cube_expansion_bound_simple(l2, 100, 0.0, SimpleVariant::Mills),
                  DomainError);
}

TEST_CASE("mills variant never exceeds the tight bound at vol = 1/2") {
  for (double p : {0.5, 1.0, 2.0, 5.0}) {
    NormOrder norm = NormOrder::finite(p);
    for (std::int64_t n : {2, 20, 200}) {
      for (int i = 1; i <= 30; ++i) {
        double eps = 0.05 * i;
        double mills = cube_expansion_bound_simple(norm, n, eps, SimpleVariant::Mills)
                           .probability.value();
        double tight =
            cube_expansion_bound_tight(Probability(0.5), norm, n, eps).probability.value();
        REQUIRE(mills <= tight + 1e-12);
      }
    }
  }
}

TEST_CASE("cube susceptibility bound forms") {
  // Eq.(5)-style spot value: p >= 2 kills the n dependence entirely
  ClassStats stats(100, 0.5, 1.0);
  auto v = cube_susceptibility_bound(stats, l2, 1.0, CubeBoundForm::SimpleAsPrinted);
  CHECK(rel_err(v.probability.value(), 0.99312229129795151) < 1e-12);
  ClassStats other(100000, 0.5, 1.0);
  CHECK(cube_susceptibility_bound(other, l2, 1.0, CubeBoundForm::SimpleAsPrinted)
            .probability.value() == v.probability.value());

  // the refined form stays informative at l-inf scales where the simple form
  // is vacuous
  ClassStats imagenet(150528, 1e-3, 1000.0);
  auto refined =
      cube_susceptibility_bound(imagenet, NormOrder::infinity(), 1e-3,
                                CubeBoundForm::LinfRefined);
  CHECK(refined.probability.value() ==
        doctest::Approx(0.0084074300865721584).epsilon(1e-9));
  CHECK(refined.probability.value() > 0.0);
  auto simple = cube_susceptibility_bound(imagenet, NormOrder::infinity(), 1e-3,
                                          CubeBoundForm::SimpleMills);
  CHECK(simple.probability.value() == 0.0);  // vacuous

  ClassStats unit(150528, 1e-3, 1.0);
  CHECK(cube_susceptibility_bound(unit, NormOrder::infinity(), 1e-3,
                                  CubeBoundForm::LinfRefined)
            .probability.value() == doctest::Approx(0.99900840743008657));

  // every form approaches 1 as eps grows
  for (auto form : {CubeBoundForm::Tight, CubeBoundForm::SimpleMills,
                    CubeBoundForm::SimpleAsPrinted, CubeBoundForm::LinfRefined}) {
    CHECK(cube_susceptibility_bound(ClassStats(50, 0.3, 2.0), l2, 50.0, form)
              .probability.value() == doctest::Approx(1.0));
  }

  CHECK_THROWS_AS(
      cube_susceptibility_bound(ClassStats(50, 0.6, 1.0), l2, 0.1, CubeBoundForm::Tight),
      PreconditionError);
  CHECK_THROWS_AS(cube_susceptibility_bound(ClassStats(50, 0.5, 1.0), l2, 0.1,
                                            CubeBoundForm::LinfRefined),
                  PreconditionError);
  CHECK_THROWS_AS(cube_susceptibility_bound(ClassStats(50, 0.4, 1.0), NormOrder::finite(1),
                                            0.1, CubeBoundForm::LinfRefined),
                  PreconditionError);
}

TEST_CASE("small-p expansion bound") {
  auto b = small_p_expansion_bound(Probability(0.5), NormOrder::zero(), 4, 2.0);
  CHECK(rel_err(b.probability.value(), 0.26424111765711536) < 1e-13);

  // vacuous case dominated by the exact binomial oracle
  auto v = small_p_expansion_bound(Probability(std::pow(2.0, -10)), NormOrder::zero(), 10,
                                   5.0);
  CHECK(v.probability.value() == 0.0);
  CHECK(v.valid);
  CHECK(subcube_hamming_expansion_exact(0.5, 10, 5).value() ==
        doctest::Approx(0.623046875));

  for (const NormOrder& norm : {NormOrder::zero(), NormOrder::finite(0.5), l2}) {
    CHECK(small_p_expansion_bound(Probability(0.7), norm, 8, 0.0).probability.value() ==
          0.0);
  }
  CHECK(small_p_expansion_bound(Probability(0.25), NormOrder::zero(), 8, 8.0)
            .probability.value() == 1.0);
  CHECK(small_p_expansion_bound(Probability(0.25), NormOrder::zero(), 8, 9.0)
            .probability.value() == 1.0);

  CHECK_THROWS_AS(small_p_expansion_bound(Probability(0.0), l2, 8, 1.0), DomainError);
  CHECK_THROWS_AS(small_p_expansion_bound(Probability(0.5), NormOrder::zero(), 8, 2.5),
                  DomainError);
  CHECK_THROWS_AS(small_p_expansion_bound(Probability(0.5), NormOrder::infinity(), 8, 1.0),
                  DomainError);
}

TEST_CASE("optimized small-p bound and its activation edge") {
  double edge = std::sqrt(784.0 * std::log(2.0) / 2.0);
  CHECK(edge == doctest::Approx(16.483740315216646).epsilon(1e-14));

  auto at_edge = small_p_expansion_bound_tight(Probability(0.5), 0.0, 784, edge);
  CHECK(at_edge.valid);
  CHECK(at_edge.probability.value() == 0.0);

  auto b = small_p_expansion_bound_tight(Probability(0.5), 0.0, 784, 30.0);
  CHECK(b.valid);
  CHECK(rel_err(b.probability.value(), 0.37252037027201881) < 1e-12);

  auto below = small_p_expansion_bound_tight(Probability(0.5), 0.0, 784, 16.0);
  CHECK(!below.valid);
  CHECK(!below.note.empty());
}

TEST_CASE("small-p bounds are dominated by the binomial-tail oracle") {
  for (std::int64_t n : {2, 5, 10, 20, 30}) {
    for (double a : {0.3, 0.5, 0.7, 0.9}) {
      double vol = std::pow(a, static_cast<double>(n));
      for (std::int64_t e = 0; e <= n; ++e) {
        double oracle = subcube_hamming_expansion_exact(a, n, e).value();
        double lemma = small_p_expansion_bound(Probability(vol), NormOrder::zero(), n,
                                               static_cast<double>(e))
                           .probability.value();
        REQUIRE(lemma <= oracle + 1e-12);
        auto tight = small_p_expansion_bound_tight(Probability(vol), 0.0, n,
                                                   static_cast<double>(e));
        if (tight.valid) REQUIRE(tight.probability.value() <= oracle + 1e-12);
      }
    }
  }
}

TEST_CASE("sparse susceptibility bound") {
  ClassStats stats(784, 0.5, 1.0);
  CHECK(rel_err(sparse_susceptibility_bound(stats, 56).probability.value(),
                0.96336872222253164) < 1e-13);
  CHECK(sparse_susceptibility_bound(stats, 0).probability.value() == 0.0);
  CHECK(sparse_susceptibility_bound(stats, 784).probability.value() == 1.0);
  CHECK_THROWS_AS(sparse_susceptibility_bound(ClassStats(784, 0.7, 1.0), 10),
                  PreconditionError);
  CHECK_THROWS_AS(sparse_susceptibility_bound(stats, -1), DomainError);
}

TEST_CASE("existence threshold and check") {
  auto t = existence_support_threshold(l2, 100, 1.0);
  CHECK(t.valid);
  CHECK(rel_err(t.threshold.value(), 0.021606959131886125) < 1e-13);

  // p* = 2 wipes out the n exponent: bit-identical across dimensions
  auto t1 = existence_support_threshold(l2, 10, 1.0);
  auto t2 = existence_support_threshold(l2, 10000, 1.0);
  CHECK(t1.threshold.value() == t2.threshold.value());

  // side length e^{-pi} of a supporting hypercube activates the bound at
  // eps = sqrt(n)
  std::int64_t n = 40;
  double side = std::exp(-3.14159265358979323846) + 1e-3;
  auto thr = existence_support_threshold(l2, n, std::sqrt(static_cast<double>(n)));
  CHECK(std::pow(side, static_cast<double>(n)) >= thr.threshold.value());

  auto t0 = existence_support_threshold(NormOrder::zero(), 784, 16.0);
  CHECK(!t0.valid);
  auto t0b = existence_support_threshold(NormOrder::zero(), 784, 17.0);
  CHECK(t0b.valid);

  CHECK(existence_check(Probability(0.05), l2, 100, 1.0));
  CHECK(!existence_check(Probability(0.01), l2, 100, 1.0));
  CHECK(existence_check(Probability(1.0), l2, 100, 0.37));
  CHECK_THROWS_AS(existence_check(Probability(0.5), NormOrder::zero(), 784, 16.0),
                  PreconditionError);
}

TEST_CASE("resolution transfer scales the radius and keeps the probability") {
  auto up = mnist_rescale_transfer(1.0, Probability(0.9), 2, TransferDirection::Up);
  CHECK(up.eps == 2.0);
  CHECK(up.p_fool == 0.9);

  auto id = mnist_rescale_transfer(0.37, Probability(0.4), 1, TransferDirection::Up);
  CHECK(id.eps == 0.37);

  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    double eps = rng.next_unit() * 10.0;
    for (std::int64_t b : {1, 2, 3, 4, 7}) {
      auto u = mnist_rescale_transfer(eps, Probability(0.5), b, TransferDirection::Up);
      auto d = mnist_rescale_transfer(u.eps, Probability(0.5), b, TransferDirection::Down);
      // dyadic b round-trips exactly; odd b may round once in each direction
      if ((b & (b - 1)) == 0)
        REQUIRE(d.eps == eps);
      else
        REQUIRE(std::fabs(d.eps - eps) <=
                std::fabs(std::nexttoward(eps, 2 * eps) - eps));
    }
  }
  CHECK_THROWS_AS(mnist_rescale_transfer(1.0, Probability(0.9), 0, TransferDirection::Up),
                  DomainError);
}

TEST_CASE("every bound is monotone in eps and antitone in the density supremum") {
  Rng rng(123);
  for (int trial = 0; trial < 200; ++trial) {
    std::int64_t n = 2 + static_cast<std::int64_t>(rng.next_unit() * 500);
    double e1 = rng.next_unit() * 2.0 + 1e-6;
    double e2 = e1 + rng.next_unit();
    double u1 = 1.0 + rng.next_unit() * 4.0;
    double u2 = u1 + rng.next_unit() * 4.0;
    double fc = rng.next_unit() * 0.5;

    ClassStats s1(n, fc, u1), s2(n, fc, u2);
    REQUIRE(sphere_susceptibility_bound(s1, e1).probability.value() <=
            sphere_susceptibility_bound(s1, e2).probability.value());
    REQUIRE(sphere_susceptibility_bound(s2, e1).probability.value() <=
            sphere_susceptibility_bound(s1, e1).probability.value());

    for (auto form : {CubeBoundForm::Tight, CubeBoundForm::SimpleMills}) {
      REQUIRE(cube_susceptibility_bound(s1, l2, e1, form).probability.value() <=
              cube_susceptibility_bound(s1, l2, e2, form).probability.value());
      REQUIRE(cube_susceptibility_bound(s2, l2, e1, form).probability.value() <=
              cube_susceptibility_bound(s1, l2, e1, form).probability.value());
    }

    std::int64_t i1 = static_cast<std::int64_t>(rng.next_unit() * n);
    std::int64_t i2 = std::min<std::int64_t>(n, i1 + 1 + static_cast<std::int64_t>(
                                                             rng.next_unit() * 10));
    REQUIRE(sparse_susceptibility_bound(s1, i1).probability.value() <=
            sparse_susceptibility_bound(s1, i2).probability.value());
    REQUIRE(sparse_susceptibility_bound(s2, i1).probability.value() <=
            sparse_susceptibility_bound(s1, i1).probability.value());
  }
}
