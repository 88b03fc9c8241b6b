// Compares the OpenMP kernels against their serial reference implementations
// on representative workloads and confirms the results are identical.

#include <chrono>
#include <cstdio>
#include <vector>

#include "advbound/attack.hpp"
#include "advbound/geometry.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace advbound;

namespace {

double seconds(std::chrono::steady_clock::time_point a,
               std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

template <class F>
double timed(F&& f) {
  auto t0 = std::chrono::steady_clock::now();
  f();
  return seconds(t0, std::chrono::steady_clock::now());
}

}  // namespace

int main() {
  int threads = 1;
#ifdef _OPENMP
  threads = omp_get_max_threads();
#endif
  std::printf("kernel,work,threads,serial_s,parallel_s,speedup,identical\n");

  {
    SetDescriptor slab{CubeSlab{0, 0.5}};
    Metric l2 = Metric::lp(NormOrder::finite(2));
    const std::int64_t samples = 2000000;
    ExpansionEstimate ser{}, par{};
    double ts = timed([&] { ser = mc_expansion_measure_serial(slab, 50, l2, 0.2, samples, 7); });
    double tp = timed([&] { par = mc_expansion_measure(slab, 50, l2, 0.2, samples, 7); });
    std::printf("mc_slab_l2,n=50 samples=%lld,%d,%.3f,%.3f,%.2f,%s\n",
                static_cast<long long>(samples), threads, ts, tp, ts / tp,
                ser.hits == par.hits ? "yes" : "NO");
  }

  {
    SetDescriptor gauss{GaussianHalfspace{0.0}};
    Metric l2 = Metric::lp(NormOrder::finite(2));
    const std::int64_t samples = 1000000;
    ExpansionEstimate ser{}, par{};
    double ts = timed([&] { ser = mc_expansion_measure_serial(gauss, 50, l2, 1.0, samples, 9); });
    double tp = timed([&] { par = mc_expansion_measure(gauss, 50, l2, 1.0, samples, 9); });
    std::printf("mc_gaussian_halfspace,n=50 samples=%lld,%d,%.3f,%.3f,%.2f,%s\n",
                static_cast<long long>(samples), threads, ts, tp, ts / tp,
                ser.hits == par.hits ? "yes" : "NO");
  }

  {
    auto [train, test] = split_dataset(synth_dataset(50, 2, 0.1, 700, 21), 400);
    LinearModel model = train_linear(train, 150, 1.0, 21);
    std::vector<double> grid;
    for (int i = 0; i <= 30; ++i) grid.push_back(0.01 + 0.1 * i);
    SusceptibilityCurve ser, par;
    NormOrder l2 = NormOrder::finite(2);
    double ts = timed([&] { ser = susceptibility_curve_serial(model, test, l2, grid, 100, 0.0, 31); });
    double tp = timed([&] { par = susceptibility_curve(model, test, l2, grid, 100, 0.0, 31); });
    bool same = ser.size() == par.size();
    for (std::size_t i = 0; same && i < ser.size(); ++i)
      same = ser[i].fooled_fraction == par[i].fooled_fraction;
    std::printf("pgd_curve_l2,points=300 grid=31 steps=100,%d,%.3f,%.3f,%.2f,%s\n",
                threads, ts, tp, ts / tp, same ? "yes" : "NO");
  }

  return 0;
}
