// Serial vs OpenMP timings of the hot kernels, with a bit-identity check.
// Usage: bench_kernels [points=200000] [zeros=400] [repeats=3]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>

#include <omp.h>

#include "ratiolab/disk_grid.hpp"
#include "ratiolab/kernels.hpp"
#include "ratiolab/primary_factors.hpp"

using namespace ratiolab;

namespace {

template <class F>
double best_of(int repeats, F&& f) {
  double best = 1e300;
  for (int i = 0; i < repeats; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  const std::size_t n_points = argc > 1 ? std::strtoul(argv[1], nullptr, 10) : 200000;
  const std::size_t n_zeros = argc > 2 ? std::strtoul(argv[2], nullptr, 10) : 400;
  const int repeats = argc > 3 ? std::atoi(argv[3]) : 3;

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Zero> zs;
  for (std::size_t k = 0; k < n_zeros; ++k) {
    zs.push_back({std::polar(10.0 + 5.0 * static_cast<double>(k) * (1.0 + u(rng)), 6.283185307179586 * u(rng)), 1});
  }
  const ZeroSet zeros(std::move(zs));
  const int p = 3;
  grid::GridSpec spec;
  spec.n_r = 64;
  spec.n_theta = static_cast<int>(std::max<std::size_t>(4, n_points / 64));
  spec.interior = 0;
  const auto points = grid::disk_points(5.0, spec);
  const kernels::PointFunction f = [&](cplx z) {
    return std::abs(factors::expm1(kernels::log_factor_sum(zeros.entries(), p, z)));
  };

  std::printf("threads=%d points=%zu zeros=%zu\n", omp_get_max_threads(), points.size(), zeros.size());
  std::printf("%-22s %12s %12s %8s %s\n", "kernel", "serial_s", "parallel_s", "speedup", "identical");

  kernels::SupResult s_serial, s_par;
  const double t_sup_s = best_of(repeats, [&] { s_serial = kernels::sampled_sup_serial(points, f); });
  const double t_sup_p = best_of(repeats, [&] { s_par = kernels::sampled_sup(points, f); });
  std::printf("%-22s %12.4f %12.4f %8.2f %s\n", "sampled_sup", t_sup_s, t_sup_p, t_sup_s / t_sup_p,
              s_serial.value == s_par.value && s_serial.argmax == s_par.argmax ? "yes" : "NO");

  const cplx z0(2.0, 1.5);
  cplx l_serial, l_par;
  const int inner = 2000;
  const double t_log_s = best_of(repeats, [&] {
    for (int i = 0; i < inner; ++i) l_serial = kernels::log_factor_sum_serial(zeros.entries(), p, z0);
  });
  const double t_log_p = best_of(repeats, [&] {
    for (int i = 0; i < inner; ++i) l_par = kernels::log_factor_sum(zeros.entries(), p, z0);
  });
  std::printf("%-22s %12.4f %12.4f %8.2f %s\n", "log_factor_sum x2000", t_log_s, t_log_p, t_log_s / t_log_p,
              l_serial == l_par ? "yes" : "NO");
  return 0;
}
