#include <cmath>
#include <random>

#include "doctest.h"
#include "ratiolab/disk_grid.hpp"
#include "ratiolab/kernels.hpp"
#include "ratiolab/summation.hpp"

using namespace ratiolab;

namespace {

ZeroSet random_zeros(std::uint64_t seed, std::size_t n, double rmin) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Zero> v;
  for (std::size_t i = 0; i < n; ++i) {
    v.push_back({std::polar(rmin * (1.0 + 10.0 * u(rng)), 6.283185307179586 * u(rng)), 1 + static_cast<int>(i % 2)});
  }
  return ZeroSet(v);
}

}  // namespace

TEST_CASE("parallel kernels match their serial references bit for bit") {
  const ZeroSet zs = random_zeros(3, 5000, 100.0);
  for (int threads : {1, 2, 4}) {
    kernels::set_thread_count(threads);
    for (cplx z : {cplx(1.0, 2.0), cplx(-40.0, 3.0), cplx(0.0, -49.0)}) {
      CHECK(kernels::log_factor_sum(zs.entries(), 2, z) == kernels::log_factor_sum_serial(zs.entries(), 2, z));
      const auto a = kernels::accumulate_factors(zs.entries(), 1, 3.0 * z);
      const auto b = kernels::accumulate_factors_serial(zs.entries(), 1, 3.0 * z);
      CHECK(a.log_sum == b.log_sum);
      CHECK(a.direct == b.direct);
    }
    const auto pts = grid::disk_points(50.0, grid::GridSpec{16, 64, 200, 1});
    const kernels::PointFunction f = [](cplx z) { return z.real() > 45.0 ? std::nan("") : std::abs(std::sin(z)); };
    const auto s1 = kernels::sampled_sup(pts, f);
    const auto s2 = kernels::sampled_sup_serial(pts, f);
    CHECK(s1.value == s2.value);
    CHECK(s1.argmax == s2.argmax);
    CHECK(s1.evaluated == s2.evaluated);
    CHECK(s1.excluded == s2.excluded);
    CHECK(s1.excluded > 0);
    const auto sq = [](cplx z) { return z * z + 1.0; };
    CHECK(kernels::circle_max_modulus(sq, 0.0, 3.0, 1001) == kernels::circle_max_modulus_serial(sq, 0.0, 3.0, 1001));
  }
  kernels::set_thread_count(0);
}

TEST_CASE("sup ties resolve to the lowest index") {
  const std::vector<cplx> pts(100, cplx(1.0, 0.0));
  const auto s = kernels::sampled_sup(pts, [](cplx) { return 2.0; });
  CHECK(s.value == 2.0);
  CHECK(s.argmax == 0);
}

TEST_CASE("accumulate_factors equals the plain product") {
  const ZeroSet zs = random_zeros(9, 60, 2.0);
  const cplx z(5.0, -7.0);
  const auto acc = kernels::accumulate_factors(zs.entries(), 2, z);
  cplx direct = 1.0;
  for (const Zero& zero : zs.entries()) {
    const cplx xi = z / zero.location;
    for (int m = 0; m < zero.multiplicity; ++m) direct *= (1.0 - xi) * std::exp(xi + xi * xi / 2.0);
  }
  CHECK(std::abs(acc.value() - direct) <= 1e-12 * std::abs(direct));
}

TEST_CASE("compensated sum beats naive summation") {
  CompensatedSum<double> s;
  double naive = 0.0;
  s.add(1.0);
  naive += 1.0;
  for (int i = 0; i < 1000000; ++i) {
    s.add(1e-16);
    naive += 1e-16;
  }
  CHECK(std::abs(s.value() - (1.0 + 1e-10)) < 1e-22);
  CHECK(naive == 1.0);
}

TEST_CASE("disk grid") {
  const grid::GridSpec spec{8, 32, 100, 4};
  const auto pts = grid::disk_points(3.0, spec);
  CHECK(pts.size() == spec.size());
  CHECK(pts.front() == cplx(0.0, 0.0));
  double rmax = 0.0;
  for (cplx z : pts) rmax = std::max(rmax, std::abs(z));
  CHECK(rmax <= 3.0 * (1 + 1e-15));
  CHECK(rmax >= 3.0 * (1 - 1e-15));
  CHECK(grid::disk_points(3.0, spec) == pts);
  CHECK(grid::disk_points(3.0, grid::GridSpec{8, 32, 100, 5}) != pts);
  CHECK(grid::parse_grid("32x128").n_theta == 128);
  CHECK(grid::to_string(grid::parse_grid("32x128")) == "32x128");
  CHECK_THROWS_AS(grid::parse_grid("32by128"), std::invalid_argument);
  CHECK_THROWS_AS(grid::parse_grid("0x8"), std::invalid_argument);
  const auto seg = grid::segment_points(1.0, 4.0, 1.5707963267948966, 4);
  CHECK(seg.size() == 4);
  CHECK(std::abs(seg.back() - cplx(0.0, 4.0)) < 1e-15);
}
