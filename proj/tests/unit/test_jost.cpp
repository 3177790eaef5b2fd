#include <cmath>
#include <random>

#include "doctest.h"
#include "ratiolab/jost.hpp"

using namespace ratiolab;
using namespace ratiolab::jost;

TEST_CASE("kernel validation") {
  CHECK_THROWS_AS(Kernel::piecewise({0.0}, {}), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::piecewise({1.0, 0.0}, {{1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Kernel::super_exponential(1.0, 1.0), std::invalid_argument);
  const Kernel k = Kernel::piecewise({0.0, 1.0, 3.0}, {{1.0, -1.0}, {0.5}});
  CHECK(k(0.5) == 0.5);
  CHECK(k(2.0) == 0.5);
  CHECK(k(3.5) == 0.0);
  CHECK(k.at_zero() == 1.0);
  CHECK(k.support_end() == 3.0);
  CHECK(k.compact());
  CHECK(std::isinf(Kernel::exponential(1.0, 2.0).support_end()));
  CHECK(Kernel::exponential(1.0, 2.0).convergence_margin() == 2.0);
  CHECK(std::isinf(Kernel::exponential(1.0, 2.0, 5.0).convergence_margin()));
}

TEST_CASE("K = 1 closed form") {
  const JostFunction psi(Kernel::constant(1.0, 1.0));
  for (cplx z : {cplx(1.0, 0.0), cplx(3.0, -2.0), cplx(-7.0, 5.0)}) {
    const cplx expect = 1.0 + (std::exp(cplx(0.0, 1.0) * z) - 1.0) / (cplx(0.0, 1.0) * z);
    CHECK(std::abs(psi(z) - expect) < 1e-14 * std::abs(expect));
  }
  CHECK(std::abs(psi(0.0) - 2.0) < 1e-15);
  // Both sides of the small-|z| switch, against the Taylor series of
  // 1 + (e^{iz} - 1) / (iz).
  for (double x : {0.99e-4, 1.01e-4}) {
    const cplx iz(0.0, x);
    cplx term = 1.0, series = 0.0;
    for (int k = 0; k < 8; ++k) {
      term /= static_cast<double>(k + 1);
      series += term;
      term *= iz;
    }
    CHECK(std::abs(psi(cplx(x, 0.0)) - (1.0 + series)) < 1e-14);
  }
  CHECK_THROWS_AS(JostFunction(Kernel::super_exponential(1.0, 2.0), Method::ClosedForm), std::invalid_argument);
}

TEST_CASE("closed form and quadrature agree") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Kernel k = Kernel::piecewise({0.0, 0.4, 1.0, 2.0}, {{1.0}, {-0.5, 2.0, -1.0}, {0.25, 0.1}});
  const JostFunction closed(k, Method::ClosedForm);
  const JostFunction quad(k, Method::Quadrature);
  for (int i = 0; i < 200; ++i) {
    const cplx z(30.0 * u(rng), 10.0 * u(rng));
    const cplx a = closed.deviation(z), b = quad.deviation(z);
    CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
  }
}

TEST_CASE("resonances of K = 1") {
  const JostFunction psi(Kernel::constant(1.0, 1.0));
  const ZeroSet zs = zeros::locate_zeros(psi.as_analytic(), 0.0, 12.0);
  REQUIRE(zs.total_count() == 4);
  const cplx expect[] = {{4.5971580133025733, -1.5320921219863799}, {10.868006057533693, -2.3939822411584432}};
  for (cplx e : expect) {
    for (cplx s : {e, cplx(-e.real(), e.imag())}) {
      bool found = false;
      for (const Zero& z : zs.entries()) found = found || std::abs(z.location - s) < 1e-10;
      CHECK(found);
    }
  }
  CHECK(zeros::count_zeros(psi.as_analytic(), 0.0, 50.0).count == 16);
}

TEST_CASE("divergent quadrature is refused") {
  const JostFunction psi(Kernel::exponential(1.0, 1.0));
  CHECK_NOTHROW(psi(cplx(5.0, -0.5)));
  CHECK_THROWS_AS(psi(cplx(5.0, -1.5)), std::domain_error);
  const cplx z(2.0, 1.0);
  const cplx expect = 1.0 / (1.0 - cplx(0.0, 1.0) * z);
  CHECK(std::abs(psi.deviation(z) - expect) < 1e-12);
}

TEST_CASE("ray and growth fits") {
  const JostFunction psi(Kernel::constant(1.0, 1.0));
  const RayFit ray = ray_decay_fit(psi, 1.5707963267948966, 64, 10.0, 1000.0);
  CHECK(ray.mu == doctest::Approx(1.0).epsilon(0.06));
  CHECK(ray.mu_raw >= ray.mu - 1e-3);
  CHECK(ray.C1 >= 1.0 - 1e-6);
  const GrowthFit g = growth_fit(psi, {10.0, 20.0, 40.0, 80.0, 120.0, 200.0});
  CHECK(g.rho == doctest::Approx(1.0).epsilon(0.05));
  CHECK(g.sigma == doctest::Approx(1.0).epsilon(0.05));
  const JostFunction wide(Kernel::constant(1.0, 2.0));
  CHECK(growth_fit(wide, {10.0, 20.0, 40.0, 80.0, 120.0, 200.0}).sigma == doctest::Approx(2.0).epsilon(0.05));
  const JostFunction superexp(Kernel::super_exponential(1.0, 2.0));
  CHECK(growth_fit(superexp, {3.0, 5.0, 8.0, 12.0, 16.0, 20.0}).rho == doctest::Approx(2.0).epsilon(0.05));
  CHECK_THROWS_AS(growth_fit(psi, {1.0, 2.0}), std::invalid_argument);
  const RayFit zero = ray_decay_fit([](cplx) { return cplx(0.0); }, 0.0, 16, 1.0, 10.0);
  CHECK(zero.degenerate);
  CHECK_THROWS_AS(ray_decay_fit([](cplx z) { return z; }, 0.0, 16, 1.0, 10.0), std::runtime_error);
}

TEST_CASE("transformed function decays faster") {
  const JostFunction psi(Kernel::exponential(1.0, 1.0, 40.0));
  const RayFit plain = ray_decay_fit(psi, 1.5707963267948966, 64, 10.0, 1000.0);
  const RayFit fixed = ray_decay_fit(remark6_deviation(psi), 1.5707963267948966, 64, 10.0, 1000.0);
  CHECK(plain.mu < 1.1);
  CHECK(fixed.mu >= 1.9);
  CHECK_THROWS_AS(remark6_transform(psi)(0.0), std::domain_error);
}
