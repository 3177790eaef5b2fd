#include <cmath>
#include <random>

#include "doctest.h"
#include "ratiolab/primary_factors.hpp"

using namespace ratiolab;
using namespace ratiolab::factors;

namespace {

cplx closed_form(cplx xi, int p) {
  cplx s = 0.0, pw = 1.0;
  for (int k = 1; k <= p; ++k) {
    pw *= xi;
    s += pw / static_cast<double>(k);
  }
  return (1.0 - xi) * std::exp(s);
}

bool close(double a, double b, double rel = 1e-14) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace

TEST_CASE("frozen primary factor values") {
  CHECK(close(primary_factor(0.5, 1).real(), 0.82436063535006407));
  CHECK(close(primary_factor(0.1, 1).real(), 0.99465382626808289));
  CHECK(close(log_primary_factor(0.5, 2).real(), -0.068147180559945309));
  // Outside the guard radius: only the direct product is defined.
  CHECK(close(std::log(primary_factor(0.6, 1)).real(), -0.31629073187415503, 1e-13));
  CHECK(primary_factor(1.0, 2) == cplx(0.0, 0.0));
  CHECK(primary_factor(0.0, 3) == cplx(1.0, 0.0));
  CHECK(log_primary_factor(0.0, 3) == cplx(0.0, 0.0));
}

TEST_CASE("guard radius") {
  CHECK(guard_radius(1) == 0.5);
  CHECK(guard_radius(3) == 0.75);
  CHECK_THROWS_AS(log_primary_factor(0.8, 3), std::domain_error);
  CHECK_NOTHROW(log_primary_factor(0.75, 3));
  CHECK_THROWS_AS(log_primary_factor(0.1, 0), std::domain_error);
}

TEST_CASE("series and closed form agree, log bound holds") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int p : {1, 2, 3, 5, 8}) {
    for (int i = 0; i < 2000; ++i) {
      const double r = guard_radius(p) * std::sqrt(u(rng));
      const cplx xi = std::polar(r, 6.283185307179586 * u(rng));
      const cplx series = primary_factor(xi, p);
      const cplx direct = closed_form(xi, p);
      INFO("p=" << p << " xi=" << xi);
      CHECK(std::abs(series - direct) <= 1e-12 * std::abs(direct));
      CHECK(std::abs(log_primary_factor(xi, p)) <= std::pow(r, p + 1) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("expm1 keeps relative precision") {
  for (double t : {1e-300, 1e-17, 1e-9, 1e-3}) {
    const cplx w(t, -t);
    const cplx e = factors::expm1(w);
    CHECK(std::abs(e - w) <= std::abs(w) * std::abs(w) * 2.0);
  }
  CHECK(std::abs(factors::expm1(cplx(2.0, 1.0)) - (std::exp(cplx(2.0, 1.0)) - 1.0)) < 1e-14);
  for (double t : {1e-6, 0.3, 2.0}) {
    const ExpBound b = exp_minus_one_bound_check(cplx(t, 0.5 * t));
    CHECK(b.lhs <= b.rhs);
  }
}

TEST_CASE("tail product") {
  const ZeroSet zs({{{30.0, 0.0}, 1}, {{0.0, -45.0}, 2}, {{-50.0, 10.0}, 1}});
  CHECK_THROWS_AS(TailProductSpec(zs, 2, 40.0), std::invalid_argument);
  const TailProductSpec spec(zs, 2, 25.0);
  const cplx z(3.0, 4.0);
  cplx direct = 1.0;
  for (const Zero& zero : zs.entries()) direct *= std::pow(closed_form(z / zero.location, 2), zero.multiplicity);
  CHECK(std::abs(tail_product(spec, z) - direct) < 1e-14);
  CHECK(std::abs(tail_product_minus_one(spec, z) - (direct - 1.0)) < 1e-14);
  CHECK_THROWS_AS(tail_log_sum(spec, cplx(25.0, 0.0)), std::domain_error);
  const double s = tail_power_sum(zs, 2, 25.0);
  CHECK(close(s, std::pow(30.0, -3) + 2 * std::pow(45.0, -3) + std::pow(std::hypot(50.0, 10.0), -3)));
}

TEST_CASE("scale covariance of the tail product") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Zero> v;
  for (int i = 0; i < 40; ++i) v.push_back({std::polar(20.0 + 80.0 * u(rng), 6.283185307179586 * u(rng)), 1});
  const ZeroSet zs(v);
  for (double lambda : {0.5, 3.0, 1024.0}) {
    const TailProductSpec base(zs, 2, 20.0);
    const TailProductSpec scaled(zs.scaled(lambda), 2, 20.0 * lambda);
    for (int i = 0; i < 20; ++i) {
      const cplx z = std::polar(12.0 * u(rng), 6.283185307179586 * u(rng));
      CHECK(std::abs(tail_product(base, z) - tail_product(scaled, lambda * z)) < 1e-13);
    }
  }
}
