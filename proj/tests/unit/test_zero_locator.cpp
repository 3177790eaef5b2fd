#include <cmath>
#include <random>

#include "doctest.h"
#include "ratiolab/entire_model.hpp"
#include "ratiolab/zero_locator.hpp"

using namespace ratiolab;
using namespace ratiolab::zeros;

namespace {

AnalyticFn poly_from(std::vector<Zero> roots) {
  AnalyticFn f;
  f.value = [roots](cplx z) {
    cplx v = 1.0;
    for (const Zero& r : roots) v *= std::pow(1.0 - z / r.location, r.multiplicity);
    return v;
  };
  return f;
}

}  // namespace

TEST_CASE("count on simple functions") {
  CHECK(count_zeros(poly_from({}), 0.0, 5.0).count == 0);
  const AnalyticFn f = poly_from({{{1.0, 1.0}, 1}, {{-2.0, 0.5}, 2}, {{0.0, 4.0}, 1}});
  CHECK(count_zeros(f, 0.0, 1.0).count == 0);
  CHECK(count_zeros(f, 0.0, 2.0).count == 1);
  CHECK(count_zeros(f, 0.0, 3.0).count == 3);
  CHECK(count_zeros(f, 0.0, 5.0).count == 4);
  CHECK(count_zeros(f, cplx(0.0, 4.0), 0.1).count == 1);
  const CountResult r = count_zeros(f, 0.0, 3.0);
  CHECK(r.reliable);
  CHECK(r.winding_residual < 1e-6);
  CHECK(count_zeros_rectangle(f, -3.0, 3.0, 0.0, 3.0).count == 3);
  CHECK(count_zeros_rectangle(f, 0.0, 3.0, -1.0, 3.0).count == 1);
  AnalyticFn sine;
  sine.value = [](cplx z) { return std::sin(z); };
  CHECK(count_zeros(sine, 0.0, 10.0).count == 7);
}

TEST_CASE("zero on the contour is nudged or reported") {
  const AnalyticFn f = poly_from({{{2.0, 0.0}, 1}});
  const CountResult r = count_zeros(f, 0.0, 2.0);
  CHECK(r.count == 1);
  CHECK(r.radius_used > 2.0);
  CHECK_THROWS_AS(count_zeros_exact_radius(f, 0.0, 2.0), LocatorError);
}

TEST_CASE("non-finite values are an error") {
  AnalyticFn bad;
  bad.value = [](cplx z) { return std::exp(1000.0 * z); };
  CHECK_THROWS_AS(count_zeros(bad, 0.0, 2.0), LocatorError);
}

TEST_CASE("locate and polish") {
  const std::vector<Zero> roots{{{1.0, 1.0}, 1}, {{-2.0, 0.5}, 2}, {{0.3, -0.2}, 1}, {{0.3001, -0.2}, 1}};
  const AnalyticFn f = poly_from(roots);
  const ZeroSet found = locate_zeros(f, 0.0, 3.0);
  CHECK(found.total_count() == 5);
  for (const Zero& r : roots) {
    bool matched = false;
    for (const Zero& z : found.entries()) matched = matched || std::abs(z.location - r.location) < 1e-7;
    CHECK(matched);
  }
  for (const Zero& z : found.entries()) {
    if (z.multiplicity == 1) CHECK(std::abs(f(z.location)) < 1e-8);
  }
  AnalyticFn limited = f;
  limited.validity_radius = 2.0;
  CHECK_THROWS_AS(locate_zeros(limited, 0.0, 3.0), std::invalid_argument);
}

TEST_CASE("Jensen identity") {
  const JensenResult a = jensen_check(poly_from({{{2.0, 0.0}, 1}}), 1.0);
  CHECK(std::abs(a.lhs) < 1e-12);
  CHECK(a.rhs == 0.0);
  const JensenResult b = jensen_check(poly_from({{{0.5, 0.2}, 1}}), 2.0);
  CHECK(std::abs(b.rhs - std::log(2.0 / std::abs(cplx(0.5, 0.2)))) < 1e-14);
  CHECK(std::abs(b.diff()) < 1e-10);
  AnalyticFn origin;
  origin.value = [](cplx z) { return z; };
  CHECK_THROWS_AS(jensen_check(origin, 1.0), LocatorError);
  try {
    jensen_check(poly_from({{{1.0, 0.0}, 1}}), 1.0);
    FAIL("expected zero-on-circle");
  } catch (const LocatorError& e) {
    CHECK(e.kind() == LocatorErrorKind::ZeroOnCircle);
  }
}

TEST_CASE("counts and Jensen on random canonical products") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double radius = 5.0;
    std::vector<Zero> v;
    const int n = 1 + static_cast<int>(rng() % 20);
    for (int i = 0; i < n; ++i) {
      double m = 0.0;
      do m = 10.0 * u(rng) + 0.1; while (std::abs(m - radius) < 1e-3 * radius);
      v.push_back({std::polar(m, 6.283185307179586 * u(rng)), 1 + static_cast<int>(rng() % 2)});
    }
    const ZeroSet zs(v);
    const model::EntireModel f(zs, 1 + static_cast<int>(rng() % 3));
    INFO("trial " << trial);
    CHECK(count_zeros(f.as_analytic(), 0.0, radius).count == zs.count_below(radius));
    const JensenResult j = jensen_check(f.as_analytic(), radius);
    CHECK(std::abs(j.diff()) <= 1e-8 * (1.0 + std::abs(j.lhs)));
  }
}

TEST_CASE("count bound check guards r >= r1") {
  const AnalyticFn one = poly_from({});
  const ClassParams p{2.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  const VerificationReport below = count_bound_check(one, p, 1.0);
  CHECK(below.verdict == Verdict::PassWithUnmetPreconditions);
  CHECK(std::isnan(below.observed));
  const VerificationReport above = count_bound_check(one, p, 10.0);
  CHECK(above.verdict == Verdict::Pass);
  CHECK(above.observed == 0.0);
}

TEST_CASE("double zero just off a cell edge is not aliased") {
  // 8.5e-4 outside the edge x = 0.15640625, a quarter of the way between
  // initial samples: sampled phase alone reports one zero on each side.
  const model::EntireModel f(ZeroSet({{{0.157254, -0.242}, 2}, {{0.1, 3.0}, 1}}), 2);
  const AnalyticFn fn = f.as_analytic();
  CHECK(count_zeros_rectangle(fn, 0.0, 0.15640625, -0.3128125, -0.15640625).count == 0);
  CHECK(count_zeros_rectangle(fn, 0.15640625, 0.3128125, -0.3128125, -0.15640625).count == 2);
}

TEST_CASE("canonical products too large for a double are still counted") {
  // Genus 3 with a zero at 0.05: |exp(z^3 / 3 a^3)| overflows on |z| = 4.
  const model::EntireModel f(ZeroSet({{{0.05, 0.0}, 1}, {{0.0, 1.0}, 2}, {{-3.0, 0.5}, 1}}), 3);
  CHECK(!std::isfinite(std::abs(f(cplx(4.0, 0.0)))));
  CHECK(count_zeros(f.as_analytic(), 0.0, 4.0).count == 4);
  CHECK(locate_zeros(f.as_analytic(), 0.0, 4.0).total_count() == 4);
  const JensenResult j = jensen_check(f.as_analytic(), 4.0);
  CHECK(std::abs(j.diff()) <= 1e-8 * (1.0 + std::abs(j.lhs)));
}
