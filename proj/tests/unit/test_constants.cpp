#include <cmath>
#include <numbers>

#include "doctest.h"
#include "ratiolab/constants.hpp"

using namespace ratiolab;
using namespace ratiolab::constants;

namespace {

// Values below come from tests/oracles/oracle_values.py (50-digit mpmath/sympy).
bool close(double a, double b, double rel = 1e-13) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

ClassParams unit_params() { return ClassParams{2.0, 1.0, 1.0, 1.0, 1.0, 1.0}; }

}  // namespace

TEST_CASE("genus bracketing") {
  CHECK(select_p(1.0, 1.0, 2.0 / 3.0) == 2);
  CHECK(select_p(1.0, 1.0, 0.6667) == 2);
  CHECK(select_p(1.0, 2.0, 0.9) == 3);
  CHECK(select_p(1.0, 1.0, 1.0 / 3.0) == 5);
  // (mu + rho) / delta exactly an integer: p + 1 equals it.
  CHECK(select_p(1.0, 1.0, 0.5) == 3);
  // floor(rho) wins for small mu + rho over delta.
  CHECK(select_p(3.5, 0.1, 0.99) == 3);
  CHECK(select_p(0.2, 0.1, 0.9) == 1);
  for (double rho : {0.5, 1.0, 2.5}) {
    for (double mu : {0.5, 1.0, 3.0}) {
      for (double delta : {0.3, 0.5, 0.77}) {
        const int p = select_p(rho, mu, delta);
        INFO("rho=" << rho << " mu=" << mu << " delta=" << delta);
        CHECK(tail_exponent(p, rho, delta) >= mu - 1e-12);
        CHECK(p + 1 > rho);
      }
    }
  }
}

TEST_CASE("early thresholds") {
  CHECK(close(threshold_c(ClassParams{1.0, 8.0, 1.0, 1.0, 3.0, 1.0}), 2.5198420997897463));
  CHECK(threshold_c(ClassParams{1.0, 0.1, 1.0, 1.0, 1.0, 3.0}) == 3.0);
  const ClassParams p = unit_params();
  CHECK(threshold_c(p) == 2.0);
  CHECK(threshold_r1(p) == 2.0);
  ClassParams big = p;
  big.C0 = std::exp(2.0 * std::numbers::e);
  big.C1 = 0.25;
  CHECK(close(threshold_r1(big), 1.1274972987169768));
  CHECK(close(count_bound(p, 10.0), 40.0 * std::numbers::e, 1e-15));
}

TEST_CASE("C2 and r2") {
  CHECK(close(constant_C2(2, 1.0, 1.0), 16.309690970754271));
  CHECK(close(constant_C2(1, 1.0, 1.0), 21.746254627672362));
  CHECK_THROWS_AS(constant_C2(1, 1.0, 2.0), std::domain_error);
  CHECK(close(threshold_r2(3.0, 2, 2.0 / 3.0, unit_params()), 635.30757761234465));
}

TEST_CASE("late thresholds at delta = 2/3") {
  const LateThresholds late = thresholds_r3_r4_r5(2, 2.0 / 3.0, unit_params());
  CHECK(close(late.r3, 2642.1699372621920));
  CHECK(close(late.r4, 74088000.0, 1e-12));
  CHECK(close(late.r5, 26137.210658211594, 1e-12));
  CHECK(close(late.C3, 880.72331242073066));
}

TEST_CASE("Vandermonde determinant is the superfactorial") {
  for (int p = 1; p <= 12; ++p) {
    CHECK(vandermonde_determinant(p) == superfactorial(p));
    const CofactorTable t = vandermonde_cofactors(p);
    CHECK(t.determinant() == superfactorial(p));
    // First-column cofactors over W are binomial(p+1, k).
    BigInt binom = 1;
    for (int k = 1; k <= p + 1; ++k) {
      binom = binom * (p + 2 - k) / k;
      BigInt c = t.at(k, 1);
      if (c < 0) c = -c;
      CHECK(c == binom * t.determinant());
    }
  }
  CHECK_THROWS_AS(vandermonde_cofactors(0), std::out_of_range);
  CHECK_THROWS_AS(vandermonde_cofactors(kMaxGenus + 1), std::out_of_range);
}

TEST_CASE("A_p frozen values") {
  struct Row {
    int p;
    double mu, Ap, cramer;
  };
  const Row rows[] = {
      {1, 0.5, 4.4142135623730950, 4.4142135623730950},
      {1, 1.0, 4.0, 4.0},
      {1, 2.0, 3.5, 3.5},
      {1, 5.0, 3.0625, 3.0625},
      {2, 0.5, 13.811554787871632, 13.388905057061257},
      {2, 1.0, 11.666666666666667, 11.0},
      {2, 2.0, 9.2222222222222222, 8.3333333333333333},
      {2, 5.0, 7.2582304526748971, 6.2623456790123457},
      {3, 0.5, 37.467923065458002, 34.802389661575337},
      {3, 1.0, 30.0, 26.0},
      {3, 2.0, 21.861111111111111, 16.916666666666667},
      {3, 5.0, 15.750787680041152, 10.690634645061728},
  };
  for (const Row& r : rows) {
    INFO("p=" << r.p << " mu=" << r.mu);
    const CofactorTable t = vandermonde_cofactors(r.p);
    CHECK(close(constant_Ap(t, r.mu), r.Ap));
    CHECK(close(cramer_sum(t, r.mu), r.cramer));
  }
}

TEST_CASE("A_p exceeds 2^{p+1} - 1 and dominates the Cramer sum") {
  for (int p = 1; p <= kMaxGenus; ++p) {
    const CofactorTable t = vandermonde_cofactors(p);
    for (double mu : {0.25, 0.5, 1.0, 2.0, 5.0, 10.0}) {
      INFO("p=" << p << " mu=" << mu);
      CHECK(constant_Ap(t, mu) > std::pow(2.0, p + 1) - 1.0);
      CHECK(cramer_sum(t, mu) <= constant_Ap(t, mu) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("A_p rational enclosure") {
  const RationalInterval exact = Ap_interval(1, 1, 1);
  CHECK(exact.lo == Rational(4));
  CHECK(exact.hi == Rational(4));
  const RationalInterval half = Ap_interval(2, 1, 2);
  CHECK(half.lo <= half.hi);
  const double v = constant_Ap(2, 0.5);
  CHECK(half.lo.convert_to<double>() <= v * (1 + 1e-15));
  CHECK(half.hi.convert_to<double>() >= v * (1 - 1e-15));
  CHECK((half.hi - half.lo).convert_to<double>() < 1e-25);
}

TEST_CASE("ratio exponent is exact") {
  CHECK(ratio_exponent(Rational(1), Rational(2, 3)) == Rational(1, 3));
  CHECK(ratio_exponent(Rational(2), Rational(9, 10)) == Rational(1, 5));
}

TEST_CASE("two-stage R0") {
  const R0Report r = threshold_R0(0.1, 2.0 / 3.0, unit_params());
  CHECK(r.inner.p == 5);
  CHECK(close(r.C_tilde, 3345.7777777777778, 1e-12));
  CHECK(close(r.R0, 1.8047608097564868e18, 1e-10));
  CHECK(r.R0 >= r.outer.max_r());
  // Smaller eps never lowers the threshold.
  CHECK(threshold_R0(0.01, 2.0 / 3.0, unit_params()).R0 >= r.R0);
}

TEST_CASE("engineered preset thresholds are desk scale") {
  const ClassParams p{1.0, 1e-3, 1.0, 1e-3, 2.0, 1.0};
  const ThresholdSet ts = thresholds_at(p, 0.9);
  CHECK(ts.p == 3);
  CHECK(close(ts.r1, 127.49729871697675, 1e-12));
  CHECK(close(ts.r5, 141.35555258519690, 1e-12));
  CHECK(close(ts.C3, 7.4227215795788329, 1e-12));
  CHECK(ts.max_r() < 200.0);
}

TEST_CASE("derived constants with overrides") {
  const DerivedConstants dc = derive_constants(unit_params(), 0.6667, 0.1);
  CHECK(dc.p == 2);
  CHECK(dc.c == 2.0);
  CHECK(dc.r1 == 2.0);
  CHECK(dc.W == BigInt(2));
  const DerivedConstants forced = derive_constants(unit_params(), 2.0 / 3.0, 0.1, std::nullopt, 1);
  CHECK(forced.p == 1);
  CHECK(!forced.warnings.empty());
  CHECK_THROWS_AS(derive_constants(ClassParams{-1.0, 1.0, 1.0, 1.0, 1.0, 1.0}, 0.5, 0.1),
                  std::invalid_argument);
}
