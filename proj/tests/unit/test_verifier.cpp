#include <cmath>

#include "doctest.h"
#include "ratiolab/constants.hpp"
#include "ratiolab/primary_factors.hpp"
#include "ratiolab/verifier.hpp"

using namespace ratiolab;
using namespace ratiolab::verify;

namespace {

const grid::GridSpec kSmall{8, 32, 64, 0};

}  // namespace

TEST_CASE("pair spec validation") {
  PairSpec s;
  s.R = 10.0;
  s.shared = ZeroSet({{{12.0, 0.0}, 1}});
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.shared = ZeroSet({{{2.0, 0.0}, 1}});
  s.outer_a = ZeroSet({{{9.0, 0.0}, 1}});
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.outer_a = ZeroSet({{{11.0, 0.0}, 1}});
  CHECK_NOTHROW(s.validate());
  s.delta = 1.0;
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("count profile") {
  const ClassParams p{1.0, 1.0, 1.0, 0.01, 1.0, 1.0};
  const double kappa = constants::count_bound(p, 1.0);
  // One zero a hair above modulus 1/kappa sits on the bound (exact equality
  // is at the mercy of the last bit of 1/kappa).
  const CountProfile ok = count_profile(ZeroSet({{{(1.0 + 1e-12) / kappa, 0.0}, 1}}), p, 1.0);
  CHECK(ok.satisfied);
  CHECK(ok.worst_ratio == doctest::Approx(1.0));
  const CountProfile bad = count_profile(ZeroSet({{{1.0 / kappa, 0.0}, 2}}), p, 1.0);
  CHECK(!bad.satisfied);
  CHECK(bad.worst_ratio == doctest::Approx(2.0));
}

TEST_CASE("identical pair has zero ratio deviation") {
  PairSpec s = engineered_spec(3, 200.0, 40);
  s.outer_b = s.outer_a;
  const Pair pair = build_pair(s);
  const VerificationReport t = check_theorem(pair, 0.1, kSmall);
  CHECK(t.observed == 0.0);
  CHECK(t.verdict != Verdict::Fail);
  CHECK(check_decomposition(pair, kSmall).observed < 1e-14);
}

TEST_CASE("single extra zero follows the factorised form") {
  PairSpec s;
  s.R = 50.0;
  s.delta = 0.5;
  s.p = 1;
  s.params = ClassParams{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  s.shared = ZeroSet({{{3.0, 4.0}, 1}});
  const cplx extra(0.0, 60.0);
  s.outer_b = ZeroSet({{extra, 1}});
  const Pair pair = build_pair(s);
  // psi2 / psi1 - 1 = E_1(z / extra) - 1 exactly.
  for (cplx z : {cplx(1.0, 1.0), cplx(-5.0, 2.0), cplx(0.0, -7.0)}) {
    const cplx ratio = pair.psi2(z) / pair.psi1(z) - 1.0;
    CHECK(std::abs(ratio - (factors::primary_factor(z / extra, 1) - 1.0)) < 1e-14);
  }
}

TEST_CASE("engineered pair passes every check with hypotheses met") {
  const Pair pair = build_pair(engineered_spec(0, 200.0, 60));
  const grid::GridSpec g{16, 64, 200, 0};
  const VerificationReport t = check_theorem(pair, 0.1, g);
  CHECK(t.verdict == Verdict::Pass);
  CHECK(t.preconditions_met());
  CHECK(t.observed > 0.0);
  CHECK(t.observed <= t.bound);
  REQUIRE(t.subchecks.size() == 1);
  CHECK(t.subchecks[0].verdict == Verdict::PassWithUnmetPreconditions);
  for (const VerificationReport& r : check_step5_bounds(pair, g)) {
    INFO(r.check);
    CHECK(r.verdict == Verdict::Pass);
  }
  CHECK(check_decomposition(pair, g).observed < 1e-10);
  const VerificationReport l2 = check_lemma2(pair.spec.outer_a, pair.p + 1, pair.p, pair.spec.delta,
                                             pair.spec.params, pair.spec.R, g);
  CHECK(l2.verdict == Verdict::Pass);
  CHECK(l2.preconditions_met());
  const VerificationReport r5 = check_remark5(pair, 0.1, 513);
  CHECK(r5.verdict == Verdict::Pass);
  CHECK(r5.preconditions_met());
}

TEST_CASE("shrinking the disk never raises the sampled sup") {
  const Pair pair = build_pair(engineered_spec(1, 200.0, 40));
  const auto rows = theorem_profile(pair, kSmall, 6);
  REQUIRE(rows.size() == 6);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(rows[i].r > rows[i - 1].r);
    CHECK(rows[i].observed >= rows[i - 1].observed * (1.0 - 1e-12));
  }
}

TEST_CASE("unmet hypotheses never fail") {
  // R far below r2: the inequality may be violated but the verdict is not Fail.
  const ClassParams p{1.0, 1.0, 1.0, 1.0, 1.0, 1.0};
  const ZeroSet outer({{{5.0, 0.0}, 1}, {{0.0, 6.0}, 1}});
  const VerificationReport r = check_lemma2(outer, 3.0, 2, 2.0 / 3.0, p, 5.0, kSmall);
  CHECK(!r.preconditions_met());
  CHECK(r.verdict != Verdict::Fail);
}

TEST_CASE("lemma 3 on random admissible polynomials") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const int p = 1 + static_cast<int>(seed % 3);
    // r >= 4 A_p C1 keeps eps A_p <= 1/4 for p <= 3.
    const auto g = random_admissible_polynomial(seed, p, 200.0, 1.0, 1.0, 0.3);
    const VerificationReport r = check_lemma3(g, 200.0, 1.0, 1.0, p, kSmall, 0.3);
    INFO("seed " << seed);
    CHECK(r.preconditions_met());
    CHECK(r.verdict == Verdict::Pass);
    CHECK(r.subchecks.size() == static_cast<std::size_t>(p) + 1);
    for (const auto& c : r.subchecks) CHECK(c.verdict == Verdict::Pass);
  }
  CHECK_THROWS_AS(check_lemma3({1.0, 1.0, 1.0}, 10.0, 1.0, 1.0, 1, kSmall), std::invalid_argument);
}

TEST_CASE("decomposition identity on random pairs") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Pair pair = build_pair(random_spec(seed));
    CHECK(check_decomposition(pair, kSmall).observed < 1e-10);
  }
}

TEST_CASE("located zeros inside B(0, R) coincide") {
  const Pair pair = build_pair(engineered_spec(2, 200.0, 30));
  const ZeroSet a = zeros::locate_zeros(pair.psi1.as_analytic(), 0.0, 150.0);
  const ZeroSet b = zeros::locate_zeros(pair.psi2.as_analytic(), 0.0, 150.0);
  REQUIRE(a.size() == b.size());
  REQUIRE(a.size() == pair.spec.shared.inner(150.0).size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a.entries()[i].location - b.entries()[i].location) <= 1e-8 * std::abs(a.entries()[i].location));
  }
}

TEST_CASE("count bound violation is reported") {
  PairSpec s = engineered_spec(0, 200.0, 10);
  std::vector<Zero> crowd(s.outer_a.entries().begin(), s.outer_a.entries().end());
  for (int i = 0; i < 20; ++i) crowd.push_back({cplx(201.0 + i, 0.0), 1});
  s.outer_a = ZeroSet(crowd);
  CHECK_THROWS_WITH_AS(build_pair(s), doctest::Contains("count bound violated"), std::runtime_error);
}
