#include <doctest.h>

#include <cmath>

#include "limitset/errors.hpp"
#include "limitset/growth.hpp"
#include "limitset/spectral.hpp"

using namespace limitset;

namespace {

RationalMatrix diag9() { return RationalMatrix::diagonal({9, 3, mpq_class(1, 27)}); }

RationalMatrix conjugated_beta() {
  const RationalMatrix h = RationalMatrix::from_rows({{2, 1, 1}, {1, 1, 0}, {1, 0, 2}});
  return conjugate(RationalMatrix::diagonal({16, 1, mpq_class(1, 16)}), h);
}

}  // namespace

TEST_CASE("power selection") {
  const PowerSelection p = select_power(diag9(), 11);
  // min over roots of alpha(mu(beta^{+-1})) is log 3
  CHECK(p.min_root == doctest::Approx(std::log(3.0)));
  CHECK(p.m == 10);
  // floor rounds down, so N <= m * min_root fails here
  CHECK_FALSE(p.bound_holds);
  CHECK(p.m * p.min_root <= 11.0);
  CHECK((p.m + 1) * p.min_root > 11.0);
  CHECK(select_power(diag9(), 1).zero);
  CHECK_THROWS_AS(select_power(diag9(), 0), DomainError);
  CHECK_THROWS_AS(select_power(RationalMatrix::diagonal({2, 2, mpq_class(1, 4)}), 5), DomainError);
}

TEST_CASE("cyclic group has critical exponent near zero") {
  const ExponentEstimate e = critical_exponent(GeneratorSet({"a"}, {diag9()}), 60);
  REQUIRE(e.roots.size() == 2);
  for (const auto& r : e.roots) {
    CHECK(r.slope <= 0.05);
    CHECK(r.slope >= 0.0);
    CHECK(r.r_lo < r.r_hi);
  }
  CHECK_THROWS_AS(critical_exponent(GeneratorSet({"a"}, {diag9()}), 2), InsufficientData);
}

TEST_CASE("linear growth check separates loxodromic and unipotent") {
  const AnosovReport lox = anosov_growth_check(GeneratorSet({"a"}, {diag9()}), 8);
  CHECK(lox.pass());
  const AnosovReport uni =
      anosov_growth_check(GeneratorSet({"u"}, {RationalMatrix::from_rows({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}})}), 8);
  CHECK_FALSE(uni.pass());
  CHECK_THROWS_AS(anosov_growth_check(GeneratorSet({"a"}, {diag9()}), 2), InsufficientData);
}

TEST_CASE("ping-pong certificate and its failure mode") {
  const GeneratorSet prev({"a"}, {diag9()});
  const RationalMatrix beta = conjugated_beta();
  PingPongOptions o;
  o.len_cap = 4;
  const PingPongCertificate ok = pingpong_certify(prev, power(beta, 4), 0.1, 1, 200, o);
  CHECK(ok.ok());
  CHECK(ok.gp_margin > 0);
  CHECK(ok.eq33_margin > 0);
  const PingPongCertificate bad = pingpong_certify(prev, beta, 0.1, 0, 200, o);
  CHECK(bad.status == PingPongCertificate::Status::Eq33Failed);
  CHECK_FALSE(bad.witness.empty());
  CHECK_THROWS_AS(pingpong_certify(prev, beta, 0.7, 1, 200, o), DomainError);
  CHECK_THROWS_AS(pingpong_certify(prev, beta, 0.1, 1, 4, o), DomainError);
}

TEST_CASE("key lemma audit is nested and deterministic") {
  const GeneratorSet prev({"a"}, {diag9()});
  const RationalMatrix beta = conjugated_beta();
  KeyLemmaOptions o;
  o.seed = 5;
  const KeyLemmaReport small = key_lemma_audit(prev, beta, 3, 12, o);
  const KeyLemmaReport big = key_lemma_audit(prev, beta, 5, 12, o);
  const KeyLemmaReport again = key_lemma_audit(prev, beta, 5, 12, o);
  REQUIRE(small.roots.size() == 2);
  for (std::size_t r = 0; r < 2; ++r) {
    for (int l = 0; l < 3; ++l) CHECK(small.roots[r].max_by_blocks[l] == big.roots[r].max_by_blocks[l]);
    CHECK(big.roots[r].max_deviation >= small.roots[r].max_deviation);
    CHECK(big.roots[r].max_deviation == again.roots[r].max_deviation);
  }
  o.positive_only = true;
  const KeyLemmaReport pos = key_lemma_audit(prev, beta, 4, 12, o);
  CHECK(pos.constant() >= 0);
}

TEST_CASE("stage audit refuses an uncertified stage") {
  std::vector<Stage> stages;
  stages.push_back({GeneratorSet({"a"}, {diag9()}), std::nullopt});
  stages.push_back({GeneratorSet({"a", "b"}, {diag9(), conjugated_beta()}), std::nullopt});
  const auto audit = condition31_audit(stages, 10);
  REQUIRE(audit.size() == 2);
  CHECK_FALSE(audit[0].refused);
  CHECK(audit[0].pass);
  CHECK(audit[0].budget == doctest::Approx(0.5));
  CHECK(audit[1].refused);
  CHECK_FALSE(audit[1].pass);
}
