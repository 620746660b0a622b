#include <doctest.h>

#include <cmath>
#include <random>

#include "limitset/config.hpp"
#include "limitset/errors.hpp"
#include "limitset/flags.hpp"
#include "limitset/spectral.hpp"
#include "oracles.hpp"

using namespace limitset;

TEST_CASE("standard and reversed flags") {
  const Flag s = Flag::standard(3), r = Flag::reversed(3);
  const auto t = transversality_margin(s, r);
  CHECK(t.margin == doctest::Approx(1.0));
  CHECK(t.transverse);
  CHECK(transversality_margin(s, s).margin == doctest::Approx(0.0));
  CHECK(flag_distance(s, r) == doctest::Approx(1.0));
  CHECK(flag_distance(s, s) == doctest::Approx(0.0));
  CHECK_THROWS_AS(Flag(RealMatrix::from_rows({{1, 2, 0}, {0, 0, 0}, {0, 0, 1}})), DomainError);
}

TEST_CASE("fixed flags of a diagonal element") {
  const FixedFlags f = fixed_flags(RationalMatrix::diagonal({4, 2, mpq_class(1, 8)}));
  CHECK(flag_distance(f.attractive, Flag::standard(3)) < 1e-12);
  CHECK(flag_distance(f.repulsive, Flag::reversed(3)) < 1e-12);
  CHECK(f.residual < 1e-12);
  CHECK_THROWS_AS(fixed_flags(RationalMatrix::from_rows({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}})), DomainError);
}

TEST_CASE("action is a group action") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const RationalMatrix g = oracle::random_unimodular(3, 3, rng), h = oracle::random_unimodular(3, 3, rng);
    const Flag f = random_flag(3, rng);
    CHECK(flag_distance(act(g * h, f), act(g, act(h, f))) < 1e-9);
    CHECK(flag_distance(act(g.inverse(), act(g, f)), f) < 1e-9);
    CHECK(act(g, f).gram_residual() < 1e-12);
  }
}

TEST_CASE("sampling at a prescribed distance") {
  std::mt19937_64 rng(31);
  const Flag f = random_flag(3, rng);
  for (double r : {0.05, 0.2, 0.5, 0.9}) {
    const Flag g = sample_at_distance(f, r, rng);
    CHECK(flag_distance(f, g) == doctest::Approx(r).epsilon(1e-9));
    CHECK(flag_distance(f, sample_in_ball(f, r, rng)) <= r + 1e-12);
  }
}

TEST_CASE("fixed flags are fixed for random loxodromics") {
  std::mt19937_64 rng(37);
  int tested = 0;
  while (tested < 20) {
    const RationalMatrix g = oracle::random_unimodular(3, 4, rng);
    if (!is_loxodromic(g)) continue;
    ++tested;
    const FixedFlags f = fixed_flags(g);
    CHECK(f.residual <= 1e-9);
    CHECK(transversality_margin(f.attractive, f.repulsive).transverse);
  }
}

TEST_CASE("limit sample of a cyclic group is its fixed flag pair") {
  const GeneratorSet g({"a"}, {RationalMatrix::diagonal({9, 3, mpq_class(1, 27)})});
  const auto s = limit_set_sample(g, 4);
  REQUIRE(s.size() == 2);
  CHECK(s[0].multiplicity == 4);
  CHECK(flag_distance(s[0].flag, Flag::standard(3)) < 1e-12);
}
