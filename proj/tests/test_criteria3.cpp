#include <doctest.h>

#include "limitset/criteria3.hpp"
#include "limitset/errors.hpp"

using namespace limitset;

namespace {

GeneratorSet triangle() {
  return GeneratorSet({"a", "b"}, {RationalMatrix::from_rows({{1, 1, 2}, {0, 1, 1}, {0, -3, -2}}),
                                   RationalMatrix::from_rows({{-2, 0, -1}, {-5, 1, -1}, {3, 0, 1}})});
}

RationalMatrix block_s() { return RationalMatrix::from_rows({{0, -1, 0}, {1, 0, 0}, {0, 0, 1}}); }
RationalMatrix block_t() { return RationalMatrix::from_rows({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}); }
RationalMatrix conj_h() { return RationalMatrix::from_rows({{2, 1, 1}, {1, 1, 0}, {1, 0, 2}}); }

}  // namespace

TEST_CASE("triangle group: gate passes and criterion 3 fires") {
  const GeneratorSet g = triangle();
  const ZariskiReport z = zariski_density_heuristic(g, 6);
  CHECK(z.result == ZariskiReport::Result::Pass);
  CHECK(z.span_dimension == 9);
  CHECK(z.invariant_forms == 0);
  const CriteriaReport r = run_criteria(g, {});
  CHECK(r.full_limit_set);
  CHECK(r.witness_criterion == 3);
  REQUIRE(r.criterion3);
  CHECK(r.criterion3->word.size() <= 18);
  CHECK(sgn(r.criterion3->discriminant) < 0);
  CHECK(verify_complex_witness(g, r.criterion3->word));
}

TEST_CASE("reducible groups fail the gate") {
  CHECK(zariski_density_heuristic(GeneratorSet({"s", "t"}, {block_s(), block_t()}), 6).result ==
        ZariskiReport::Result::Fail);
  const CriteriaReport r = run_criteria(GeneratorSet({"s", "t"}, {block_s(), block_t()}), {});
  CHECK_FALSE(r.full_limit_set);
  CHECK(r.witness_criterion == 0);
}

TEST_CASE("budget zero searches nothing") {
  CriteriaBudget b;
  b.max_len = 0;
  const CriteriaReport r = run_criteria(triangle(), b);
  CHECK_FALSE(r.full_limit_set);
  CHECK(r.horizon == 0);
}

TEST_CASE("commuting pairs") {
  const RationalMatrix e13 = RationalMatrix::from_rows({{1, 0, 1}, {0, 1, 0}, {0, 0, 1}});
  const auto u = find_commuting_pair(GeneratorSet({"x", "y"}, {block_t(), e13}), 2);
  REQUIRE(u);
  CHECK(u->kind == CommutingWitness::Case::Unipotent);
  CHECK(verify_commuting_witness(GeneratorSet({"x", "y"}, {block_t(), e13}), u->u, u->v));

  // Units of the cubic field of x^3 - 3x + 1: C^2 and (I - C)^2.
  QMatrix c(3, 3);
  c(0, 2) = -1;
  c(1, 0) = 1;
  c(1, 2) = 3;
  c(2, 1) = 1;
  const QMatrix ic = QMatrix::identity(3) - c;
  const GeneratorSet units({"u", "v"}, {RationalMatrix::from_qmatrix(c * c), RationalMatrix::from_qmatrix(ic * ic)});
  const auto s = find_commuting_pair(units, 1);
  REQUIRE(s);
  CHECK(s->kind == CommutingWitness::Case::Semisimple);
  CHECK(s->singular_semisimple_free);

  // g and g^2 satisfy a power relation.
  const RationalMatrix g = conj_h();
  CHECK_FALSE(find_commuting_pair(GeneratorSet({"g", "h"}, {g, g * g}), 2));
}

TEST_CASE("standard SL(2,Z) copies") {
  const auto w = find_sl2z_block(GeneratorSet({"s", "t"}, {block_s(), block_t()}), 1);
  REQUIRE(w);
  const GeneratorSet hb({"s", "t"}, {conjugate(block_s(), conj_h()), conjugate(block_t(), conj_h())});
  const auto w2 = find_sl2z_block(hb, 1);
  REQUIRE(w2);
  CHECK(verify_block_witness(hb, w2->s, w2->t, w2->basis));
}

TEST_CASE("complex witness preconditions") {
  const GeneratorSet four({"a"}, {RationalMatrix::identity(4)});
  CHECK_THROWS_AS(find_complex_spectrum_witness(four, 2), DimensionError);
  const GeneratorSet rational({"a"}, {RationalMatrix::diagonal({2, 1, mpq_class(1, 2)})});
  CHECK_THROWS_AS(find_complex_spectrum_witness(rational, 2), DomainError);
}
