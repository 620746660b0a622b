#include <doctest.h>

#include <cmath>

#include "limitset/cone.hpp"
#include "limitset/errors.hpp"

using namespace limitset;

namespace {

RationalMatrix diag9() { return RationalMatrix::diagonal({9, 3, mpq_class(1, 27)}); }
RationalMatrix spd() { return RationalMatrix::from_rows({{2, 1, 1}, {1, 1, 0}, {1, 0, 2}}); }

}  // namespace

TEST_CASE("cyclic diagonal group has two opposite rays") {
  const ConeEstimate c = cone_estimate(GeneratorSet({"a"}, {diag9()}), 3);
  REQUIRE(c.rays.size() == 2);
  CHECK(c.rays[0].normalized[0] == doctest::Approx(2.0 / 3));
  CHECK(c.rays[0].normalized[1] == doctest::Approx(1.0 / 3));
  CHECK(c.rays[0].normalized[2] == doctest::Approx(-1.0));
  CHECK(c.rays[1].normalized[0] == doctest::Approx(1.0));
  CHECK(c.rays[1].normalized[1] == doctest::Approx(-1.0 / 3));
  CHECK(c.rays[0].multiplicity == 3);
  CHECK(c.rays[0].slice[0] == doctest::Approx(0.2));
  CHECK(c.rays[0].span_normalized[0] - c.rays[0].span_normalized[2] == doctest::Approx(1.0));
  CHECK(c.hull.size() == 2);
}

TEST_CASE("identity input gives an empty estimate") {
  const ConeEstimate c = cone_estimate(GeneratorSet({"e"}, {RationalMatrix::identity(3)}), 4);
  CHECK(c.rays.empty());
  CHECK(c.hull.empty());
  CHECK_THROWS_AS(boundary_test(c, AVector({1, 0, -1})), DomainError);
}

TEST_CASE("boundary verdicts") {
  const ConeEstimate single = cone_estimate(GeneratorSet({"a"}, {RationalMatrix::diagonal({4, 2, mpq_class(1, 8)})}), 1);
  const AVector v = jordan_projection(RationalMatrix::diagonal({4, 2, mpq_class(1, 8)}));
  const BoundaryVerdict b = boundary_test(single, v);
  CHECK(b.on_boundary);
  CHECK(b.distance == doctest::Approx(0.0));
  CHECK_THROWS_AS(boundary_test(single, AVector({0, 0, 0})), DomainError);

  const ConeEstimate fat = cone_estimate(GeneratorSet({"a", "b"}, {diag9(), spd()}), 4);
  REQUIRE(fat.hull.size() == 2);
  // Midpoint of two rays strictly inside the segment.
  std::size_t i = 0, j = 0;
  const double lo = fat.rays[fat.hull[0]].slice[0], hi = fat.rays[fat.hull[1]].slice[0];
  for (std::size_t k = 0; k < fat.rays.size(); ++k) {
    const double x = fat.rays[k].slice[0];
    if (x > lo + 0.05 && x < hi - 0.05) {
      if (i == 0) i = k;
      else j = k;
    }
  }
  REQUIRE(j != 0);
  const AVector mid = fat.rays[i].normalized + fat.rays[j].normalized;
  const BoundaryVerdict m = boundary_test(fat, mid);
  CHECK_FALSE(m.on_boundary);
  CHECK(m.inside);
  CHECK(boundary_test(fat, fat.rays[fat.hull[0]].lambda).on_boundary);
}

TEST_CASE("ray set invariants") {
  const GeneratorSet g({"a", "b"}, {diag9(), spd()});
  const ConeEstimate c4 = cone_estimate(g, 4), c5 = cone_estimate(g, 5);
  for (const auto& r : c5.rays) {
    CHECK(r.lambda.satisfies_invariants());
    CHECK(r.slice[0] >= -1e-12);
    CHECK(r.slice[0] <= 1 + 1e-12);
    // opposition symmetry: x -> 1 - x is also a ray
    bool found = false;
    for (const auto& s : c5.rays) found = found || std::fabs(s.slice[0] - (1 - r.slice[0])) <= 1e-8;
    CHECK(found);
  }
  CHECK(hull_excess(c4, c5) <= 1e-8);
}

TEST_CASE("ratio check on generators") {
  const GeneratorSet g({"a", "b"}, {diag9(), spd()});
  const RatioReport r = ratio_check(g, 1);
  CHECK(r.a_ratios[0] == doctest::Approx(0.25));
  CHECK(r.a_ratios[1] == doctest::Approx(4.0));
  CHECK(r.bound == doctest::Approx(4.0));
  CHECK(r.words_checked == 4);
  CHECK(r.max_ratio >= 4.0 - 1e-12);
  CHECK(ratio_12_over_last(jordan_projection(diag9())) == doctest::Approx(0.25));
  CHECK_THROWS_AS(ratio_check(GeneratorSet({"a"}, {diag9()}), 2), DimensionError);
  CHECK_THROWS_AS(ratio_check(GeneratorSet({"a", "u"}, {diag9(), RationalMatrix::from_rows({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}})}), 2),
                  DomainError);
}

TEST_CASE("degenerate candidates exhaust the budget") {
  // Every word of length 1 has lambda_12 = lambda_23.
  const RationalMatrix s = RationalMatrix::diagonal({4, 1, mpq_class(1, 4)});
  const GeneratorSet g({"a", "b"}, {s, conjugate(s, spd())});
  ThmA1Options o;
  o.search_len = 1;
  CHECK_THROWS_AS(build_thmA1_pair(g, o), BudgetExhausted);
}

TEST_CASE("Theorem A.1 pair from a diagonal seed") {
  const GeneratorSet seed({"a", "b"}, {diag9(), spd()});
  ThmA1Options o;
  o.check_len = 6;
  const ThmA1Result r = build_thmA1_pair(seed, o);
  CHECK(r.a_ratios[0] == doctest::Approx(0.25));
  CHECK(r.a_ratios[1] == doctest::Approx(4.0));
  CHECK(r.certificate.ok());
  CHECK(r.ratios.pass());
  CHECK(r.boundary.on_boundary);
  // Replay from the recorded pair.
  const RatioReport again = ratio_check(r.pair(), o.check_len);
  CHECK(again.violations.size() == 0);
  CHECK(again.max_ratio == r.ratios.max_ratio);
}
