#include <doctest.h>

#include <cmath>
#include <random>

#include "limitset/errors.hpp"
#include "limitset/spectral.hpp"
#include "limitset/words.hpp"
#include "oracles.hpp"

using namespace limitset;

namespace {

const double kLog3 = std::log(3.0);

GeneratorSet triangle() {
  return GeneratorSet({"a", "b"}, {RationalMatrix::from_rows({{1, 1, 2}, {0, 1, 1}, {0, -3, -2}}),
                                   RationalMatrix::from_rows({{-2, 0, -1}, {-5, 1, -1}, {3, 0, 1}})});
}

}  // namespace

TEST_CASE("diagonal Jordan and Cartan projections") {
  const RationalMatrix d = RationalMatrix::diagonal({9, 3, mpq_class(1, 27)});
  const AVector l = jordan_projection(d), m = cartan_projection(d);
  const double expect[] = {2 * kLog3, kLog3, -3 * kLog3};
  for (int i = 0; i < 3; ++i) {
    CHECK(l[i] == doctest::Approx(expect[i]).epsilon(1e-12));
    CHECK(m[i] == doctest::Approx(expect[i]).epsilon(1e-12));
  }
  CHECK(simple_root(l, 1) == doctest::Approx(kLog3));
  CHECK(simple_root(l, 2) == doctest::Approx(4 * kLog3));
  const AVector o = opposition_involution(l);
  CHECK(o[0] == doctest::Approx(3 * kLog3));
  CHECK(o[2] == doctest::Approx(-2 * kLog3));
}

TEST_CASE("Cartan projection against the inertia bisection oracle") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 3 + trial % 2;
    const RationalMatrix g = oracle::random_unimodular(n, 5, rng);
    const AVector mu = cartan_projection(g);
    const auto ref = oracle::log_singular_values(oracle::rows_of(g));
    for (int i = 0; i < n; ++i) CHECK(mu[i] == doctest::Approx(ref[i]).epsilon(1e-9).scale(1.0));
    CHECK(mu.satisfies_invariants());
  }
}

TEST_CASE("classification tags") {
  CHECK(classify(RationalMatrix::identity(3)).tag == SpectralClass::Tag::Identity);
  const GeneratorSet t = triangle();
  CHECK(classify(t.matrix(0)).tag == SpectralClass::Tag::FiniteOrderNontrivial);
  CHECK(classify(RationalMatrix::from_rows({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}})).tag ==
        SpectralClass::Tag::Unipotent);
  CHECK(classify(RationalMatrix::diagonal({9, 3, mpq_class(1, 27)})).tag == SpectralClass::Tag::Loxodromic);
  CHECK(classify(RationalMatrix::diagonal({2, 2, mpq_class(1, 4)})).tag == SpectralClass::Tag::SingularSemisimple);
  const RationalMatrix jordan_block =
      RationalMatrix::from_rows({{2, 1, 0}, {0, 2, 0}, {0, 0, mpq_class(1, 4)}});
  CHECK(classify(jordan_block).tag == SpectralClass::Tag::Mixed);

  const Word w = parse_word("ba^-1ba^-1ba^-1ba^-1b^-1aba^-1ba^-1b^-1aba^-1", t);
  REQUIRE(w.size() == 18);
  const SpectralClass c = classify(evaluate(w, t));
  CHECK(c.tag == SpectralClass::Tag::ComplexSpectrum);
  CHECK(c.order.kind == FiniteOrder::Kind::ProvablyInfinite);
  REQUIRE(c.discriminant);
  CHECK(sgn(*c.discriminant) < 0);
}

TEST_CASE("loxodromic test is exact") {
  CHECK(is_loxodromic(RationalMatrix::diagonal({9, 3, mpq_class(1, 27)})));
  CHECK_FALSE(is_loxodromic(RationalMatrix::diagonal({2, 2, mpq_class(1, 4)})));
  // eigenvalues 2, -2 share a modulus
  CHECK_FALSE(is_loxodromic(RationalMatrix::diagonal({2, -2, mpq_class(-1, 4)})));
  CHECK_FALSE(is_loxodromic(RationalMatrix::from_rows({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}})));
}

TEST_CASE("complex invariant pair is invariant") {
  const GeneratorSet t = triangle();
  const RationalMatrix g = evaluate(parse_word("ba^-1ba^-1ba^-1ba^-1b^-1aba^-1ba^-1b^-1aba^-1", t), t);
  const InvariantPair p = complex_invariant_pair(g);
  CHECK(p.point_residual < 1e-9);
  CHECK(p.line_residual < 1e-9);
  double dot = 0;
  for (int i = 0; i < 3; ++i) dot += p.point[i] * p.line[i];
  CHECK(std::fabs(dot) > 1e-6);  // eigenline not inside the invariant plane
}
