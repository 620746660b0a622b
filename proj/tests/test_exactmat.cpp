#include <doctest.h>

#include <random>

#include "limitset/errors.hpp"
#include "limitset/exactmat.hpp"
#include "oracles.hpp"

using namespace limitset;

namespace {

RationalMatrix triangle_a() { return RationalMatrix::from_rows({{1, 1, 2}, {0, 1, 1}, {0, -3, -2}}); }
RationalMatrix triangle_b() { return RationalMatrix::from_rows({{-2, 0, -1}, {-5, 1, -1}, {3, 0, 1}}); }

QMatrix to_q(const oracle::QRows& r) {
  QMatrix q(static_cast<int>(r.size()), static_cast<int>(r[0].size()));
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < r[0].size(); ++j) q(static_cast<int>(i), static_cast<int>(j)) = r[i][j];
  return q;
}

}  // namespace

TEST_CASE("determinant agrees with cofactor expansion") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 4;
    oracle::QRows r(n, std::vector<mpq_class>(n));
    for (auto& row : r)
      for (auto& x : row) {
        x = mpq_class(num(rng), den(rng));
        x.canonicalize();
      }
    CHECK(to_q(r).determinant() == oracle::laplace_det(r));
  }
}

TEST_CASE("characteristic polynomial matches det(tI - g) pointwise") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 3 + trial % 3;
    const RationalMatrix g = oracle::random_unimodular(n, 3, rng);
    const CharPoly p = char_poly(g);
    REQUIRE(p.degree() == n);
    for (int t = -3; t <= 3; ++t) {
      oracle::QRows m = oracle::rows_of(g);
      for (auto& row : m)
        for (auto& x : row) x = -x;
      for (int i = 0; i < n; ++i) m[i][i] += t;
      CHECK(p.poly(mpq_class(t)) == oracle::laplace_det(m));
    }
    CHECK(evaluate(p.poly, g.to_qmatrix()).is_zero());
  }
}

TEST_CASE("exterior powers match Laplace minors") {
  std::mt19937_64 rng(5);
  for (int n : {3, 4}) {
    const RationalMatrix g = oracle::random_unimodular(n, 4, rng);
    for (int k = 1; k < n; ++k) {
      const QMatrix lib = exterior_power(g, k).to_qmatrix();
      CHECK(lib == to_q(oracle::exterior(oracle::rows_of(g), k)));
    }
  }
}

TEST_CASE("unimodular carrier") {
  CHECK_THROWS_AS(RationalMatrix::from_rows({{2, 0, 0}, {0, 1, 0}, {0, 0, 1}}), DomainError);
  CHECK_THROWS_AS(RationalMatrix::from_rows({{1, 0}, {0, 1}, {0, 0}}), DimensionError);
  const RationalMatrix d = RationalMatrix::diagonal({9, 3, mpq_class(1, 27)});
  CHECK(d.denominator() == 27);
  CHECK((d * d.inverse()).is_identity());
  CHECK(power(d, -2) == power(d.inverse(), 2));
  const RationalMatrix a = triangle_a(), b = triangle_b();
  CHECK(power(a, 3).is_identity());
  CHECK(power(b, 3).is_identity());
  CHECK(power(a * b, 4).is_identity());
  CHECK_FALSE(power(a * b, 2).is_identity());
}

TEST_CASE("finite order decisions") {
  const RationalMatrix a = triangle_a(), b = triangle_b();
  auto fa = finite_order(a, 24);
  CHECK(fa.kind == FiniteOrder::Kind::Finite);
  CHECK(fa.order == 3);
  auto fab = finite_order(a * b, 24);
  CHECK(fab.kind == FiniteOrder::Kind::Finite);
  CHECK(fab.order == 4);
  CHECK(finite_order(RationalMatrix::identity(3), 24).order == 1);
  auto e12 = finite_order(RationalMatrix::from_rows({{1, 1, 0}, {0, 1, 0}, {0, 0, 1}}), 24);
  CHECK(e12.kind == FiniteOrder::Kind::ProvablyInfinite);
  auto diag = finite_order(RationalMatrix::diagonal({2, 1, mpq_class(1, 2)}), 24);
  CHECK(diag.kind == FiniteOrder::Kind::ProvablyInfinite);
}

TEST_CASE("cubic discriminant") {
  // x^3 - 3x + 1: -4 p^3 - 27 q^2 = 108 - 27
  CharPoly p{Polynomial({1, -3, 0, 1})};
  CHECK(cubic_discriminant(p) == 81);
  // x^3 - 1 has a complex pair
  CharPoly q{Polynomial({-1, 0, 0, 1})};
  CHECK(cubic_discriminant(q) == -27);
}

TEST_CASE("rational span") {
  RationalSpan s(3);
  CHECK(s.insert({1, 2, 3}));
  CHECK(s.insert({0, 1, 1}));
  CHECK_FALSE(s.insert({2, 5, 7}));
  CHECK(s.rank() == 2);
  CHECK(s.insert({0, 0, mpq_class(1, 3)}));
  CHECK_FALSE(s.insert({5, -1, 4}));
}
