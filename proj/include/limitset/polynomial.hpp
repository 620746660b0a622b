#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>
#include <vector>

#include "limitset/bigfloat.hpp"

namespace limitset {

// Univariate polynomial over Q, coefficients in ascending degree order.
// The zero polynomial has an empty coefficient vector and degree -1.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<mpq_class> ascending);

  static Polynomial monomial(const mpq_class& c, int degree);
  // x - r
  static Polynomial linear_root(const mpq_class& r);

  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  const std::vector<mpq_class>& coefficients() const { return c_; }
  const mpq_class& coeff(int k) const;
  const mpq_class& leading() const { return c_.back(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  bool has_integer_coefficients() const;

  Polynomial monic() const;
  Polynomial derivative() const;
  // p(-x)
  Polynomial reflect() const;

  mpq_class operator()(const mpq_class& x) const;
  BigFloat operator()(const BigFloat& x) const;
  BigComplex operator()(const BigComplex& x) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.c_ == b.c_; }

  // Euclidean division; throws DomainError on a zero divisor.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const;
  bool divisible_by(const Polynomial& d) const { return divmod(d).second.is_zero(); }

  std::string to_string(const std::string& var = "x") const;

 private:
  void trim();
  std::vector<mpq_class> c_;
};

// Monic gcd; gcd(0, 0) is the zero polynomial.
Polynomial gcd(Polynomial a, Polynomial b);

// Product of the distinct irreducible factors, monic.
Polynomial squarefree_part(const Polynomial& p);

// Yun's algorithm: p = c * a_1 * a_2^2 * ... * a_k^k with a_i monic, squarefree and
// pairwise coprime. Element i-1 of the result is a_i (possibly constant 1).
std::vector<Polynomial> squarefree_factorization(const Polynomial& p);

// True if p is (up to a constant) a product of cyclotomic polynomials.
bool is_cyclotomic_product(const Polynomial& p);

// Number of distinct real roots, exact (Sturm sequence).
int count_distinct_real_roots(const Polynomial& p);

// m-th cyclotomic polynomial (memoised, thread-safe).
const Polynomial& cyclotomic(int m);

// Euler phi.
int euler_phi(int m);

}  // namespace limitset
