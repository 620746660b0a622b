#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "limitset/polynomial.hpp"

namespace limitset {

// Dense n x n rational matrix with no invariant beyond shape. Used for the
// general linear algebra behind the unimodular carrier (kernels, spans,
// Cayley-Hamilton evaluation).
class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(int rows, int cols);
  static QMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  mpq_class& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const mpq_class& operator()(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * cols_ + j];
  }

  QMatrix transpose() const;
  bool is_zero() const;
  mpq_class trace() const;
  mpq_class determinant() const;
  int rank() const;
  // Basis of the right kernel {x : A x = 0}, as columns.
  std::vector<std::vector<mpq_class>> nullspace() const;
  std::optional<QMatrix> inverse() const;

  QMatrix& operator+=(const QMatrix& o);
  QMatrix& operator-=(const QMatrix& o);
  QMatrix& operator*=(const mpq_class& s);
  friend QMatrix operator+(QMatrix a, const QMatrix& b) { return a += b; }
  friend QMatrix operator-(QMatrix a, const QMatrix& b) { return a -= b; }
  friend QMatrix operator*(QMatrix a, const mpq_class& s) { return a *= s; }
  friend QMatrix operator*(const QMatrix& a, const QMatrix& b);
  friend bool operator==(const QMatrix& a, const QMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

  std::vector<mpq_class> apply(const std::vector<mpq_class>& v) const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<mpq_class> a_;
};

// Exact element of SL(n, Q): integer numerator matrix over a positive common
// denominator, kept in lowest terms. Determinant is exactly 1; construction
// from user data checks it.
class RationalMatrix {
 public:
  RationalMatrix() = default;

  // Throws DimensionError for ragged/undersized input, DomainError if det != 1.
  static RationalMatrix from_rows(const std::vector<std::vector<mpq_class>>& rows);
  static RationalMatrix from_qmatrix(const QMatrix& m);
  static RationalMatrix identity(int n);
  static RationalMatrix diagonal(const std::vector<mpq_class>& d);

  int n() const { return n_; }
  mpq_class entry(int i, int j) const;
  const mpz_class& numerator(int i, int j) const {
    return num_[static_cast<std::size_t>(i) * n_ + j];
  }
  const mpz_class& denominator() const { return den_; }
  bool is_integral() const { return den_ == 1; }
  bool is_identity() const;

  RationalMatrix inverse() const;
  RationalMatrix transpose() const;
  QMatrix to_qmatrix() const;
  mpq_class trace() const;
  // Frobenius norm squared, exact.
  mpq_class frobenius_sq() const;
  // log2 of the largest |entry| (0 for the zero pattern), cheap magnitude probe.
  double log2_max_entry() const;

  friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.n_ == b.n_ && a.den_ == b.den_ && a.num_ == b.num_;
  }
  friend bool operator!=(const RationalMatrix& a, const RationalMatrix& b) { return !(a == b); }

  std::size_t hash() const;
  // Row-major decimal strings ("-3", "1/2").
  std::vector<std::vector<std::string>> to_strings() const;
  std::string to_string() const;

 private:
  RationalMatrix(int n, std::vector<mpz_class> num, mpz_class den);
  void normalize();

  int n_ = 0;
  std::vector<mpz_class> num_;
  mpz_class den_{1};

  friend RationalMatrix exterior_power(const RationalMatrix& g, int k);
};

struct RationalMatrixHash {
  std::size_t operator()(const RationalMatrix& m) const { return m.hash(); }
};

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b);
// g^k for any integer k (negative powers through the exact inverse).
RationalMatrix power(const RationalMatrix& g, long k);
// h g h^-1
RationalMatrix conjugate(const RationalMatrix& g, const RationalMatrix& h);

// Monic characteristic polynomial det(xI - g), degree n.
struct CharPoly {
  Polynomial poly;
  int degree() const { return poly.degree(); }
  const std::vector<mpq_class>& coefficients() const { return poly.coefficients(); }
};

CharPoly char_poly(const RationalMatrix& g);
CharPoly char_poly(const QMatrix& g);
// Evaluates p at a square matrix.
QMatrix evaluate(const Polynomial& p, const QMatrix& m);

// 18abcd - 4b^3 d + b^2 c^2 - 4ac^3 - 27a^2 d^2 for a x^3 + b x^2 + c x + d.
mpq_class cubic_discriminant(const CharPoly& p);

// Matrix of the k-th exterior power in the lexicographic basis of k-subsets.
RationalMatrix exterior_power(const RationalMatrix& g, int k);
QMatrix exterior_power(const QMatrix& g, int k);
// Lexicographically ordered k-subsets of {0, ..., n-1}.
std::vector<std::vector<int>> k_subsets(int n, int k);

struct FiniteOrder {
  enum class Kind { Finite, InfiniteOrExceedsBound, ProvablyInfinite };
  Kind kind = Kind::InfiniteOrExceedsBound;
  long order = 0;         // for Finite
  std::string evidence;   // which test decided
};

FiniteOrder finite_order(const RationalMatrix& g, long k_max);
const char* to_string(FiniteOrder::Kind k);

// Incremental row echelon form over Q: tracks the span of inserted vectors.
class RationalSpan {
 public:
  explicit RationalSpan(std::size_t dim) : dim_(dim) {}
  // Returns true if v was independent of the current span.
  bool insert(std::vector<mpq_class> v);
  std::size_t rank() const { return rows_.size(); }
  std::size_t dimension() const { return dim_; }

 private:
  std::size_t dim_;
  std::vector<std::vector<mpq_class>> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace limitset
