#pragma once

#include <optional>
#include <string>
#include <vector>

#include "limitset/bigfloat.hpp"
#include "limitset/exactmat.hpp"
#include "limitset/polynomial.hpp"
#include "limitset/realmat.hpp"

namespace limitset {

// Point of the closed positive Weyl chamber: descending, zero-sum.
class AVector {
 public:
  AVector() = default;
  explicit AVector(std::vector<double> values) : v_(std::move(values)) {}

  int n() const { return static_cast<int>(v_.size()); }
  double operator[](std::size_t i) const { return v_[i]; }
  const std::vector<double>& values() const { return v_; }
  double norm() const;
  double l1() const;
  bool is_zero() const;
  // Descending within tolerances().sort, zero-sum within tolerances().sum.
  bool satisfies_invariants() const;

  AVector scaled(double s) const;
  friend AVector operator+(const AVector& a, const AVector& b);
  friend AVector operator-(const AVector& a, const AVector& b);

 private:
  std::vector<double> v_;
};

// alpha_{i,j}(v) = v_i - v_j, 1-based, i < j.
double root_value(const AVector& v, int i, int j);
// alpha_{i,i+1}
inline double simple_root(const AVector& v, int i) { return root_value(v, i, i + 1); }
// v -> (-v_n, ..., -v_1)
AVector opposition_involution(const AVector& v);

// Descending log singular values. The exact overload runs Jacobi on g^T g in
// MPFR at a precision derived from the condition number of g.
AVector cartan_projection(const RationalMatrix& g);
AVector cartan_projection(const RealMatrix& g);

// Largest singular value.
double operator_norm(const RealMatrix& m);
// log of the largest singular value of an exact matrix (any determinant).
double log_operator_norm(const RationalMatrix& m);
double log_operator_norm(const QMatrix& m);

// Roots of the characteristic polynomial, grouped by multiplicity.
struct Root {
  BigComplex z;
  int multiplicity;
  bool real;  // exact (Sturm count)
  double log_modulus;
};

struct Spectrum {
  Polynomial poly;
  std::vector<Root> roots;
  BigFloat::prec_t precision = 0;

  std::vector<double> moduli() const;  // descending, with multiplicity
};

// Throws ConvergenceError if the root finder stalls.
Spectrum spectrum(const Polynomial& p);
Spectrum spectrum(const RationalMatrix& g);

// Descending log eigenvalue moduli; exactly zero when every eigenvalue is a
// root of unity.
AVector jordan_projection(const RationalMatrix& g);
AVector jordan_projection(const RealMatrix& g);

// Exact: moduli pairwise distinct (real, simple spectrum with no r / -r pair).
bool is_loxodromic(const RationalMatrix& g);
bool is_loxodromic(const CharPoly& p);

struct SpectralClass {
  enum class Tag {
    Identity,
    FiniteOrderNontrivial,
    Loxodromic,
    SingularSemisimple,
    Unipotent,
    ComplexSpectrum,
    Mixed
  };
  Tag tag = Tag::Mixed;
  std::vector<double> eigenvalue_moduli;
  AVector jordan;
  AVector cartan;
  std::vector<int> walls;  // i with alpha_{i,i+1}(jordan) = 0, 1-based
  FiniteOrder order;
  bool complex_spectrum = false;
  bool semisimple = false;
  std::optional<mpq_class> discriminant;  // n = 3
  std::string note;
};

const char* to_string(SpectralClass::Tag t);

// Exact decisions where the exact layer allows them; UnresolvedAtTolerance
// when a wall decision falls inside the tolerance band.
SpectralClass classify(const RationalMatrix& g, long k_max = 24);

// For n = 3 with a non-real eigenvalue pair: the real eigenline p0 and the
// invariant plane l0 (as its annihilating functional). Unit vectors, sign
// normalized so the largest-magnitude coordinate is positive.
struct InvariantPair {
  std::vector<double> point;
  std::vector<double> line;
  double point_residual = 0;
  double line_residual = 0;
};
InvariantPair complex_invariant_pair(const RationalMatrix& g);

// Unit vector spanning ker(g - r I) for a simple real root r, at extended
// precision; transpose = true gives the left eigenvector.
std::vector<double> real_eigenvector(const RationalMatrix& g, const BigComplex& r, bool transpose,
                                     BigFloat::prec_t prec);
// Same kernel vector, unnormalized, at full precision.
std::vector<BigFloat> real_eigenvector_big(const RationalMatrix& g, const BigComplex& r,
                                           bool transpose, BigFloat::prec_t prec);

}  // namespace limitset
