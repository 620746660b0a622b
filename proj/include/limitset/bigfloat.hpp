#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>
#include <utility>

namespace limitset {

// Value-semantic MPFR float carrying its own precision. Binary operations
// round to the larger of the operand precisions, so a computation seeded at
// precision P stays at P without any process-global default.
class BigFloat {
 public:
  using prec_t = mpfr_prec_t;

  explicit BigFloat(prec_t prec = 64);
  BigFloat(double v, prec_t prec);
  BigFloat(const mpz_class& v, prec_t prec);
  BigFloat(const mpq_class& v, prec_t prec);

  BigFloat(const BigFloat& o);
  BigFloat(BigFloat&& o) noexcept;
  BigFloat& operator=(const BigFloat& o);
  BigFloat& operator=(BigFloat&& o) noexcept;
  ~BigFloat();

  prec_t precision() const { return mpfr_get_prec(v_); }
  // Rounds in place to a new precision.
  void set_precision(prec_t prec);

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  // log2|x| without overflow; -inf for zero.
  double log2_abs() const;
  // Natural log of |x| returned as a double (exponent range safe).
  double log_abs() const;
  int sign() const { return mpfr_sgn(v_); }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }
  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  std::string to_string(int digits = 20) const;

  BigFloat& operator+=(const BigFloat& o);
  BigFloat& operator-=(const BigFloat& o);
  BigFloat& operator*=(const BigFloat& o);
  BigFloat& operator/=(const BigFloat& o);
  BigFloat operator-() const;

  friend BigFloat operator+(BigFloat a, const BigFloat& b) { return a += b; }
  friend BigFloat operator-(BigFloat a, const BigFloat& b) { return a -= b; }
  friend BigFloat operator*(BigFloat a, const BigFloat& b) { return a *= b; }
  friend BigFloat operator/(BigFloat a, const BigFloat& b) { return a /= b; }

  friend int compare(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_); }
  friend bool operator<(const BigFloat& a, const BigFloat& b) { return compare(a, b) < 0; }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return compare(a, b) > 0; }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return compare(a, b) <= 0; }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) { return compare(a, b) >= 0; }

  friend BigFloat abs(const BigFloat& a);
  friend BigFloat sqrt(const BigFloat& a);
  friend BigFloat log(const BigFloat& a);
  friend BigFloat hypot(const BigFloat& a, const BigFloat& b);
  // x * 2^e
  friend BigFloat ldexp(const BigFloat& a, long e);

  mpfr_srcptr raw() const { return v_; }
  mpfr_ptr raw() { return v_; }

 private:
  mpfr_t v_;
  bool live_ = false;
};

// Complex number over BigFloat; just enough for polynomial root iteration.
struct BigComplex {
  BigFloat re;
  BigFloat im;

  explicit BigComplex(BigFloat::prec_t prec) : re(prec), im(prec) {}
  BigComplex(BigFloat r, BigFloat i) : re(std::move(r)), im(std::move(i)) {}

  BigComplex& operator+=(const BigComplex& o);
  BigComplex& operator-=(const BigComplex& o);
  BigComplex& operator*=(const BigComplex& o);
  BigComplex& operator/=(const BigComplex& o);
  friend BigComplex operator+(BigComplex a, const BigComplex& b) { return a += b; }
  friend BigComplex operator-(BigComplex a, const BigComplex& b) { return a -= b; }
  friend BigComplex operator*(BigComplex a, const BigComplex& b) { return a *= b; }
  friend BigComplex operator/(BigComplex a, const BigComplex& b) { return a /= b; }

  BigFloat modulus() const { return hypot(re, im); }
};

}  // namespace limitset
