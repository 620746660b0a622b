#include "limitset/bigfloat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

namespace limitset {

BigFloat::BigFloat(prec_t prec) {
  mpfr_init2(v_, prec);
  mpfr_set_zero(v_, 1);
  live_ = true;
}

BigFloat::BigFloat(double v, prec_t prec) : BigFloat(prec) { mpfr_set_d(v_, v, MPFR_RNDN); }

BigFloat::BigFloat(const mpz_class& v, prec_t prec) : BigFloat(prec) {
  mpfr_set_z(v_, v.get_mpz_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const mpq_class& v, prec_t prec) : BigFloat(prec) {
  mpfr_set_q(v_, v.get_mpq_t(), MPFR_RNDN);
}

BigFloat::BigFloat(const BigFloat& o) {
  mpfr_init2(v_, o.precision());
  mpfr_set(v_, o.v_, MPFR_RNDN);
  live_ = true;
}

BigFloat::BigFloat(BigFloat&& o) noexcept {
  // mpfr_swap requires an initialised target; steal the limbs instead.
  *v_ = *o.v_;
  live_ = o.live_;
  o.live_ = false;
}

BigFloat& BigFloat::operator=(const BigFloat& o) {
  if (this != &o) {
    if (!live_) {
      mpfr_init2(v_, o.precision());
      live_ = true;
    } else if (precision() != o.precision()) {
      mpfr_set_prec(v_, o.precision());
    }
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  return *this;
}

BigFloat& BigFloat::operator=(BigFloat&& o) noexcept {
  if (this != &o) {
    if (live_) mpfr_clear(v_);
    *v_ = *o.v_;
    live_ = o.live_;
    o.live_ = false;
  }
  return *this;
}

BigFloat::~BigFloat() {
  if (live_) mpfr_clear(v_);
}

void BigFloat::set_precision(prec_t prec) { mpfr_prec_round(v_, prec, MPFR_RNDN); }

double BigFloat::log2_abs() const {
  if (is_zero()) return -std::numeric_limits<double>::infinity();
  long exp = 0;
  double mant = mpfr_get_d_2exp(&exp, v_, MPFR_RNDN);
  return std::log2(std::fabs(mant)) + static_cast<double>(exp);
}

double BigFloat::log_abs() const { return log2_abs() * std::log(2.0); }

std::string BigFloat::to_string(int digits) const {
  char* buf = nullptr;
  mpfr_asprintf(&buf, "%.*Rg", digits, v_);
  std::string s(buf);
  mpfr_free_str(buf);
  return s;
}

namespace {
BigFloat::prec_t joint(const BigFloat& a, const BigFloat& b) {
  return std::max(a.precision(), b.precision());
}
}  // namespace

BigFloat& BigFloat::operator+=(const BigFloat& o) {
  if (o.precision() > precision()) set_precision(o.precision());
  mpfr_add(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator-=(const BigFloat& o) {
  if (o.precision() > precision()) set_precision(o.precision());
  mpfr_sub(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator*=(const BigFloat& o) {
  if (o.precision() > precision()) set_precision(o.precision());
  mpfr_mul(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

BigFloat& BigFloat::operator/=(const BigFloat& o) {
  if (o.precision() > precision()) set_precision(o.precision());
  mpfr_div(v_, v_, o.v_, MPFR_RNDN);
  return *this;
}

BigFloat BigFloat::operator-() const {
  BigFloat r(precision());
  mpfr_neg(r.v_, v_, MPFR_RNDN);
  return r;
}

BigFloat abs(const BigFloat& a) {
  BigFloat r(a.precision());
  mpfr_abs(r.v_, a.v_, MPFR_RNDN);
  return r;
}

BigFloat sqrt(const BigFloat& a) {
  BigFloat r(a.precision());
  mpfr_sqrt(r.v_, a.v_, MPFR_RNDN);
  return r;
}

BigFloat log(const BigFloat& a) {
  BigFloat r(a.precision());
  mpfr_log(r.v_, a.v_, MPFR_RNDN);
  return r;
}

BigFloat hypot(const BigFloat& a, const BigFloat& b) {
  BigFloat r(joint(a, b));
  mpfr_hypot(r.v_, a.v_, b.v_, MPFR_RNDN);
  return r;
}

BigFloat ldexp(const BigFloat& a, long e) {
  BigFloat r(a.precision());
  mpfr_mul_2si(r.v_, a.v_, e, MPFR_RNDN);
  return r;
}

BigComplex& BigComplex::operator+=(const BigComplex& o) {
  re += o.re;
  im += o.im;
  return *this;
}

BigComplex& BigComplex::operator-=(const BigComplex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

BigComplex& BigComplex::operator*=(const BigComplex& o) {
  BigFloat r = re * o.re - im * o.im;
  BigFloat i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

BigComplex& BigComplex::operator/=(const BigComplex& o) {
  // Smith's algorithm keeps the intermediate magnitudes bounded.
  if (abs(o.re) >= abs(o.im)) {
    BigFloat t = o.im / o.re;
    BigFloat d = o.re + o.im * t;
    BigFloat r = (re + im * t) / d;
    BigFloat i = (im - re * t) / d;
    re = std::move(r);
    im = std::move(i);
  } else {
    BigFloat t = o.re / o.im;
    BigFloat d = o.re * t + o.im;
    BigFloat r = (re * t + im) / d;
    BigFloat i = (im * t - re) / d;
    re = std::move(r);
    im = std::move(i);
  }
  return *this;
}

}  // namespace limitset
