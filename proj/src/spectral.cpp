#include "limitset/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "limitset/config.hpp"
#include "limitset/errors.hpp"

namespace limitset {

// ------------------------------------------------------------------ AVector

double AVector::norm() const {
  double s = 0;
  for (double x : v_) s += x * x;
  return std::sqrt(s);
}

double AVector::l1() const {
  double s = 0;
  for (double x : v_) s += std::fabs(x);
  return s;
}

bool AVector::is_zero() const {
  return std::all_of(v_.begin(), v_.end(), [](double x) { return x == 0.0; });
}

bool AVector::satisfies_invariants() const {
  const auto& tol = tolerances();
  double sum = 0;
  for (std::size_t i = 0; i < v_.size(); ++i) {
    sum += v_[i];
    if (i + 1 < v_.size() && v_[i + 1] > v_[i] + tol.sort) return false;
  }
  return std::fabs(sum) <= tol.sum * std::max(1.0, norm());
}

AVector AVector::scaled(double s) const {
  std::vector<double> w = v_;
  for (double& x : w) x *= s;
  return AVector(std::move(w));
}

AVector operator+(const AVector& a, const AVector& b) {
  if (a.n() != b.n()) throw DimensionError("AVector dimension mismatch");
  std::vector<double> w(a.v_.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = a.v_[i] + b.v_[i];
  return AVector(std::move(w));
}

AVector operator-(const AVector& a, const AVector& b) {
  if (a.n() != b.n()) throw DimensionError("AVector dimension mismatch");
  std::vector<double> w(a.v_.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = a.v_[i] - b.v_[i];
  return AVector(std::move(w));
}

double root_value(const AVector& v, int i, int j) {
  if (i < 1 || j > v.n() || i >= j) throw DomainError("root indices must satisfy 1 <= i < j <= n");
  return v[i - 1] - v[j - 1];
}

AVector opposition_involution(const AVector& v) {
  std::vector<double> w(v.values().rbegin(), v.values().rend());
  for (double& x : w) x = -x;
  return AVector(std::move(w));
}

namespace {

// Sorts descending and removes the mean, which is zero up to rounding for
// unimodular input.
AVector chamber_point(std::vector<double> w) {
  std::sort(w.begin(), w.end(), std::greater<>());
  double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(w.size());
  for (double& x : w) x -= mean;
  return AVector(std::move(w));
}

double log2_frobenius(const std::vector<mpz_class>& a) {
  mpz_class s = 0;
  for (const auto& x : a) s += x * x;
  if (s == 0) return 0.0;
  long e = 0;
  double m = mpz_get_d_2exp(&e, s.get_mpz_t());
  return 0.5 * (std::log2(m) + static_cast<double>(e));
}

// Eigenvalues of a symmetric matrix by cyclic Jacobi at fixed precision,
// using the relative-accuracy skip rule.
std::vector<BigFloat> big_jacobi_eigenvalues(std::vector<BigFloat> a, int n, BigFloat::prec_t prec) {
  auto at = [&](int i, int j) -> BigFloat& { return a[static_cast<std::size_t>(i) * n + j]; };
  const BigFloat one(1.0, prec), two(2.0, prec);
  const BigFloat eps = ldexp(one, -static_cast<long>(prec) + 8);
  bool converged = false;
  for (int sweep = 0; sweep < 100 && !converged; ++sweep) {
    converged = true;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (at(p, q).is_zero()) continue;
        BigFloat bound = eps * sqrt(abs(at(p, p) * at(q, q)));
        if (abs(at(p, q)) <= bound) {
          at(p, q) = BigFloat(prec);
          at(q, p) = BigFloat(prec);
          continue;
        }
        converged = false;
        BigFloat theta = (at(q, q) - at(p, p)) / (two * at(p, q));
        BigFloat t = one / (abs(theta) + sqrt(one + theta * theta));
        if (theta.sign() < 0) t = -t;
        BigFloat c = one / sqrt(one + t * t);
        BigFloat s = t * c;
        BigFloat apq = at(p, q);
        at(p, p) -= t * apq;
        at(q, q) += t * apq;
        at(p, q) = BigFloat(prec);
        at(q, p) = BigFloat(prec);
        for (int r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          BigFloat arp = at(r, p), arq = at(r, q);
          BigFloat np = c * arp - s * arq;
          BigFloat nq = s * arp + c * arq;
          at(r, p) = np;
          at(p, r) = np;
          at(r, q) = nq;
          at(q, r) = nq;
        }
      }
  }
  if (!converged) throw ConvergenceError("extended-precision Jacobi did not converge");
  std::vector<BigFloat> ev;
  for (int i = 0; i < n; ++i) ev.push_back(at(i, i));
  return ev;
}

// Natural logs of the singular values of N / d, N integer rows x cols
// (row-major). log2_cond bounds log2 of the condition number.
std::vector<double> log_singular_values(const std::vector<mpz_class>& num, int rows, int cols,
                                        const mpz_class& den, double log2_cond) {
  const auto prec = static_cast<BigFloat::prec_t>(
      std::max(128.0, 2.0 * std::ceil(std::max(0.0, log2_cond)) + 96.0));
  std::vector<BigFloat> s;
  s.reserve(static_cast<std::size_t>(cols) * cols);
  mpz_class acc;
  for (int i = 0; i < cols; ++i)
    for (int j = 0; j < cols; ++j) {
      acc = 0;
      for (int k = 0; k < rows; ++k)
        mpz_addmul(acc.get_mpz_t(), num[static_cast<std::size_t>(k) * cols + i].get_mpz_t(),
                   num[static_cast<std::size_t>(k) * cols + j].get_mpz_t());
      s.emplace_back(acc, prec);
    }
  std::vector<BigFloat> ev = big_jacobi_eigenvalues(std::move(s), cols, prec);
  const double log_den = den == 1 ? 0.0 : BigFloat(den, 64).log_abs();
  std::vector<double> out;
  for (const auto& e : ev) {
    if (e.sign() <= 0) throw ConvergenceError("singular value underflow; matrix numerically singular");
    out.push_back(0.5 * e.log_abs() - log_den);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::vector<mpz_class> numerators(const RationalMatrix& g) {
  const int n = g.n();
  std::vector<mpz_class> a(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i) * n + j] = g.numerator(i, j);
  return a;
}

double log2_condition(const RationalMatrix& g) {
  const RationalMatrix inv = g.inverse();
  const double dg = g.denominator() == 1 ? 0.0 : BigFloat(g.denominator(), 64).log2_abs();
  const double di = inv.denominator() == 1 ? 0.0 : BigFloat(inv.denominator(), 64).log2_abs();
  return (log2_frobenius(numerators(g)) - dg) + (log2_frobenius(numerators(inv)) - di);
}

}  // namespace

AVector cartan_projection(const RationalMatrix& g) {
  return chamber_point(
      log_singular_values(numerators(g), g.n(), g.n(), g.denominator(), log2_condition(g)));
}

AVector cartan_projection(const RealMatrix& g) {
  if (g.rows() != g.cols()) throw DimensionError("Cartan projection of a non-square matrix");
  SymEigen e = jacobi_eigen(g.transpose() * g);
  std::vector<double> w;
  for (double x : e.values) {
    if (!(x > 0.0)) throw ConvergenceError("singular value underflow in double precision");
    w.push_back(0.5 * std::log(x));
  }
  return chamber_point(std::move(w));
}

double operator_norm(const RealMatrix& m) {
  SymEigen e = jacobi_eigen(m.transpose() * m);
  return std::sqrt(std::max(0.0, e.values.front()));
}

double log_operator_norm(const QMatrix& m) {
  mpz_class den = 1;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), m(i, j).get_den_mpz_t());
  std::vector<mpz_class> num(static_cast<std::size_t>(m.rows()) * m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      mpq_class x = m(i, j) * den;
      num[static_cast<std::size_t>(i) * m.cols() + j] = x.get_num();
    }
  // Only the top singular value is needed; precision just has to resolve it.
  const double bits = log2_frobenius(num);
  if (bits == 0.0 && std::all_of(num.begin(), num.end(), [](const mpz_class& x) { return x == 0; }))
    throw DomainError("operator norm of the zero matrix has no logarithm");
  std::vector<BigFloat> s;
  const BigFloat::prec_t prec = 160;
  mpz_class acc;
  const int c = m.cols();
  for (int i = 0; i < c; ++i)
    for (int j = 0; j < c; ++j) {
      acc = 0;
      for (int k = 0; k < m.rows(); ++k)
        mpz_addmul(acc.get_mpz_t(), num[static_cast<std::size_t>(k) * c + i].get_mpz_t(),
                   num[static_cast<std::size_t>(k) * c + j].get_mpz_t());
      s.emplace_back(acc, prec);
    }
  std::vector<BigFloat> ev = big_jacobi_eigenvalues(std::move(s), c, prec);
  auto top = std::max_element(ev.begin(), ev.end());
  return 0.5 * top->log_abs() - (den == 1 ? 0.0 : BigFloat(den, 64).log_abs());
}

double log_operator_norm(const RationalMatrix& m) { return log_operator_norm(m.to_qmatrix()); }

// ------------------------------------------------------------------ roots

namespace {

std::size_t coefficient_bits(const Polynomial& p) {
  std::size_t bits = 0;
  for (const auto& c : p.coefficients()) {
    bits = std::max(bits, mpz_sizeinbase(c.get_num_mpz_t(), 2));
    bits = std::max(bits, mpz_sizeinbase(c.get_den_mpz_t(), 2));
  }
  return bits;
}

BigComplex eval_with_derivative(const std::vector<BigFloat>& c, const BigComplex& z,
                                BigComplex& deriv) {
  const auto prec = z.re.precision();
  BigComplex v(prec), d(prec);
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    d = d * z + v;
    v = v * z;
    v.re += *it;
  }
  deriv = std::move(d);
  return v;
}

// Aberth-Ehrlich on a squarefree polynomial, Newton-polygon starting radii.
std::vector<BigComplex> aberth(const Polynomial& p, BigFloat::prec_t prec) {
  const int d = p.degree();
  std::vector<BigFloat> c;
  const Polynomial pm = p.monic();
  for (const auto& x : pm.coefficients()) c.emplace_back(x, prec);
  std::vector<BigComplex> z;
  if (d == 1) {
    z.emplace_back(-c[0], BigFloat(prec));
    return z;
  }

  // Upper hull of (k, log2|c_k|).
  std::vector<double> lg(d + 1);
  for (int k = 0; k <= d; ++k) lg[k] = c[k].is_zero() ? -1e300 : c[k].log2_abs();
  std::vector<int> hull;
  for (int k = 0; k <= d; ++k) {
    if (lg[k] <= -1e299) continue;
    while (hull.size() >= 2) {
      int a = hull[hull.size() - 2], b = hull.back();
      double cross = (lg[b] - lg[a]) * (k - a) - (lg[k] - lg[a]) * (b - a);
      if (cross <= 0) hull.pop_back();
      else break;
    }
    hull.push_back(k);
  }
  const double two_pi = 6.283185307179586;
  int placed = 0;
  for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
    const int i = hull[e], j = hull[e + 1];
    const double log2r = (lg[i] - lg[j]) / (j - i);
    const long ip = static_cast<long>(std::floor(log2r));
    const double frac = std::exp2(log2r - static_cast<double>(ip));
    for (int m = 0; m < j - i; ++m) {
      const double ang = two_pi * m / (j - i) + two_pi * placed / d + 0.4;
      ++placed;
      z.emplace_back(ldexp(BigFloat(frac * std::cos(ang), prec), ip),
                     ldexp(BigFloat(frac * std::sin(ang), prec), ip));
    }
  }

  const BigFloat one(1.0, prec);
  const long stop_exp = -static_cast<long>(prec) + 12;
  std::vector<bool> done(d, false);
  for (int iter = 0; iter < 4000; ++iter) {
    bool all_done = true;
    for (int i = 0; i < d; ++i) {
      if (done[i]) continue;
      BigComplex dp(prec);
      BigComplex v = eval_with_derivative(c, z[i], dp);
      if (v.re.is_zero() && v.im.is_zero()) {
        done[i] = true;
        continue;
      }
      all_done = false;
      if (dp.re.is_zero() && dp.im.is_zero()) {
        z[i].re += ldexp(one, std::max<long>(z[i].modulus().is_zero() ? -20 : static_cast<long>(z[i].modulus().log2_abs()) - 20, stop_exp));
        continue;
      }
      BigComplex ratio = v / dp;
      BigComplex sum(prec);
      for (int j = 0; j < d; ++j) {
        if (j == i) continue;
        BigComplex diff = z[i] - z[j];
        if (diff.re.is_zero() && diff.im.is_zero()) continue;
        sum += BigComplex(one, BigFloat(prec)) / diff;
      }
      BigComplex denom = BigComplex(one, BigFloat(prec)) - ratio * sum;
      BigComplex w = (denom.re.is_zero() && denom.im.is_zero()) ? ratio : ratio / denom;
      z[i] -= w;
      const BigFloat wm = w.modulus();
      const BigFloat zm = z[i].modulus();
      if (wm.is_zero() || (!zm.is_zero() && wm <= ldexp(zm, stop_exp))) done[i] = true;
    }
    if (all_done || std::all_of(done.begin(), done.end(), [](bool b) { return b; })) return z;
  }
  throw ConvergenceError("polynomial root finder did not converge");
}

// Newton step in real arithmetic for a real root.
void polish_real(const Polynomial& p, BigFloat& x) {
  Polynomial dp = p.derivative();
  for (int it = 0; it < 3; ++it) {
    BigFloat fx = p(x), dfx = dp(x);
    if (fx.is_zero() || dfx.is_zero()) return;
    x -= fx / dfx;
  }
}

}  // namespace

std::vector<double> Spectrum::moduli() const {
  std::vector<double> out;
  for (const auto& r : roots)
    for (int k = 0; k < r.multiplicity; ++k) out.push_back(std::exp(r.log_modulus));
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

Spectrum spectrum(const Polynomial& p) {
  if (p.degree() < 1) throw DomainError("spectrum of a constant polynomial");
  Spectrum s;
  s.poly = p.monic();
  s.precision = static_cast<BigFloat::prec_t>(256 + 2 * coefficient_bits(s.poly) + 32 * p.degree());
  auto factors = squarefree_factorization(s.poly);
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const Polynomial& a = factors[i];
    if (a.degree() < 1) continue;
    const int mult = static_cast<int>(i) + 1;
    std::vector<BigComplex> z = aberth(a, s.precision);
    const int real_count = count_distinct_real_roots(a);
    // The real_count roots closest to the axis (relative to modulus) are real.
    std::vector<int> order(z.size());
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> rel(z.size());
    for (std::size_t k = 0; k < z.size(); ++k) {
      double im = z[k].im.is_zero() ? -1e300 : z[k].im.log2_abs();
      double mod = z[k].modulus().log2_abs();
      rel[k] = im - mod;
    }
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return rel[x] < rel[y]; });
    std::vector<bool> is_real(z.size(), false);
    for (int k = 0; k < real_count; ++k) is_real[order[k]] = true;
    for (std::size_t k = 0; k < z.size(); ++k) {
      Root r{z[k], mult, is_real[k], 0.0};
      if (r.real) {
        r.z.im = BigFloat(s.precision);
        polish_real(a, r.z.re);
      }
      r.log_modulus = r.z.modulus().log_abs();
      s.roots.push_back(std::move(r));
    }
  }
  return s;
}

Spectrum spectrum(const RationalMatrix& g) { return spectrum(char_poly(g).poly); }

AVector jordan_projection(const RationalMatrix& g) {
  CharPoly cp = char_poly(g);
  if (is_cyclotomic_product(cp.poly)) return AVector(std::vector<double>(g.n(), 0.0));
  Spectrum s = spectrum(cp.poly);
  std::vector<double> w;
  for (const auto& r : s.roots)
    for (int k = 0; k < r.multiplicity; ++k) w.push_back(r.log_modulus);
  return chamber_point(std::move(w));
}

AVector jordan_projection(const RealMatrix& g) {
  if (g.rows() != g.cols()) throw DimensionError("Jordan projection of a non-square matrix");
  QMatrix q(g.rows(), g.cols());
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j) q(i, j) = mpq_class(g(i, j));
  Spectrum s = spectrum(char_poly(q).poly);
  std::vector<double> w;
  for (const auto& r : s.roots)
    for (int k = 0; k < r.multiplicity; ++k) w.push_back(r.log_modulus);
  return chamber_point(std::move(w));
}

bool is_loxodromic(const CharPoly& p) {
  const int n = p.degree();
  if (squarefree_part(p.poly).degree() != n) return false;
  if (count_distinct_real_roots(p.poly) != n) return false;
  return gcd(p.poly, p.poly.reflect()).degree() == 0;
}

bool is_loxodromic(const RationalMatrix& g) { return is_loxodromic(char_poly(g)); }

// ----------------------------------------------------------- classification

namespace {
bool conjugate_pair(const Root& a, const Root& b, BigFloat::prec_t prec) {
  if (a.real || b.real || a.multiplicity != b.multiplicity) return false;
  const BigFloat scale = ldexp(a.z.modulus(), -static_cast<long>(prec / 2));
  return abs(a.z.re - b.z.re) <= scale && abs(a.z.im + b.z.im) <= scale;
}
}  // namespace

const char* to_string(SpectralClass::Tag t) {
  switch (t) {
    case SpectralClass::Tag::Identity: return "Identity";
    case SpectralClass::Tag::FiniteOrderNontrivial: return "FiniteOrderNontrivial";
    case SpectralClass::Tag::Loxodromic: return "Loxodromic";
    case SpectralClass::Tag::SingularSemisimple: return "SingularSemisimple";
    case SpectralClass::Tag::Unipotent: return "Unipotent";
    case SpectralClass::Tag::ComplexSpectrum: return "ComplexSpectrum";
    case SpectralClass::Tag::Mixed: return "Mixed";
  }
  return "?";
}

SpectralClass classify(const RationalMatrix& g, long k_max) {
  using Tag = SpectralClass::Tag;
  const int n = g.n();
  SpectralClass out;
  out.order = finite_order(g, k_max);
  CharPoly cp = char_poly(g);
  if (n == 3) out.discriminant = cubic_discriminant(cp);
  const Polynomial q = squarefree_part(cp.poly);
  out.complex_spectrum = count_distinct_real_roots(q) < q.degree();
  out.semisimple = evaluate(q, g.to_qmatrix()).is_zero();
  out.jordan = jordan_projection(g);
  out.cartan = cartan_projection(g);
  if (is_cyclotomic_product(cp.poly)) {
    out.eigenvalue_moduli.assign(n, 1.0);
  } else {
    out.eigenvalue_moduli = spectrum(cp.poly).moduli();
  }

  // Walls of the Jordan projection, numerically, cross-checked against the
  // exact number of coincident moduli when that number is known.
  const double band = tolerances().wall * std::max(1.0, out.jordan.norm());
  for (int i = 1; i < n; ++i)
    if (simple_root(out.jordan, i) <= band) out.walls.push_back(i);

  const Polynomial unipotent_poly = [&] {
    Polynomial p({mpq_class(1)});
    for (int i = 0; i < n; ++i) p = p * Polynomial::linear_root(1);
    return p;
  }();

  if (out.order.kind == FiniteOrder::Kind::Finite) {
    out.tag = out.order.order == 1 ? Tag::Identity : Tag::FiniteOrderNontrivial;
    if (out.complex_spectrum) out.note = "finite order with non-real eigenvalues";
    return out;
  }
  if (cp.poly == unipotent_poly) {
    out.tag = Tag::Unipotent;
    return out;
  }
  if (out.complex_spectrum) {
    out.tag = Tag::ComplexSpectrum;
    // Conjugate pairs share a modulus exactly; any other near-coincidence
    // cannot be decided here.
    if (!is_cyclotomic_product(cp.poly)) {
      Spectrum s = spectrum(cp.poly);
      std::vector<double> logs;
      for (const auto& r : s.roots) logs.push_back(r.log_modulus);
      for (std::size_t a = 0; a < s.roots.size(); ++a)
        for (std::size_t b = a + 1; b < s.roots.size(); ++b) {
          const bool pair = conjugate_pair(s.roots[a], s.roots[b], s.precision);
          if (pair) continue;
          const double gap = std::fabs(logs[a] - logs[b]);
          if (gap > 0 && gap <= band)
            throw UnresolvedAtTolerance("eigenvalue moduli within the wall tolerance band");
        }
    }
    return out;
  }
  if (is_loxodromic(cp)) {
    if (!out.walls.empty())
      throw UnresolvedAtTolerance("distinct eigenvalue moduli within the wall tolerance band");
    out.tag = Tag::Loxodromic;
    return out;
  }
  // Real spectrum with coincident moduli: exact count of coincidences.
  const Polynomial shared = gcd(q, q.reflect());
  int distinct_moduli = q.degree() - shared.degree() / 2;
  int exact_walls = n - distinct_moduli;
  if (static_cast<int>(out.walls.size()) != exact_walls) {
    // Recompute walls as the exact_walls smallest gaps.
    std::vector<std::pair<double, int>> gaps;
    for (int i = 1; i < n; ++i) gaps.emplace_back(simple_root(out.jordan, i), i);
    std::sort(gaps.begin(), gaps.end());
    if (exact_walls < n - 1 && gaps[exact_walls].first <= band)
      throw UnresolvedAtTolerance("distinct eigenvalue moduli within the wall tolerance band");
    out.walls.clear();
    for (int k = 0; k < exact_walls; ++k) out.walls.push_back(gaps[k].second);
    std::sort(out.walls.begin(), out.walls.end());
  }
  if (out.semisimple && shared.degree() == 0) {
    out.tag = Tag::SingularSemisimple;
  } else {
    out.tag = Tag::Mixed;
    out.note = out.semisimple ? "semisimple; coincident moduli from eigenvalues of opposite sign"
                              : "not semisimple and not unipotent";
  }
  return out;
}

// ------------------------------------------------------------- eigenvectors

std::vector<BigFloat> real_eigenvector_big(const RationalMatrix& g, const BigComplex& r,
                                           bool transpose, BigFloat::prec_t prec) {
  const int n = g.n();
  std::vector<BigFloat> a;
  a.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      BigFloat v = transpose ? BigFloat(g.entry(j, i), prec) : BigFloat(g.entry(i, j), prec);
      if (i == j) v -= r.re;
      a.push_back(std::move(v));
    }
  auto at = [&](int i, int j) -> BigFloat& { return a[static_cast<std::size_t>(i) * n + j]; };
  // Gaussian elimination with full pivoting; the last pivot is the null one.
  std::vector<int> colperm(n);
  std::iota(colperm.begin(), colperm.end(), 0);
  for (int p = 0; p < n - 1; ++p) {
    int bi = p, bj = p;
    for (int i = p; i < n; ++i)
      for (int j = p; j < n; ++j)
        if (abs(at(i, j)) > abs(at(bi, bj))) {
          bi = i;
          bj = j;
        }
    if (at(bi, bj).is_zero()) throw ConvergenceError("eigenspace is not one-dimensional");
    if (bi != p)
      for (int j = 0; j < n; ++j) std::swap(at(p, j), at(bi, j));
    if (bj != p) {
      for (int i = 0; i < n; ++i) std::swap(at(i, p), at(i, bj));
      std::swap(colperm[p], colperm[bj]);
    }
    for (int i = p + 1; i < n; ++i) {
      if (at(i, p).is_zero()) continue;
      BigFloat f = at(i, p) / at(p, p);
      for (int j = p; j < n; ++j) at(i, j) -= f * at(p, j);
    }
  }
  std::vector<BigFloat> y(n, BigFloat(prec));
  y[n - 1] = BigFloat(1.0, prec);
  for (int i = n - 2; i >= 0; --i) {
    BigFloat s(prec);
    for (int j = i + 1; j < n; ++j) s += at(i, j) * y[j];
    y[i] = -s / at(i, i);
  }
  std::vector<BigFloat> x(n, BigFloat(prec));
  for (int k = 0; k < n; ++k) x[colperm[k]] = y[k];
  return x;
}

std::vector<double> real_eigenvector(const RationalMatrix& g, const BigComplex& r, bool transpose,
                                     BigFloat::prec_t prec) {
  const int n = g.n();
  std::vector<BigFloat> x = real_eigenvector_big(g, r, transpose, prec);
  BigFloat norm(prec);
  for (const auto& v : x) norm += v * v;
  norm = sqrt(norm);
  std::vector<double> out(n);
  int big = 0;
  for (int k = 0; k < n; ++k) {
    out[k] = (x[k] / norm).to_double();
    if (std::fabs(out[k]) > std::fabs(out[big])) big = k;
  }
  if (out[big] < 0)
    for (double& v : out) v = -v;
  return out;
}

InvariantPair complex_invariant_pair(const RationalMatrix& g) {
  if (g.n() != 3) throw DimensionError("complex_invariant_pair requires n = 3");
  CharPoly cp = char_poly(g);
  if (cubic_discriminant(cp) >= 0)
    throw DomainError("complex_invariant_pair requires a non-real eigenvalue pair");
  Spectrum s = spectrum(cp.poly);
  auto real_root = std::find_if(s.roots.begin(), s.roots.end(), [](const Root& r) { return r.real; });
  if (real_root == s.roots.end()) throw ConvergenceError("real eigenvalue not isolated");
  InvariantPair out;
  out.point = real_eigenvector(g, real_root->z, false, s.precision);
  out.line = real_eigenvector(g, real_root->z, true, s.precision);

  // Projective residuals: angle between v and g v (resp. phi and phi g).
  auto residual = [](const std::vector<double>& v, const std::vector<double>& w) {
    double nw = 0, dot = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      nw += w[i] * w[i];
      dot += v[i] * w[i];
    }
    nw = std::sqrt(nw);
    double sum = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      double d = w[i] / nw - (dot < 0 ? -v[i] : v[i]);
      sum += d * d;
    }
    return std::sqrt(sum);
  };
  const RealMatrix gr = RealMatrix::from_rational(g);
  out.point_residual = residual(out.point, limitset::apply(gr, out.point));
  out.line_residual = residual(out.line, limitset::apply(gr.transpose(), out.line));
  return out;
}

}  // namespace limitset
