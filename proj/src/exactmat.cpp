#include "limitset/exactmat.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "limitset/errors.hpp"

namespace limitset {

namespace {

// Fraction-free (Bareiss) determinant of a k x k integer matrix, row-major.
mpz_class bareiss_det(std::vector<mpz_class> m, int k) {
  if (k == 0) return 1;
  int sign = 1;
  mpz_class prev = 1;
  auto at = [&](int i, int j) -> mpz_class& { return m[static_cast<std::size_t>(i) * k + j]; };
  for (int p = 0; p < k - 1; ++p) {
    if (at(p, p) == 0) {
      int swap = -1;
      for (int r = p + 1; r < k; ++r)
        if (at(r, p) != 0) {
          swap = r;
          break;
        }
      if (swap < 0) return 0;
      for (int j = 0; j < k; ++j) std::swap(at(p, j), at(swap, j));
      sign = -sign;
    }
    for (int i = p + 1; i < k; ++i) {
      for (int j = p + 1; j < k; ++j) {
        mpz_class t = at(i, j) * at(p, p) - at(i, p) * at(p, j);
        mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
        at(i, j) = t;
      }
      at(i, p) = 0;
    }
    prev = at(p, p);
  }
  mpz_class d = at(k - 1, k - 1);
  return sign > 0 ? d : mpz_class(-d);
}

mpz_class integer_minor(const std::vector<mpz_class>& a, int n, const std::vector<int>& rows,
                        const std::vector<int>& cols) {
  const int k = static_cast<int>(rows.size());
  std::vector<mpz_class> sub(static_cast<std::size_t>(k) * k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j)
      sub[static_cast<std::size_t>(i) * k + j] = a[static_cast<std::size_t>(rows[i]) * n + cols[j]];
  return bareiss_det(std::move(sub), k);
}

void hash_combine(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

std::size_t hash_mpz(const mpz_class& z) {
  std::size_t h = static_cast<std::size_t>(mpz_sgn(z.get_mpz_t()) + 1);
  const std::size_t limbs = mpz_size(z.get_mpz_t());
  for (std::size_t i = 0; i < limbs; ++i)
    hash_combine(h, static_cast<std::size_t>(mpz_getlimbn(z.get_mpz_t(), i)));
  return h;
}

}  // namespace

// ---------------------------------------------------------------- QMatrix

QMatrix::QMatrix(int rows, int cols)
    : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, mpq_class(0)) {}

QMatrix QMatrix::identity(int n) {
  QMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

QMatrix QMatrix::transpose() const {
  QMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

bool QMatrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](const mpq_class& x) { return x == 0; });
}

mpq_class QMatrix::trace() const {
  mpq_class t(0);
  for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

mpq_class QMatrix::determinant() const {
  if (rows_ != cols_) throw DimensionError("determinant of a non-square matrix");
  QMatrix m = *this;
  mpq_class det(1);
  for (int p = 0; p < rows_; ++p) {
    int piv = -1;
    for (int r = p; r < rows_; ++r)
      if (m(r, p) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) return 0;
    if (piv != p) {
      for (int j = 0; j < cols_; ++j) std::swap(m(p, j), m(piv, j));
      det = -det;
    }
    det *= m(p, p);
    for (int r = p + 1; r < rows_; ++r) {
      if (m(r, p) == 0) continue;
      mpq_class f = m(r, p) / m(p, p);
      for (int j = p; j < cols_; ++j) m(r, j) -= f * m(p, j);
    }
  }
  return det;
}

namespace {
// Reduced row echelon form in place; returns pivot columns.
std::vector<int> rref(QMatrix& m) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
    int piv = -1;
    for (int r = row; r < m.rows(); ++r)
      if (m(r, col) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    if (piv != row)
      for (int j = 0; j < m.cols(); ++j) std::swap(m(row, j), m(piv, j));
    mpq_class inv = 1 / m(row, col);
    for (int j = col; j < m.cols(); ++j) m(row, j) *= inv;
    for (int r = 0; r < m.rows(); ++r) {
      if (r == row || m(r, col) == 0) continue;
      mpq_class f = m(r, col);
      for (int j = col; j < m.cols(); ++j) m(r, j) -= f * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}
}  // namespace

int QMatrix::rank() const {
  QMatrix m = *this;
  return static_cast<int>(rref(m).size());
}

std::vector<std::vector<mpq_class>> QMatrix::nullspace() const {
  QMatrix m = *this;
  std::vector<int> pivots = rref(m);
  std::vector<bool> is_pivot(cols_, false);
  for (int p : pivots) is_pivot[p] = true;
  std::vector<std::vector<mpq_class>> basis;
  for (int free = 0; free < cols_; ++free) {
    if (is_pivot[free]) continue;
    std::vector<mpq_class> v(cols_, mpq_class(0));
    v[free] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -m(static_cast<int>(r), free);
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<QMatrix> QMatrix::inverse() const {
  if (rows_ != cols_) throw DimensionError("inverse of a non-square matrix");
  const int n = rows_;
  QMatrix aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = (*this)(i, j);
    aug(i, n + i) = 1;
  }
  std::vector<int> pivots = rref(aug);
  if (static_cast<int>(pivots.size()) < n || pivots[n - 1] != n - 1) return std::nullopt;
  QMatrix inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

QMatrix& QMatrix::operator+=(const QMatrix& o) {
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] += o.a_[k];
  return *this;
}

QMatrix& QMatrix::operator-=(const QMatrix& o) {
  for (std::size_t k = 0; k < a_.size(); ++k) a_[k] -= o.a_[k];
  return *this;
}

QMatrix& QMatrix::operator*=(const mpq_class& s) {
  for (auto& x : a_) x *= s;
  return *this;
}

QMatrix operator*(const QMatrix& a, const QMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
  QMatrix c(a.rows_, b.cols_);
  for (int i = 0; i < a.rows_; ++i)
    for (int k = 0; k < a.cols_; ++k) {
      const mpq_class& aik = a(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

std::vector<mpq_class> QMatrix::apply(const std::vector<mpq_class>& v) const {
  std::vector<mpq_class> out(rows_, mpq_class(0));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

// --------------------------------------------------------- RationalMatrix

RationalMatrix::RationalMatrix(int n, std::vector<mpz_class> num, mpz_class den)
    : n_(n), num_(std::move(num)), den_(std::move(den)) {
  normalize();
}

void RationalMatrix::normalize() {
  if (den_ < 0) {
    den_ = -den_;
    for (auto& x : num_) x = -x;
  }
  if (den_ == 1) return;
  mpz_class g = den_;
  for (const auto& x : num_) {
    if (g == 1) break;
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
  }
  if (g == 1) return;
  for (auto& x : num_) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), g.get_mpz_t());
  mpz_divexact(den_.get_mpz_t(), den_.get_mpz_t(), g.get_mpz_t());
}

RationalMatrix RationalMatrix::from_qmatrix(const QMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("matrix must be square");
  if (m.rows() < 2) throw DimensionError("matrix dimension must be at least 2");
  const int n = m.rows();
  mpz_class den = 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), m(i, j).get_den_mpz_t());
  std::vector<mpz_class> num(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      mpq_class scaled = m(i, j) * den;
      num[static_cast<std::size_t>(i) * n + j] = scaled.get_num();
    }
  RationalMatrix r(n, std::move(num), den);
  if (m.determinant() != 1)
    throw DomainError("matrix is not unimodular (det = " + m.determinant().get_str() + ")");
  return r;
}

RationalMatrix RationalMatrix::from_rows(const std::vector<std::vector<mpq_class>>& rows) {
  const int n = static_cast<int>(rows.size());
  if (n < 2) throw DimensionError("matrix dimension must be at least 2");
  QMatrix m(n, n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) throw DimensionError("matrix rows must have length n");
    for (int j = 0; j < n; ++j) {
      m(i, j) = rows[i][j];
      m(i, j).canonicalize();
    }
  }
  return from_qmatrix(m);
}

RationalMatrix RationalMatrix::identity(int n) {
  if (n < 2) throw DimensionError("matrix dimension must be at least 2");
  std::vector<mpz_class> num(static_cast<std::size_t>(n) * n, mpz_class(0));
  for (int i = 0; i < n; ++i) num[static_cast<std::size_t>(i) * n + i] = 1;
  return RationalMatrix(n, std::move(num), 1);
}

RationalMatrix RationalMatrix::diagonal(const std::vector<mpq_class>& d) {
  const int n = static_cast<int>(d.size());
  std::vector<std::vector<mpq_class>> rows(n, std::vector<mpq_class>(n, mpq_class(0)));
  for (int i = 0; i < n; ++i) rows[i][i] = d[i];
  return from_rows(rows);
}

mpq_class RationalMatrix::entry(int i, int j) const {
  mpq_class q(numerator(i, j), den_);
  q.canonicalize();
  return q;
}

bool RationalMatrix::is_identity() const {
  if (den_ != 1) return false;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (numerator(i, j) != (i == j ? 1 : 0)) return false;
  return true;
}

RationalMatrix RationalMatrix::inverse() const {
  // g = N/d with det N = d^n, so g^-1 = adj(N) / d^(n-1).
  std::vector<mpz_class> adj(num_.size());
  std::vector<int> all(n_);
  std::iota(all.begin(), all.end(), 0);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      std::vector<int> rows, cols;
      for (int r : all)
        if (r != j) rows.push_back(r);
      for (int c : all)
        if (c != i) cols.push_back(c);
      mpz_class minor = integer_minor(num_, n_, rows, cols);
      adj[static_cast<std::size_t>(i) * n_ + j] = ((i + j) % 2 == 0) ? minor : mpz_class(-minor);
    }
  mpz_class den;
  mpz_pow_ui(den.get_mpz_t(), den_.get_mpz_t(), static_cast<unsigned long>(n_ - 1));
  return RationalMatrix(n_, std::move(adj), den);
}

RationalMatrix RationalMatrix::transpose() const {
  std::vector<mpz_class> t(num_.size());
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) t[static_cast<std::size_t>(j) * n_ + i] = numerator(i, j);
  return RationalMatrix(n_, std::move(t), den_);
}

QMatrix RationalMatrix::to_qmatrix() const {
  QMatrix m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = entry(i, j);
  return m;
}

mpq_class RationalMatrix::trace() const {
  mpz_class t = 0;
  for (int i = 0; i < n_; ++i) t += numerator(i, i);
  mpq_class q(t, den_);
  q.canonicalize();
  return q;
}

mpq_class RationalMatrix::frobenius_sq() const {
  mpz_class s = 0;
  for (const auto& x : num_) s += x * x;
  mpq_class q(s, den_ * den_);
  q.canonicalize();
  return q;
}

double RationalMatrix::log2_max_entry() const {
  std::size_t bits = 0;
  for (const auto& x : num_)
    if (x != 0) bits = std::max(bits, mpz_sizeinbase(x.get_mpz_t(), 2));
  double den_bits = den_ == 1 ? 0.0 : static_cast<double>(mpz_sizeinbase(den_.get_mpz_t(), 2) - 1);
  return static_cast<double>(bits) - den_bits;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.n_ != b.n_) throw DimensionError("matrix product dimension mismatch");
  const int n = a.n_;
  std::vector<mpz_class> c(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      mpz_class& acc = c[static_cast<std::size_t>(i) * n + j];
      acc = 0;
      for (int k = 0; k < n; ++k)
        mpz_addmul(acc.get_mpz_t(), a.numerator(i, k).get_mpz_t(), b.numerator(k, j).get_mpz_t());
    }
  if (a.den_ == 1 && b.den_ == 1) {
    RationalMatrix r;
    r.n_ = n;
    r.num_ = std::move(c);
    r.den_ = 1;
    return r;
  }
  return RationalMatrix(n, std::move(c), a.den_ * b.den_);
}

std::size_t RationalMatrix::hash() const {
  std::size_t h = static_cast<std::size_t>(n_);
  hash_combine(h, hash_mpz(den_));
  for (const auto& x : num_) hash_combine(h, hash_mpz(x));
  return h;
}

std::vector<std::vector<std::string>> RationalMatrix::to_strings() const {
  std::vector<std::vector<std::string>> out(n_, std::vector<std::string>(n_));
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) out[i][j] = entry(i, j).get_str();
  return out;
}

std::string RationalMatrix::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < n_; ++i) {
    os << (i ? ", [" : "[");
    for (int j = 0; j < n_; ++j) os << (j ? ", " : "") << entry(i, j).get_str();
    os << "]";
  }
  os << "]";
  return os.str();
}

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) { return a * b; }

RationalMatrix power(const RationalMatrix& g, long k) {
  RationalMatrix base = k < 0 ? g.inverse() : g;
  unsigned long e = static_cast<unsigned long>(k < 0 ? -k : k);
  RationalMatrix result = RationalMatrix::identity(g.n());
  while (e > 0) {
    if (e & 1UL) result = result * base;
    e >>= 1;
    if (e > 0) base = base * base;
  }
  return result;
}

RationalMatrix conjugate(const RationalMatrix& g, const RationalMatrix& h) {
  return h * g * h.inverse();
}

// ------------------------------------------------------------- char poly

std::vector<std::vector<int>> k_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(k);
  std::iota(cur.begin(), cur.end(), 0);
  if (k < 0 || k > n) return out;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[i] == n - k + i) --i;
    if (i < 0) break;
    ++cur[i];
    for (int j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

CharPoly char_poly(const QMatrix& g) {
  if (g.rows() != g.cols()) throw DimensionError("characteristic polynomial of a non-square matrix");
  const int n = g.rows();
  // Faddeev-LeVerrier: M_k = g M_{k-1} + c_{n-k+1} I, c_{n-k} = -tr(g M_k)/k.
  std::vector<mpq_class> c(n + 1, mpq_class(0));
  c[n] = 1;
  QMatrix m(n, n);
  const QMatrix id = QMatrix::identity(n);
  for (int k = 1; k <= n; ++k) {
    m = g * m + id * c[n - k + 1];
    c[n - k] = -(g * m).trace() / k;
  }
  return CharPoly{Polynomial(std::move(c))};
}

CharPoly char_poly(const RationalMatrix& g) {
  const int n = g.n();
  if (n > 4) return char_poly(g.to_qmatrix());
  // Principal minors of the integer numerator: E_k(g) = E_k(N) / d^k.
  std::vector<mpz_class> num(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) num[static_cast<std::size_t>(i) * n + j] = g.numerator(i, j);
  std::vector<mpq_class> c(n + 1, mpq_class(0));
  c[n] = 1;
  mpz_class dk = 1;
  for (int k = 1; k <= n; ++k) {
    dk *= g.denominator();
    mpz_class ek = 0;
    for (const auto& s : k_subsets(n, k)) ek += integer_minor(num, n, s, s);
    mpq_class e(ek, dk);
    e.canonicalize();
    c[n - k] = (k % 2 == 0) ? e : mpq_class(-e);
  }
  return CharPoly{Polynomial(std::move(c))};
}

QMatrix evaluate(const Polynomial& p, const QMatrix& m) {
  QMatrix acc(m.rows(), m.cols());
  const QMatrix id = QMatrix::identity(m.rows());
  const auto& c = p.coefficients();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * m + id * (*it);
  return acc;
}

mpq_class cubic_discriminant(const CharPoly& p) {
  if (p.degree() != 3) throw DomainError("cubic discriminant requires a degree-3 polynomial");
  const mpq_class& a = p.poly.coeff(3);
  const mpq_class& b = p.poly.coeff(2);
  const mpq_class& c = p.poly.coeff(1);
  const mpq_class& d = p.poly.coeff(0);
  return 18 * a * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * a * c * c * c -
         27 * a * a * d * d;
}

// ------------------------------------------------------- exterior powers

RationalMatrix exterior_power(const RationalMatrix& g, int k) {
  const int n = g.n();
  if (k < 1 || k > n - 1) throw DomainError("exterior power degree must satisfy 1 <= k <= n-1");
  auto subsets = k_subsets(n, k);
  const int m = static_cast<int>(subsets.size());
  std::vector<mpz_class> num(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      num[static_cast<std::size_t>(i) * m + j] = integer_minor(g.num_, n, subsets[i], subsets[j]);
  mpz_class den;
  mpz_pow_ui(den.get_mpz_t(), g.den_.get_mpz_t(), static_cast<unsigned long>(k));
  return RationalMatrix(m, std::move(num), den);
}

QMatrix exterior_power(const QMatrix& g, int k) {
  const int n = g.rows();
  if (k < 1 || k > n) throw DomainError("exterior power degree out of range");
  auto subsets = k_subsets(n, k);
  const int m = static_cast<int>(subsets.size());
  QMatrix out(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      QMatrix sub(k, k);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) sub(r, c) = g(subsets[i][r], subsets[j][c]);
      out(i, j) = sub.determinant();
    }
  return out;
}

// ------------------------------------------------------------ finite order

const char* to_string(FiniteOrder::Kind k) {
  switch (k) {
    case FiniteOrder::Kind::Finite: return "Finite";
    case FiniteOrder::Kind::InfiniteOrExceedsBound: return "InfiniteOrExceedsBound";
    case FiniteOrder::Kind::ProvablyInfinite: return "ProvablyInfinite";
  }
  return "?";
}

FiniteOrder finite_order(const RationalMatrix& g, long k_max) {
  if (k_max < 1) throw DomainError("finite_order requires k_max >= 1");
  const int n = g.n();
  RationalMatrix p = g;
  for (long k = 1; k <= k_max; ++k) {
    if (p.is_identity()) return {FiniteOrder::Kind::Finite, k, "exact power test"};
    if (k < k_max) p = p * g;
  }

  // |tr g| > n forces an eigenvalue of modulus > 1.
  if (abs(g.trace()) > n)
    return {FiniteOrder::Kind::ProvablyInfinite, 0, "trace exceeds dimension"};

  CharPoly cp = char_poly(g);
  // Roots of unity have integral minimal polynomials.
  if (!cp.poly.has_integer_coefficients())
    return {FiniteOrder::Kind::ProvablyInfinite, 0, "non-integral characteristic polynomial"};

  // Strip cyclotomic factors of degree <= n; Kronecker: anything left has a
  // root off the unit circle.
  Polynomial rest = cp.poly;
  Polynomial distinct({mpq_class(1)});
  long order = 1;
  for (int m = 1; m <= 2 * n * n + 2; ++m) {
    if (euler_phi(m) > n) continue;
    const Polynomial& phi = cyclotomic(m);
    bool used = false;
    while (rest.degree() >= phi.degree() && rest.divisible_by(phi)) {
      rest = rest.divmod(phi).first;
      used = true;
    }
    if (used) {
      distinct = distinct * phi;
      order = std::lcm(order, static_cast<long>(m));
    }
  }
  if (rest.degree() > 0)
    return {FiniteOrder::Kind::ProvablyInfinite, 0, "non-cyclotomic characteristic polynomial"};

  // Root-of-unity spectrum: finite order iff semisimple.
  if (!evaluate(distinct, g.to_qmatrix()).is_zero())
    return {FiniteOrder::Kind::ProvablyInfinite, 0,
            "non-semisimple with root-of-unity spectrum"};
  return {FiniteOrder::Kind::InfiniteOrExceedsBound, order,
          "semisimple root-of-unity spectrum; order " + std::to_string(order) + " exceeds k_max"};
}

// ------------------------------------------------------------ RationalSpan

bool RationalSpan::insert(std::vector<mpq_class> v) {
  if (v.size() != dim_) throw DimensionError("span vector has wrong dimension");
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    const std::size_t p = pivots_[r];
    if (v[p] == 0) continue;
    mpq_class f = v[p];
    for (std::size_t j = 0; j < dim_; ++j) v[j] -= f * rows_[r][j];
  }
  std::size_t piv = dim_;
  for (std::size_t j = 0; j < dim_; ++j)
    if (v[j] != 0) {
      piv = j;
      break;
    }
  if (piv == dim_) return false;
  mpq_class inv = 1 / v[piv];
  for (auto& x : v) x *= inv;
  for (auto& row : rows_) {
    if (row[piv] == 0) continue;
    mpq_class f = row[piv];
    for (std::size_t j = 0; j < dim_; ++j) row[j] -= f * v[j];
  }
  rows_.push_back(std::move(v));
  pivots_.push_back(piv);
  return true;
}

}  // namespace limitset
