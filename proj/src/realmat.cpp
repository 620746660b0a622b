#include "limitset/realmat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "limitset/errors.hpp"
#include "limitset/kernels.hpp"

namespace limitset {

RealMatrix RealMatrix::identity(int n) {
  RealMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

RealMatrix RealMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r ? static_cast<int>(rows[0].size()) : 0;
  RealMatrix m(r, c);
  for (int i = 0; i < r; ++i) {
    if (static_cast<int>(rows[i].size()) != c) throw DimensionError("ragged matrix rows");
    for (int j = 0; j < c; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

RealMatrix RealMatrix::from_rational(const RationalMatrix& g) {
  const int n = g.n();
  RealMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v = g.entry(i, j).get_d();
      if (!std::isfinite(v)) throw DomainError("matrix entry overflows double precision");
      m(i, j) = v;
    }
  return m;
}

RealMatrix RealMatrix::transpose() const {
  RealMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double RealMatrix::frobenius() const {
  return std::sqrt(kernels::active().dot(a_.data(), a_.data(), static_cast<int>(a_.size())));
}

double RealMatrix::max_abs() const {
  double m = 0.0;
  for (double x : a_) m = std::max(m, std::fabs(x));
  return m;
}

std::vector<std::vector<double>> RealMatrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_, std::vector<double>(cols_));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out[i][j] = (*this)(i, j);
  return out;
}

RealMatrix operator*(const RealMatrix& a, const RealMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("matrix product shape mismatch");
  RealMatrix c(a.rows_, b.cols_);
  kernels::active().matmul(a.a_.data(), b.a_.data(), c.a_.data(), a.rows_, a.cols_, b.cols_);
  return c;
}

RealMatrix operator-(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionError("matrix shape mismatch");
  RealMatrix c = a;
  kernels::active().axpy(c.a_.data(), b.a_.data(), -1.0, static_cast<int>(c.a_.size()));
  return c;
}

std::vector<double> apply(const RealMatrix& m, const std::vector<double>& v) {
  if (static_cast<int>(v.size()) != m.cols()) throw DimensionError("vector length mismatch");
  std::vector<double> out(m.rows(), 0.0);
  for (int j = 0; j < m.cols(); ++j) kernels::active().axpy(out.data(), m.col(j), v[j], m.rows());
  return out;
}

bool orthonormalize_columns(RealMatrix& m, double rel_tol) {
  const auto& k = kernels::active();
  const int r = m.rows();
  for (int j = 0; j < m.cols(); ++j) {
    double* cj = m.col(j);
    const double n0 = std::sqrt(k.dot(cj, cj, r));
    if (n0 == 0.0 || !std::isfinite(n0)) return false;
    k.scale(cj, 1.0 / n0, r);
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i < j; ++i) k.axpy(cj, m.col(i), -k.dot(m.col(i), cj, r), r);
    const double n1 = std::sqrt(k.dot(cj, cj, r));
    if (n1 <= rel_tol) return false;
    k.scale(cj, 1.0 / n1, r);
  }
  return true;
}

SymEigen jacobi_eigen(RealMatrix s, int max_sweeps) {
  const int n = s.rows();
  if (n != s.cols()) throw DimensionError("Jacobi requires a square matrix");
  const auto& k = kernels::active();
  RealMatrix v = RealMatrix::identity(n);
  const double eps = std::numeric_limits<double>::epsilon();
  bool converged = false;
  for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    converged = true;
    for (int p = 0; p < n - 1; ++p)
      for (int q = p + 1; q < n; ++q) {
        const double apq = s(p, q);
        if (apq == 0.0) continue;
        const double app = s(p, p), aqq = s(q, q);
        if (std::fabs(apq) <= eps * std::sqrt(std::fabs(app * aqq))) {
          s(p, q) = s(q, p) = 0.0;
          continue;
        }
        converged = false;
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::fabs(theta) + std::hypot(1.0, theta));
        const double c = 1.0 / std::hypot(1.0, t);
        const double sn = t * c;
        // S <- J^T S J with J the rotation in the (p, q) plane.
        k.rotate(s.col(p), s.col(q), n, c, sn);
        for (int j = 0; j < n; ++j) {
          const double x = s(p, j), y = s(q, j);
          s(p, j) = c * x - sn * y;
          s(q, j) = sn * x + c * y;
        }
        s(p, q) = s(q, p) = 0.0;
        k.rotate(v.col(p), v.col(q), n, c, sn);
      }
  }
  if (!converged) throw ConvergenceError("Jacobi eigenvalue iteration did not converge");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return s(a, a) > s(b, b); });
  SymEigen out{std::vector<double>(n), RealMatrix(n, n)};
  for (int j = 0; j < n; ++j) {
    out.values[j] = s(order[j], order[j]);
    std::copy(v.col(order[j]), v.col(order[j]) + n, out.vectors.col(j));
  }
  return out;
}

double determinant(const RealMatrix& m) {
  const int n = m.rows();
  if (n != m.cols()) throw DimensionError("determinant of a non-square matrix");
  RealMatrix a = m;
  double det = 1.0;
  for (int p = 0; p < n; ++p) {
    int piv = p;
    for (int r = p + 1; r < n; ++r)
      if (std::fabs(a(r, p)) > std::fabs(a(piv, p))) piv = r;
    if (a(piv, p) == 0.0) return 0.0;
    if (piv != p) {
      for (int j = 0; j < n; ++j) std::swap(a(p, j), a(piv, j));
      det = -det;
    }
    det *= a(p, p);
    for (int r = p + 1; r < n; ++r) {
      const double f = a(r, p) / a(p, p);
      for (int j = p; j < n; ++j) a(r, j) -= f * a(p, j);
    }
  }
  return det;
}

RealMatrix expm(const RealMatrix& a) {
  const int n = a.rows();
  if (n != a.cols()) throw DimensionError("exponential of a non-square matrix");
  const double norm = a.frobenius();
  int squarings = 0;
  if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  RealMatrix x = a;
  kernels::active().scale(x.data(), std::ldexp(1.0, -squarings), n * n);
  RealMatrix sum = RealMatrix::identity(n), term = RealMatrix::identity(n);
  for (int k = 1; k <= 20; ++k) {
    term = term * x;
    kernels::active().scale(term.data(), 1.0 / k, n * n);
    kernels::active().axpy(sum.data(), term.data(), 1.0, n * n);
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

RealMatrix random_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  while (true) {
    RealMatrix g(n, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) g(i, j) = gauss(rng);
    RealMatrix q = g;
    if (orthonormalize_columns(q)) return q;
  }
}

}  // namespace limitset
