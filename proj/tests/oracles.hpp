#pragma once

// Test-side reference computations, independent of the library numerics.

#include <gmpxx.h>

#include <cmath>
#include <random>
#include <vector>

#include "limitset/exactmat.hpp"

namespace oracle {

using QRows = std::vector<std::vector<mpq_class>>;

inline QRows rows_of(const limitset::RationalMatrix& g) {
  QRows r(g.n(), std::vector<mpq_class>(g.n()));
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) r[i][j] = g.entry(i, j);
  return r;
}

inline QRows mul(const QRows& a, const QRows& b) {
  const std::size_t n = a.size(), k = b.size(), m = b[0].size();
  QRows c(n, std::vector<mpq_class>(m, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t l = 0; l < k; ++l)
      for (std::size_t j = 0; j < m; ++j) c[i][j] += a[i][l] * b[l][j];
  return c;
}

inline QRows transpose(const QRows& a) {
  QRows t(a[0].size(), std::vector<mpq_class>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

// Cofactor expansion along the first row.
inline mpq_class laplace_det(const QRows& a) {
  const std::size_t n = a.size();
  if (n == 1) return a[0][0];
  mpq_class d = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (a[0][j] == 0) continue;
    QRows minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<mpq_class> row;
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) row.push_back(a[i][c]);
      minor.push_back(row);
    }
    const mpq_class term = a[0][j] * laplace_det(minor);
    d += (j % 2 == 0) ? term : mpq_class(-term);
  }
  return d;
}

inline void subsets(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// k-th exterior power from k x k minors.
inline QRows exterior(const QRows& g, int k) {
  std::vector<std::vector<int>> s;
  std::vector<int> cur;
  subsets(static_cast<int>(g.size()), k, 0, cur, s);
  QRows out(s.size(), std::vector<mpq_class>(s.size()));
  for (std::size_t I = 0; I < s.size(); ++I)
    for (std::size_t J = 0; J < s.size(); ++J) {
      QRows m(k, std::vector<mpq_class>(k));
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) m[a][b] = g[s[I][a]][s[J][b]];
      out[I][J] = laplace_det(m);
    }
  return out;
}

// Number of eigenvalues of the symmetric matrix s strictly below t
// (Sylvester inertia of s - t I through exact symmetric elimination).
inline int count_below(const QRows& s, const mpq_class& t) {
  const std::size_t n = s.size();
  QRows a = s;
  for (std::size_t i = 0; i < n; ++i) a[i][i] -= t;
  int neg = 0;
  for (std::size_t p = 0; p < n; ++p) {
    if (a[p][p] == 0) {
      // t is (generically) not an eigenvalue; perturb symmetrically.
      return count_below(s, t + mpq_class(mpz_class(1), mpz_class(1099511627776UL)) * (t == 0 ? mpq_class(1) : abs(t)));
    }
    if (a[p][p] < 0) ++neg;
    for (std::size_t i = p + 1; i < n; ++i) {
      const mpq_class f = a[i][p] / a[p][p];
      for (std::size_t j = p; j < n; ++j) a[i][j] -= f * a[p][j];
    }
  }
  return neg;
}

// log of the (index)-th largest eigenvalue (0-based) of a positive definite
// symmetric matrix, by bisection in log space.
inline double log_eigenvalue(const QRows& s, int index, int iters = 60) {
  const int n = static_cast<int>(s.size());
  mpq_class bound = 0;
  for (const auto& r : s)
    for (const auto& x : r) bound += abs(x);
  // det = 1 and every eigenvalue <= bound, so the smallest is >= bound^-(n-1).
  const double lb = std::log(bound.get_d());
  double lo = -(n - 1) * lb - 1, hi = lb + 1;
  // k-th largest = eigenvalue with exactly n - 1 - index values below it.
  for (int it = 0; it < iters; ++it) {
    const double mid = 0.5 * (lo + hi);
    const mpq_class t(std::exp(mid));
    if (count_below(s, t) > n - 1 - index)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// Largest log singular value of a rational matrix.
inline double log_norm(const QRows& g) { return 0.5 * log_eigenvalue(mul(transpose(g), g), 0); }

// Descending log singular values.
inline std::vector<double> log_singular_values(const QRows& g) {
  const QRows s = mul(transpose(g), g);
  std::vector<double> out;
  for (int i = 0; i < static_cast<int>(g.size()); ++i) out.push_back(0.5 * log_eigenvalue(s, i));
  return out;
}

// Unit lower times unit upper triangular, off-diagonal entries in [-bound, bound].
inline limitset::RationalMatrix random_unimodular(int n, int bound, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(-bound, bound);
  QRows l(n, std::vector<mpq_class>(n, 0)), u = l;
  for (int i = 0; i < n; ++i) {
    l[i][i] = 1;
    u[i][i] = 1;
    for (int j = 0; j < i; ++j) l[i][j] = d(rng);
    for (int j = i + 1; j < n; ++j) u[i][j] = d(rng);
  }
  return limitset::RationalMatrix::from_rows(mul(l, u));
}

}  // namespace oracle
