#pragma once

#include <random>
#include <vector>

#include "limitset/exactmat.hpp"

namespace limitset {

// Dense double matrix, column-major so that frame columns are contiguous.
class RealMatrix {
 public:
  RealMatrix() = default;
  RealMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, 0.0) {}
  static RealMatrix identity(int n);
  static RealMatrix from_rows(const std::vector<std::vector<double>>& rows);
  // Rounds each exact entry; throws DomainError if an entry overflows double.
  static RealMatrix from_rational(const RationalMatrix& g);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return a_[static_cast<std::size_t>(j) * rows_ + i]; }
  double operator()(int i, int j) const { return a_[static_cast<std::size_t>(j) * rows_ + i]; }
  double* col(int j) { return a_.data() + static_cast<std::size_t>(j) * rows_; }
  const double* col(int j) const { return a_.data() + static_cast<std::size_t>(j) * rows_; }
  double* data() { return a_.data(); }
  const double* data() const { return a_.data(); }

  RealMatrix transpose() const;
  double frobenius() const;
  double max_abs() const;
  std::vector<std::vector<double>> to_rows() const;

  friend RealMatrix operator*(const RealMatrix& a, const RealMatrix& b);
  friend RealMatrix operator-(const RealMatrix& a, const RealMatrix& b);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> a_;
};

std::vector<double> apply(const RealMatrix& m, const std::vector<double>& v);

// Modified Gram-Schmidt with one reorthogonalization pass. Returns false if a
// column collapses below rel_tol times its original norm.
bool orthonormalize_columns(RealMatrix& m, double rel_tol = 1e-13);

// Symmetric eigen-decomposition by cyclic Jacobi; eigenvalues descending,
// eigenvectors as columns. Rotations are skipped once |a_pq| is below
// eps * sqrt(|a_pp a_qq|), which keeps small eigenvalues of definite input
// relatively accurate. Throws ConvergenceError after max_sweeps.
struct SymEigen {
  std::vector<double> values;
  RealMatrix vectors;
};
SymEigen jacobi_eigen(RealMatrix s, int max_sweeps = 60);

double determinant(const RealMatrix& m);

// Matrix exponential by scaling and squaring with a Taylor core.
RealMatrix expm(const RealMatrix& a);

// Haar-distributed orthogonal matrix (QR of a Gaussian matrix with sign fix).
RealMatrix random_orthogonal(int n, std::mt19937_64& rng);

}  // namespace limitset
