#pragma once

#include <string>
#include <vector>

namespace limitset::kernels {

// Dense double kernels over contiguous arrays. Every variant performs the
// same operations in the same order (separate multiply and add, fixed lane
// striping for reductions), so results are bit-identical across variants.
struct Table {
  const char* name;
  // Column-major C (m x n) = A (m x k) * B (k x n).
  void (*matmul)(const double* a, const double* b, double* c, int m, int k, int n);
  // (x, y) <- (c x - s y, s x + c y)
  void (*rotate)(double* x, double* y, int len, double c, double s);
  // y <- y + a x
  void (*axpy)(double* y, const double* x, double a, int len);
  // x <- a x
  void (*scale)(double* x, double a, int len);
  // Four-lane striped dot product.
  double (*dot)(const double* x, const double* y, int len);
};

const Table& scalar();
// nullptr when the variant is not compiled in or the CPU lacks it.
const Table* avx2();
const Table* neon();

// Selected once: best supported variant, unless LIMITSET_ISA=scalar.
const Table& active();

std::vector<std::string> available();

}  // namespace limitset::kernels
