#include "limitset/kernels.hpp"

#include <cstdlib>
#include <cstring>

#if defined(__x86_64__) || defined(__i386__)
#define LIMITSET_X86 1
#include <immintrin.h>
#else
#define LIMITSET_X86 0
#endif

#if defined(__aarch64__)
#define LIMITSET_NEON 1
#include <arm_neon.h>
#else
#define LIMITSET_NEON 0
#endif

namespace limitset::kernels {

namespace {

// ------------------------------------------------------------------ scalar

void matmul_scalar(const double* a, const double* b, double* c, int m, int k, int n) {
  for (int j = 0; j < n; ++j) {
    double* cj = c + static_cast<long>(j) * m;
    for (int i = 0; i < m; ++i) cj[i] = 0.0;
    for (int p = 0; p < k; ++p) {
      const double bpj = b[static_cast<long>(j) * k + p];
      const double* ap = a + static_cast<long>(p) * m;
      for (int i = 0; i < m; ++i) cj[i] = cj[i] + ap[i] * bpj;
    }
  }
}

void rotate_scalar(double* x, double* y, int len, double c, double s) {
  for (int i = 0; i < len; ++i) {
    const double xi = x[i], yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

void axpy_scalar(double* y, const double* x, double a, int len) {
  for (int i = 0; i < len; ++i) y[i] = y[i] + a * x[i];
}

void scale_scalar(double* x, double a, int len) {
  for (int i = 0; i < len; ++i) x[i] = a * x[i];
}

double dot_scalar(const double* x, const double* y, int len) {
  double acc[4] = {0.0, 0.0, 0.0, 0.0};
  int i = 0;
  for (; i + 4 <= len; i += 4)
    for (int l = 0; l < 4; ++l) acc[l] = acc[l] + x[i + l] * y[i + l];
  double s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  for (; i < len; ++i) s = s + x[i] * y[i];
  return s;
}

const Table kScalar{"scalar", matmul_scalar, rotate_scalar, axpy_scalar, scale_scalar, dot_scalar};

// -------------------------------------------------------------------- AVX2

#if LIMITSET_X86

__attribute__((target("avx2"))) void axpy_avx2(double* y, const double* x, double a, int len) {
  const __m256d va = _mm256_set1_pd(a);
  int i = 0;
  for (; i + 4 <= len; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    __m256d vx = _mm256_loadu_pd(x + i);
    _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
  }
  for (; i < len; ++i) y[i] = y[i] + a * x[i];
}

__attribute__((target("avx2"))) void matmul_avx2(const double* a, const double* b, double* c,
                                                 int m, int k, int n) {
  for (int j = 0; j < n; ++j) {
    double* cj = c + static_cast<long>(j) * m;
    std::memset(cj, 0, sizeof(double) * static_cast<std::size_t>(m));
    for (int p = 0; p < k; ++p) {
      const double bpj = b[static_cast<long>(j) * k + p];
      const double* ap = a + static_cast<long>(p) * m;
      const __m256d vb = _mm256_set1_pd(bpj);
      int i = 0;
      for (; i + 4 <= m; i += 4) {
        __m256d vc = _mm256_loadu_pd(cj + i);
        __m256d va = _mm256_loadu_pd(ap + i);
        _mm256_storeu_pd(cj + i, _mm256_add_pd(vc, _mm256_mul_pd(va, vb)));
      }
      for (; i < m; ++i) cj[i] = cj[i] + ap[i] * bpj;
    }
  }
}

__attribute__((target("avx2"))) void rotate_avx2(double* x, double* y, int len, double c,
                                                 double s) {
  const __m256d vc = _mm256_set1_pd(c);
  const __m256d vs = _mm256_set1_pd(s);
  int i = 0;
  for (; i + 4 <= len; i += 4) {
    __m256d vx = _mm256_loadu_pd(x + i);
    __m256d vy = _mm256_loadu_pd(y + i);
    _mm256_storeu_pd(x + i, _mm256_sub_pd(_mm256_mul_pd(vc, vx), _mm256_mul_pd(vs, vy)));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_mul_pd(vs, vx), _mm256_mul_pd(vc, vy)));
  }
  for (; i < len; ++i) {
    const double xi = x[i], yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

__attribute__((target("avx2"))) void scale_avx2(double* x, double a, int len) {
  const __m256d va = _mm256_set1_pd(a);
  int i = 0;
  for (; i + 4 <= len; i += 4) _mm256_storeu_pd(x + i, _mm256_mul_pd(va, _mm256_loadu_pd(x + i)));
  for (; i < len; ++i) x[i] = a * x[i];
}

__attribute__((target("avx2"))) double dot_avx2(const double* x, const double* y, int len) {
  __m256d acc = _mm256_setzero_pd();
  int i = 0;
  for (; i + 4 <= len; i += 4)
    acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double s = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; i < len; ++i) s = s + x[i] * y[i];
  return s;
}

const Table kAvx2{"avx2", matmul_avx2, rotate_avx2, axpy_avx2, scale_avx2, dot_avx2};

#endif

// -------------------------------------------------------------------- NEON

#if LIMITSET_NEON

void axpy_neon(double* y, const double* x, double a, int len) {
  const float64x2_t va = vdupq_n_f64(a);
  int i = 0;
  for (; i + 2 <= len; i += 2)
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  for (; i < len; ++i) y[i] = y[i] + a * x[i];
}

void matmul_neon(const double* a, const double* b, double* c, int m, int k, int n) {
  for (int j = 0; j < n; ++j) {
    double* cj = c + static_cast<long>(j) * m;
    std::memset(cj, 0, sizeof(double) * static_cast<std::size_t>(m));
    for (int p = 0; p < k; ++p)
      axpy_neon(cj, a + static_cast<long>(p) * m, b[static_cast<long>(j) * k + p], m);
  }
}

void rotate_neon(double* x, double* y, int len, double c, double s) {
  const float64x2_t vc = vdupq_n_f64(c), vs = vdupq_n_f64(s);
  int i = 0;
  for (; i + 2 <= len; i += 2) {
    float64x2_t vx = vld1q_f64(x + i), vy = vld1q_f64(y + i);
    vst1q_f64(x + i, vsubq_f64(vmulq_f64(vc, vx), vmulq_f64(vs, vy)));
    vst1q_f64(y + i, vaddq_f64(vmulq_f64(vs, vx), vmulq_f64(vc, vy)));
  }
  for (; i < len; ++i) {
    const double xi = x[i], yi = y[i];
    x[i] = c * xi - s * yi;
    y[i] = s * xi + c * yi;
  }
}

void scale_neon(double* x, double a, int len) {
  const float64x2_t va = vdupq_n_f64(a);
  int i = 0;
  for (; i + 2 <= len; i += 2) vst1q_f64(x + i, vmulq_f64(va, vld1q_f64(x + i)));
  for (; i < len; ++i) x[i] = a * x[i];
}

double dot_neon(const double* x, const double* y, int len) {
  // Two 2-lane accumulators reproduce the scalar 4-lane striping.
  float64x2_t lo = vdupq_n_f64(0.0), hi = vdupq_n_f64(0.0);
  int i = 0;
  for (; i + 4 <= len; i += 4) {
    lo = vaddq_f64(lo, vmulq_f64(vld1q_f64(x + i), vld1q_f64(y + i)));
    hi = vaddq_f64(hi, vmulq_f64(vld1q_f64(x + i + 2), vld1q_f64(y + i + 2)));
  }
  double s = (vgetq_lane_f64(lo, 0) + vgetq_lane_f64(lo, 1)) +
             (vgetq_lane_f64(hi, 0) + vgetq_lane_f64(hi, 1));
  for (; i < len; ++i) s = s + x[i] * y[i];
  return s;
}

const Table kNeon{"neon", matmul_neon, rotate_neon, axpy_neon, scale_neon, dot_neon};

#endif

const Table& select() {
  const char* env = std::getenv("LIMITSET_ISA");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return kScalar;
  if (const Table* t = avx2()) return *t;
  if (const Table* t = neon()) return *t;
  return kScalar;
}

}  // namespace

const Table& scalar() { return kScalar; }

const Table* avx2() {
#if LIMITSET_X86
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const Table* neon() {
#if LIMITSET_NEON
  return &kNeon;
#else
  return nullptr;
#endif
}

const Table& active() {
  static const Table& t = select();
  return t;
}

std::vector<std::string> available() {
  std::vector<std::string> out{"scalar"};
  if (avx2()) out.emplace_back("avx2");
  if (neon()) out.emplace_back("neon");
  return out;
}

}  // namespace limitset::kernels
