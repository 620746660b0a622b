#include <doctest.h>

#include <cstring>
#include <random>
#include <vector>

#include "limitset/kernels.hpp"

using namespace limitset;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("scalar matmul matches a naive triple loop") {
  std::mt19937_64 rng(3);
  const auto& s = kernels::scalar();
  for (int m : {1, 3, 5}) {
    for (int k : {1, 3, 4, 7}) {
      for (int n : {1, 2, 6}) {
        auto a = random_vec(static_cast<std::size_t>(m * k), rng);
        auto b = random_vec(static_cast<std::size_t>(k * n), rng);
        std::vector<double> c(static_cast<std::size_t>(m * n));
        s.matmul(a.data(), b.data(), c.data(), m, k, n);
        for (int i = 0; i < m; ++i)
          for (int j = 0; j < n; ++j) {
            double ref = 0;
            for (int l = 0; l < k; ++l) ref += a[static_cast<std::size_t>(l * m + i)] * b[static_cast<std::size_t>(j * k + l)];
            CHECK(c[static_cast<std::size_t>(j * m + i)] == doctest::Approx(ref).epsilon(1e-14));
          }
      }
    }
  }
}

TEST_CASE("vector variants are bit-identical to scalar") {
  const kernels::Table* v = kernels::avx2();
  if (!v) {
    MESSAGE("AVX2 variant unavailable; nothing to compare");
    return;
  }
  const auto& s = kernels::scalar();
  std::mt19937_64 rng(17);
  for (int len = 0; len <= 37; ++len) {
    const auto x = random_vec(static_cast<std::size_t>(len), rng), y = random_vec(static_cast<std::size_t>(len), rng);
    CHECK(s.dot(x.data(), y.data(), len) == v->dot(x.data(), y.data(), len));

    auto y1 = y, y2 = y;
    s.axpy(y1.data(), x.data(), 0.37, len);
    v->axpy(y2.data(), x.data(), 0.37, len);
    CHECK(same_bits(y1, y2));

    auto x1 = x, x2 = x;
    s.scale(x1.data(), -1.7, len);
    v->scale(x2.data(), -1.7, len);
    CHECK(same_bits(x1, x2));

    auto p1 = x, q1 = y, p2 = x, q2 = y;
    s.rotate(p1.data(), q1.data(), len, 0.6, 0.8);
    v->rotate(p2.data(), q2.data(), len, 0.6, 0.8);
    CHECK(same_bits(p1, p2));
    CHECK(same_bits(q1, q2));
  }
  for (int m : {1, 3, 4, 5, 9})
    for (int k : {1, 3, 8})
      for (int n : {1, 3, 10}) {
        auto a = random_vec(static_cast<std::size_t>(m * k), rng), b = random_vec(static_cast<std::size_t>(k * n), rng);
        std::vector<double> c1(static_cast<std::size_t>(m * n)), c2 = c1;
        s.matmul(a.data(), b.data(), c1.data(), m, k, n);
        v->matmul(a.data(), b.data(), c2.data(), m, k, n);
        CHECK(same_bits(c1, c2));
      }
}

TEST_CASE("dispatch lists scalar") {
  const auto names = kernels::available();
  REQUIRE_FALSE(names.empty());
  CHECK(names.front() == "scalar");
  CHECK(kernels::active().name != nullptr);
}
