// Compiled with -mavx2 -mfma. Keep this TU free of inline library code:
// anything the linker could merge with a non-AVX2 definition must not be
// emitted here.

#include <immintrin.h>

#include <cstddef>

#include "sphgp/simd/kernels.hpp"

namespace sphgp::simd {
namespace {

static inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

static double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    i += 4;
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

static void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

static double sum_squares_avx2(const double* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d v0 = _mm256_loadu_pd(x + i);
    const __m256d v1 = _mm256_loadu_pd(x + i + 4);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    acc1 = _mm256_fmadd_pd(v1, v1, acc1);
  }
  if (i + 4 <= n) {
    const __m256d v0 = _mm256_loadu_pd(x + i);
    acc0 = _mm256_fmadd_pd(v0, v0, acc0);
    i += 4;
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

static double weighted_sum_squares_avx2(const double* x, const double* w, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(_mm256_mul_pd(v, v), _mm256_loadu_pd(w + i), acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += w[i] * x[i] * x[i];
  return s;
}

static void residual_squares_avx2(double y, double scale, const double* g, double* out,
                                  std::size_t n) {
  const __m256d vy = _mm256_set1_pd(y);
  const __m256d vs = _mm256_set1_pd(scale);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_fnmadd_pd(vs, _mm256_loadu_pd(g + i), vy);
    _mm256_storeu_pd(out + i, _mm256_mul_pd(d, d));
  }
  for (; i < n; ++i) {
    const double d = y - scale * g[i];
    out[i] = d * d;
  }
}

static double max_value_avx2(const double* x, std::size_t n) {
  const double neg_inf = -__builtin_inf();
  __m256d m = _mm256_set1_pd(neg_inf);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) m = _mm256_max_pd(m, _mm256_loadu_pd(x + i));
  __m128d lo = _mm256_castpd256_pd128(m);
  lo = _mm_max_pd(lo, _mm256_extractf128_pd(m, 1));
  lo = _mm_max_sd(lo, _mm_unpackhi_pd(lo, lo));
  double r = _mm_cvtsd_f64(lo);
  for (; i < n; ++i) r = x[i] > r ? x[i] : r;
  return r;
}

}  // namespace

extern const KernelTable kAvx2Table;
const KernelTable kAvx2Table{
    Isa::Avx2,         dot_avx2,          axpy_avx2,      sum_squares_avx2,
    weighted_sum_squares_avx2, residual_squares_avx2, max_value_avx2,
};

}  // namespace sphgp::simd
