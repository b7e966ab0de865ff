// AArch64 Advanced SIMD variants (two double lanes per register).

#include <arm_neon.h>

#include <cstddef>

#include "sphgp/simd/kernels.hpp"

namespace sphgp::simd {
namespace {

static double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) s += a[i] * b[i];
  return s;
}

static void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) vst1q_f64(y + i, vfmaq_f64(vld1q_f64(y + i), va, vld1q_f64(x + i)));
  for (; i < n; ++i) y[i] += alpha * x[i];
}

static double sum_squares_neon(const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(x + i);
    acc = vfmaq_f64(acc, v, v);
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += x[i] * x[i];
  return s;
}

static double weighted_sum_squares_neon(const double* x, const double* w, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vld1q_f64(x + i);
    acc = vfmaq_f64(acc, vmulq_f64(v, v), vld1q_f64(w + i));
  }
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += w[i] * x[i] * x[i];
  return s;
}

static void residual_squares_neon(double y, double scale, const double* g, double* out,
                                  std::size_t n) {
  const float64x2_t vy = vdupq_n_f64(y);
  const float64x2_t vs = vdupq_n_f64(scale);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vfmsq_f64(vy, vs, vld1q_f64(g + i));
    vst1q_f64(out + i, vmulq_f64(d, d));
  }
  for (; i < n; ++i) {
    const double d = y - scale * g[i];
    out[i] = d * d;
  }
}

static double max_value_neon(const double* x, std::size_t n) {
  const double neg_inf = -__builtin_inf();
  float64x2_t m = vdupq_n_f64(neg_inf);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) m = vmaxq_f64(m, vld1q_f64(x + i));
  double r = vmaxvq_f64(m);
  for (; i < n; ++i) r = x[i] > r ? x[i] : r;
  return r;
}

}  // namespace

extern const KernelTable kNeonTable;
const KernelTable kNeonTable{
    Isa::Neon,         dot_neon,          axpy_neon,      sum_squares_neon,
    weighted_sum_squares_neon, residual_squares_neon, max_value_neon,
};

}  // namespace sphgp::simd
