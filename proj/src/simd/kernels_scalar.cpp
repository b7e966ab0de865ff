#include "sphgp/simd/kernels.hpp"

#include <cmath>
#include <limits>

namespace sphgp::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

void axpy_scalar(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

double sum_squares_scalar(const double* x, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

double weighted_sum_squares_scalar(const double* x, const double* w, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * x[i] * x[i];
  return s;
}

void residual_squares_scalar(double y, double scale, const double* g, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double d = y - scale * g[i];
    out[i] = d * d;
  }
}

double max_value_scalar(const double* x, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) m = x[i] > m ? x[i] : m;
  return m;
}

constexpr KernelTable kScalar{
    Isa::Scalar,       dot_scalar,          axpy_scalar,      sum_squares_scalar,
    weighted_sum_squares_scalar, residual_squares_scalar, max_value_scalar,
};

}  // namespace

const KernelTable& scalar_table() noexcept { return kScalar; }

}  // namespace sphgp::simd
