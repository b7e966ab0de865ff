#pragma once

// Data-parallel inner loops used by the spherical transforms and the
// likelihood evaluators. Every kernel has a scalar reference version; SIMD
// variants are selected once at runtime from the host CPU features and can be
// overridden with the SPHGP_SIMD environment variable ("scalar", "avx2",
// "neon") or set_isa().
//
// SIMD variants reorder floating-point sums, so results differ from the
// scalar path in the last few ulps. A given variant is deterministic.

#include <cstddef>
#include <span>
#include <string_view>

namespace sphgp::simd {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa) noexcept;

// Raw-pointer entry points shared by every variant.
struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  double (*sum_squares)(const double* x, std::size_t n);
  double (*weighted_sum_squares)(const double* x, const double* w, std::size_t n);
  // out[i] = (y - scale * g[i])^2
  void (*residual_squares)(double y, double scale, const double* g, double* out, std::size_t n);
  double (*max_value)(const double* x, std::size_t n);
};

const KernelTable& scalar_table() noexcept;

// nullptr when the variant is not compiled in or the CPU lacks the feature.
const KernelTable* avx2_table() noexcept;
const KernelTable* neon_table() noexcept;

bool isa_available(Isa isa) noexcept;

// Active table used by the span wrappers below.
const KernelTable& active() noexcept;
Isa active_isa() noexcept;

// Throws ArgumentError if the variant is unavailable on this host.
void set_isa(Isa isa);

// RAII override for tests and benchmarks.
class ScopedIsa {
 public:
  explicit ScopedIsa(Isa isa);
  ~ScopedIsa();
  ScopedIsa(const ScopedIsa&) = delete;
  ScopedIsa& operator=(const ScopedIsa&) = delete;

 private:
  Isa previous_;
};

double dot(std::span<const double> a, std::span<const double> b);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
double sum_squares(std::span<const double> x);
double weighted_sum_squares(std::span<const double> x, std::span<const double> w);
void residual_squares(double y, double scale, std::span<const double> g, std::span<double> out);
// Returns -infinity for an empty span.
double max_value(std::span<const double> x);

}  // namespace sphgp::simd
