#include "sphgp/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

#include "sphgp/errors.hpp"

namespace sphgp::simd {

#ifdef SPHGP_HAVE_AVX2_TU
extern const KernelTable kAvx2Table;
#endif
#ifdef SPHGP_HAVE_NEON_TU
extern const KernelTable kNeonTable;
#endif

namespace {

bool cpu_has_avx2() noexcept {
#if defined(SPHGP_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* pick_default() noexcept {
  if (const char* env = std::getenv("SPHGP_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return &scalar_table();
    if (want == "avx2" && avx2_table()) return avx2_table();
    if (want == "neon" && neon_table()) return neon_table();
  }
  if (const KernelTable* t = avx2_table()) return t;
  if (const KernelTable* t = neon_table()) return t;
  return &scalar_table();
}

std::atomic<const KernelTable*>& slot() noexcept {
  static std::atomic<const KernelTable*> table{pick_default()};
  return table;
}

const KernelTable* table_for(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return &scalar_table();
    case Isa::Avx2: return avx2_table();
    case Isa::Neon: return neon_table();
  }
  return nullptr;
}

void check_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw ShapeError(std::string(what) + ": span sizes differ");
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

const KernelTable* avx2_table() noexcept {
#ifdef SPHGP_HAVE_AVX2_TU
  static const bool ok = cpu_has_avx2();
  return ok ? &kAvx2Table : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable* neon_table() noexcept {
#ifdef SPHGP_HAVE_NEON_TU
  return &kNeonTable;
#else
  return nullptr;
#endif
}

bool isa_available(Isa isa) noexcept { return table_for(isa) != nullptr; }

const KernelTable& active() noexcept { return *slot().load(std::memory_order_acquire); }

Isa active_isa() noexcept { return active().isa; }

void set_isa(Isa isa) {
  const KernelTable* t = table_for(isa);
  if (!t) throw ArgumentError("SIMD variant '" + std::string(isa_name(isa)) + "' is not available");
  slot().store(t, std::memory_order_release);
}

ScopedIsa::ScopedIsa(Isa isa) : previous_(active_isa()) { set_isa(isa); }
ScopedIsa::~ScopedIsa() { set_isa(previous_); }

double dot(std::span<const double> a, std::span<const double> b) {
  check_same_size(a.size(), b.size(), "dot");
  return active().dot(a.data(), b.data(), a.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  check_same_size(x.size(), y.size(), "axpy");
  active().axpy(alpha, x.data(), y.data(), x.size());
}

double sum_squares(std::span<const double> x) { return active().sum_squares(x.data(), x.size()); }

double weighted_sum_squares(std::span<const double> x, std::span<const double> w) {
  check_same_size(x.size(), w.size(), "weighted_sum_squares");
  return active().weighted_sum_squares(x.data(), w.data(), x.size());
}

void residual_squares(double y, double scale, std::span<const double> g, std::span<double> out) {
  check_same_size(g.size(), out.size(), "residual_squares");
  active().residual_squares(y, scale, g.data(), out.data(), g.size());
}

double max_value(std::span<const double> x) { return active().max_value(x.data(), x.size()); }

}  // namespace sphgp::simd
