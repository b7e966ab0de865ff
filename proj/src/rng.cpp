#include "sphgp/rng.hpp"

#include <cmath>
#include <numbers>

namespace sphgp {
namespace {

__extension__ using u128 = unsigned __int128;

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  const u128 p = static_cast<u128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

}  // namespace

std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> ctr,
                                        std::array<std::uint64_t, 2> key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

RandomStream::RandomStream(std::uint64_t seed, StreamTag tag, std::uint64_t a, std::uint64_t b,
                           std::uint64_t c) noexcept
    : key_{seed, static_cast<std::uint64_t>(tag)}, counter_{0, a, b, c} {}

void RandomStream::refill() noexcept {
  buffer_ = philox4x64(counter_, key_);
  ++counter_[0];
  pos_ = 0;
}

std::uint64_t RandomStream::next_u64() noexcept {
  if (pos_ == 4) refill();
  return buffer_[pos_++];
}

double RandomStream::uniform() noexcept {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phase = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phase);
  has_spare_ = true;
  return r * std::cos(phase);
}

void RandomStream::fill_normal(std::span<double> out) noexcept {
  for (double& v : out) v = normal();
}

double RandomStream::gamma(double shape) noexcept {
  // Marsaglia & Tsang, with the u^(1/a) boost for shape < 1.
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double x = normal();
    double v = 1.0 + c * x;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = uniform();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

double RandomStream::beta(double a, double b) noexcept {
  const double x = gamma(a);
  const double y = gamma(b);
  return x / (x + y);
}

double RandomStream::truncated_normal(double mean, double sd, double lower) noexcept {
  const double a = (lower - mean) / sd;
  if (a <= 0.0) {
    for (;;) {
      const double x = mean + sd * normal();
      if (x >= lower) return x;
    }
  }
  // Tail bound: exponential proposal with the optimal rate (Robert 1995).
  const double lambda = 0.5 * (a + std::sqrt(a * a + 4.0));
  for (;;) {
    const double z = a - std::log(uniform()) / lambda;
    const double d = z - lambda;
    if (uniform() <= std::exp(-0.5 * d * d)) return mean + sd * z;
  }
}

std::uint64_t RandomStream::below(std::uint64_t bound) noexcept {
  // Lemire's multiply-shift with rejection of the biased low zone.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const u128 m = static_cast<u128>(next_u64()) * bound;
    if (static_cast<std::uint64_t>(m) >= threshold) return static_cast<std::uint64_t>(m >> 64);
  }
}

}  // namespace sphgp
