#pragma once

// Counter-based random streams. A stream is addressed by (seed, tag, a, b, c):
// the seed and tag form the Philox key, the three stream ids occupy counter
// words, and the remaining counter word walks the stream. Any two distinct
// addresses are independent and a stream's output never depends on which
// other streams were consumed, so sampling can be split across coefficients,
// replicates or threads without changing results.

#include <array>
#include <cstdint>
#include <span>

namespace sphgp {

// Philox4x64 with 10 rounds (Salmon et al. 2011 construction).
std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> counter,
                                        std::array<std::uint64_t, 2> key) noexcept;

enum class StreamTag : std::uint64_t {
  Latent = 1,
  Noise = 2,
  Prior = 3,
  Generating = 4,
  MonteCarlo = 5,
  Folds = 6,
  SolarEffect = 7,
  SolarNoise = 8,
};

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, StreamTag tag, std::uint64_t a = 0, std::uint64_t b = 0,
               std::uint64_t c = 0) noexcept;

  std::uint64_t next_u64() noexcept;
  // Uniform on the open interval (0, 1).
  double uniform() noexcept;
  double normal() noexcept;
  void fill_normal(std::span<double> out) noexcept;
  double gamma(double shape) noexcept;
  double beta(double a, double b) noexcept;
  // N(mean, sd^2) conditioned on x >= lower, by rejection.
  double truncated_normal(double mean, double sd, double lower) noexcept;
  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> counter_;
  std::array<std::uint64_t, 4> buffer_{};
  int pos_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace sphgp
