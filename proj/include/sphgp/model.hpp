#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sphgp/gneiting.hpp"
#include "sphgp/rng.hpp"
#include "sphgp/sphere.hpp"

namespace sphgp {

struct BetaPrior {
  double shape1 = 1.0;
  double shape2 = 1.0;
  double mode() const noexcept;  // (a-1)/(a+b-2); requires a, b > 1
};

// The second parameter is a variance.
struct NormalPrior {
  double mean = 0.0;
  double variance = 1.0;
};

struct PriorSpec {
  BetaPrior gamma{5.0, 7.0};
  BetaPrior nu{2.0, 8.0};
  BetaPrior alpha{11.0, 5.0};
  BetaPrior beta{8.0, 2.0};
  NormalPrior varpi{1.3, 0.015};  // truncated to varpi > 0
  NormalPrior sigma{0.25, 0.01};  // truncated to sigma >= 0

  void validate() const;
};

// M i.i.d. candidates of one subfamily. Candidate m uses streams keyed by
// (seed, m, parameter), so the first M' < M draws do not depend on M.
std::vector<HyperparamVector> sample_prior(const PriorSpec& spec, Subfamily subfamily, std::size_t M,
                                           std::uint64_t seed, StreamTag tag = StreamTag::Prior);

// S1 hyperparameters at the Beta prior modes.
HyperparamVector prior_mode_s1(const PriorSpec& spec, double sigma);

struct TruncationScheme {
  enum class Kind { Logarithmic, PowerLaw };
  Kind kind = Kind::Logarithmic;
  double rho = 1.0 / 2.45;

  static TruncationScheme logarithmic() { return {Kind::Logarithmic, 1.0 / 2.45}; }
  static TruncationScheme power_law(double rho) { return {Kind::PowerLaw, rho}; }
  void validate() const;
};

// Logarithmic: round(ln T). PowerLaw: floor(T^rho). At least 1. T >= 2.
int truncation_order(const TruncationScheme& scheme, std::size_t T);

struct SimulationConfig {
  std::size_t T = 50;
  std::size_t n_lat = 10;
  std::size_t n_lon = 15;
  std::size_t M = 50;
  std::size_t R = 200;
  TruncationScheme scheme;
  Subfamily subfamily = Subfamily::S1;
  std::uint64_t seed = 1;

  int truncation() const { return truncation_order(scheme, T); }
  // Positive counts, T >= 2, and TR <= n_lat - 1.
  void validate() const;
};

struct Simulation {
  AngularSpectrum spectrum;  // of the first replicate's hyperparameters, lags 0..T-1
  CoefficientField latent;
  CoefficientField observed;
};

// Time stamps are 1..T, so temporal lags are the integers 0..T-1.
Simulation simulate_replicates(const SimulationConfig& cfg, const HyperparamVector& hp);
// One hyperparameter vector per replicate; replicate r uses the same random
// streams as in the shared-hp overload.
Simulation simulate_replicates(const SimulationConfig& cfg, std::span<const HyperparamVector> per_replicate);

}  // namespace sphgp
