#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sphgp/empirical_bayes.hpp"
#include "sphgp/io.hpp"
#include "sphgp/model.hpp"
#include "sphgp/solar.hpp"

namespace sphgp {

enum class ExperimentMode { Simulation, Solar };
enum class CorrelationMode { TimeAveraged, PerTime };

struct ExperimentConfig {
  ExperimentMode mode = ExperimentMode::Simulation;
  SimulationConfig sim;
  PriorSpec priors;

  // Generating hyperparameters. When absent they are drawn from the priors,
  // one vector per replicate if hp_per_replicate, else one for the whole run.
  std::optional<HyperparamVector> true_hp;
  bool hp_per_replicate = true;

  FitOptions fit;
  std::vector<std::size_t> output_times;  // time indices that get field CSVs
  CorrelationMode correlation_mode = CorrelationMode::TimeAveraged;
  std::size_t folds = 5;

  SolarConfig solar;
  double solar_noise_sigma = 0.25;
  std::optional<HyperparamVector> solar_effect_hp;  // default: S1 at the prior modes

  // T used by the pipeline: sim.T, or solar.days in solar mode.
  std::size_t times() const noexcept { return mode == ExperimentMode::Solar ? solar.days : sim.T; }
  int truncation() const { return truncation_order(sim.scheme, times()); }
  HyperparamVector effect_hp() const;

  // Throws ConfigError naming the field.
  void validate() const;
  io::Json to_json() const;
  static ExperimentConfig from_json(const io::Json& j);
  static ExperimentConfig load(const std::filesystem::path& path);
};

}  // namespace sphgp
