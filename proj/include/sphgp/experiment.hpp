#pragma once

// End-to-end pipelines shared by the command-line tool and the acceptance
// suite: simulation runs, solar runs and k-fold cross-validation over
// replicates.

#include <cstdint>
#include <vector>

#include "sphgp/config.hpp"
#include "sphgp/empirical_bayes.hpp"
#include "sphgp/model.hpp"
#include "sphgp/posterior.hpp"
#include "sphgp/solar.hpp"

namespace sphgp {

// Random partition of 0..R-1 into k folds whose sizes differ by at most one.
// Each fold is sorted.
std::vector<std::vector<std::size_t>> make_folds(std::size_t replicates, std::size_t k, std::uint64_t seed);

struct CvReport {
  std::size_t folds = 0;
  std::uint64_t seed = 0;
  std::vector<std::vector<std::size_t>> assignment;
  std::vector<EmqeMatrix> fold_emqe;
  EmqeMatrix average;    // elementwise mean over folds
  EmqeMatrix in_sample;  // fit and scored on all replicates
};

// Per fold: ML-II on the training replicates, posterior means for the held-out
// replicates, EMQE against `truth`. With detrend, the training-replicate mean
// of the observations is subtracted before fitting and added back to the
// predictions. Requires R >= k.
CvReport cross_validate(const CoefficientField& truth, const CoefficientField& observed,
                        std::span<const HyperparamVector> candidates, const FitOptions& options, std::size_t k,
                        std::uint64_t seed, bool detrend);

struct SimulationRun {
  std::vector<HyperparamVector> generating;  // per replicate
  std::vector<HyperparamVector> candidates;
  Simulation sim;
};

SimulationRun run_simulation(const ExperimentConfig& cfg);

struct SolarRun {
  HyperparamVector effect_hp;
  std::vector<HyperparamVector> candidates;
  SolarDataset data;
};

SolarRun run_solar(const ExperimentConfig& cfg);

}  // namespace sphgp
