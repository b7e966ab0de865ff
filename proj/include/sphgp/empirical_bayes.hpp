#pragma once

// Per-time ML-II selection over a discrete candidate set. At each time t the
// observed coefficients y_{n,j}(t, r) are independent N(0, B[n,0] + sigma^2)
// under a candidate, so the marginal likelihood factorizes over (n, j, r).

#include <cstdint>
#include <span>
#include <vector>

#include "sphgp/gneiting.hpp"
#include "sphgp/spectral_measure.hpp"
#include "sphgp/sphere.hpp"

namespace sphgp {

// One time point: `replicates` contiguous slices of coefficient_count(TR) values.
struct TimeSlice {
  std::span<const double> values;
  std::size_t replicates = 1;
  int truncation = 0;
  std::size_t time = 0;  // only used to key Monte-Carlo streams

  static TimeSlice of(const CoefficientField& obs, std::size_t t);
  // A single replicate at time t.
  static TimeSlice of_replicate(const CoefficientField& obs, std::size_t t, std::size_t r);
};

// B[n, 0] for n <= TR.
TruncatedSpectrum lag0_spectrum(const HyperparamVector& hp, int truncation);

double marginal_loglik_closed(const TimeSlice& obs, const TruncatedSpectrum& lag0, double sigma);
double marginal_loglik_closed(const TimeSlice& obs, const HyperparamVector& hp);

struct MonteCarloEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

// For every (n, j, r) the factor p(y) = E_z N(y; z, sigma^2), z ~ N(0, B[n,0]),
// is estimated with S prior draws and combined on the log scale; std_error is
// the delta-method sum of the per-factor variances. Draws for (t, n, j, r) come
// from stream (seed, t, flat index, r), shared by all candidates. sigma must be
// positive.
MonteCarloEstimate marginal_loglik_mc(const TimeSlice& obs, const TruncatedSpectrum& lag0, double sigma,
                                      std::size_t draws, std::uint64_t seed);
MonteCarloEstimate marginal_loglik_mc(const TimeSlice& obs, const HyperparamVector& hp, std::size_t draws,
                                      std::uint64_t seed);

enum class EvaluatorKind { Closed, MonteCarlo };

struct FitOptions {
  EvaluatorKind evaluator = EvaluatorKind::Closed;
  std::size_t mc_draws = 1000;
  std::uint64_t mc_seed = 0;
  bool pool_replicates = true;
  std::size_t replicate = 0;  // used when pool_replicates is false
};

struct TimeVaryingEstimates {
  int truncation = 0;
  std::size_t candidates = 0;
  std::size_t times = 0;
  std::vector<HyperparamVector> selected;  // per t
  std::vector<std::size_t> index;          // per t
  std::vector<double> loglik;              // per t, the attained maximum
  std::vector<double> std_error;           // per t; zero for the closed form
  std::vector<double> table;               // candidates x times, -inf for invalid cells

  double table_at(std::size_t m, std::size_t t) const { return table[m * times + t]; }
};

// Argmax over candidates at every t; ties go to the lowest index. Candidates
// whose spectrum is invalid score -inf. Throws EstimationError naming t when
// every candidate is invalid there.
TimeVaryingEstimates ml2_fit(const CoefficientField& obs, std::span<const HyperparamVector> candidates,
                             const FitOptions& options = {});

}  // namespace sphgp
