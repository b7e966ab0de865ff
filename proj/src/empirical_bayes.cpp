#include "sphgp/empirical_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "sphgp/errors.hpp"
#include "sphgp/rng.hpp"
#include "sphgp/simd/kernels.hpp"

namespace sphgp {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_slice(const TimeSlice& obs, const TruncatedSpectrum& lag0) {
  if (lag0.truncation() != obs.truncation) throw ShapeError("marginal likelihood: spectrum truncation mismatch");
  if (obs.values.size() != obs.replicates * coefficient_count(obs.truncation))
    throw ShapeError("marginal likelihood: slice size does not match replicates x coefficients");
}

}  // namespace

TimeSlice TimeSlice::of(const CoefficientField& obs, std::size_t t) {
  if (t >= obs.times()) throw ArgumentError("TimeSlice: time index out of range");
  return {obs.time_block(t), obs.replicates(), obs.truncation(), t};
}

TimeSlice TimeSlice::of_replicate(const CoefficientField& obs, std::size_t t, std::size_t r) {
  if (t >= obs.times() || r >= obs.replicates()) throw ArgumentError("TimeSlice: index out of range");
  return {obs.slice(t, r), 1, obs.truncation(), t};
}

TruncatedSpectrum lag0_spectrum(const HyperparamVector& hp, int truncation) {
  const double zero = 0.0;
  return TruncatedSpectrum::from_lag0(angular_spectrum(hp, std::span<const double>(&zero, 1), truncation));
}

double marginal_loglik_closed(const TimeSlice& obs, const TruncatedSpectrum& lag0, double sigma) {
  check_slice(obs, lag0);
  const int tr = obs.truncation;
  const std::size_t K = coefficient_count(tr);
  const double s2 = sigma * sigma;
  const double log2pi = std::log(2.0 * std::numbers::pi);

  std::vector<double> inv(K, 0.0);
  double log_norm = 0.0;  // per replicate
  std::vector<int> zero_degrees;
  for (int n = 0; n <= tr; ++n) {
    const double v = lag0.eigenvalues[static_cast<std::size_t>(n)] + s2;
    if (v < 0.0) throw DegenerateError("marginal likelihood: negative variance at degree " + std::to_string(n));
    if (v == 0.0) {
      zero_degrees.push_back(n);
      continue;
    }
    for (int j = 1; j <= 2 * n + 1; ++j) inv[HarmonicIndex{n, j}.flat()] = 1.0 / v;
    log_norm += (2.0 * n + 1.0) * (log2pi + std::log(v));
  }

  double quad = 0.0;
  for (std::size_t r = 0; r < obs.replicates; ++r) {
    const auto y = obs.values.subspan(r * K, K);
    quad += simd::weighted_sum_squares(y, inv);
    for (int n : zero_degrees)
      for (int j = 1; j <= 2 * n + 1; ++j)
        if (y[HarmonicIndex{n, j}.flat()] != 0.0)
          throw DegenerateError("marginal likelihood: zero total variance with nonzero data at degree " +
                                std::to_string(n));
  }
  return -0.5 * static_cast<double>(obs.replicates) * log_norm - 0.5 * quad;
}

double marginal_loglik_closed(const TimeSlice& obs, const HyperparamVector& hp) {
  return marginal_loglik_closed(obs, lag0_spectrum(hp, obs.truncation), hp.sigma);
}

MonteCarloEstimate marginal_loglik_mc(const TimeSlice& obs, const TruncatedSpectrum& lag0, double sigma,
                                      std::size_t draws, std::uint64_t seed) {
  check_slice(obs, lag0);
  if (!(sigma > 0.0))
    throw ArgumentError("marginal_loglik_mc: sigma must be positive (use the closed form for sigma = 0)");
  if (draws < 1) throw ArgumentError("marginal_loglik_mc: need at least one draw");
  const int tr = obs.truncation;
  const std::size_t K = coefficient_count(tr);
  const double s2 = sigma * sigma;
  const double log_norm = -0.5 * std::log(2.0 * std::numbers::pi * s2);
  const double S = static_cast<double>(draws);

  std::vector<double> g(draws), sq(draws);
  double estimate = 0.0, variance = 0.0;
  bool unbounded = false;
  for (int n = 0; n <= tr; ++n) {
    const double b = lag0.eigenvalues[static_cast<std::size_t>(n)];
    if (b < 0.0) throw DegenerateError("marginal_loglik_mc: negative eigenvalue at degree " + std::to_string(n));
    const double scale = std::sqrt(b);
    for (int j = 1; j <= 2 * n + 1; ++j) {
      const std::size_t k = HarmonicIndex{n, j}.flat();
      for (std::size_t r = 0; r < obs.replicates; ++r) {
        const double y = obs.values[r * K + k];
        if (b == 0.0) {
          estimate += log_norm - y * y / (2.0 * s2);
          continue;
        }
        RandomStream rs(seed, StreamTag::MonteCarlo, obs.time, k, r);
        rs.fill_normal(g);
        simd::residual_squares(y, scale, g, sq);
        // log-weights relative to log_norm, shifted by their maximum
        const double c = -1.0 / (2.0 * s2);
        for (double& v : sq) v *= c;
        const double shift = simd::max_value(sq);
        double sum = 0.0, sum2 = 0.0;
        for (double v : sq) {
          const double w = std::exp(v - shift);
          sum += w;
          sum2 += w * w;
        }
        const double mean = sum / S;
        estimate += log_norm + shift + std::log(mean);
        if (draws == 1) {
          unbounded = true;
          continue;
        }
        const double var = std::max(0.0, (sum2 - S * mean * mean) / (S - 1.0));
        variance += var / (S * mean * mean);
      }
    }
  }
  const double se = unbounded ? std::numeric_limits<double>::infinity() : std::sqrt(variance);
  return {estimate, se};
}

MonteCarloEstimate marginal_loglik_mc(const TimeSlice& obs, const HyperparamVector& hp, std::size_t draws,
                                      std::uint64_t seed) {
  return marginal_loglik_mc(obs, lag0_spectrum(hp, obs.truncation), hp.sigma, draws, seed);
}

TimeVaryingEstimates ml2_fit(const CoefficientField& obs, std::span<const HyperparamVector> candidates,
                             const FitOptions& options) {
  if (candidates.empty()) throw ArgumentError("ml2_fit: need at least one candidate");
  if (obs.times() == 0 || obs.replicates() == 0) throw ArgumentError("ml2_fit: empty observations");
  if (!options.pool_replicates && options.replicate >= obs.replicates())
    throw ArgumentError("ml2_fit: replicate index out of range");
  if (options.evaluator == EvaluatorKind::MonteCarlo && options.mc_draws < 1)
    throw ArgumentError("ml2_fit: mc_draws must be positive");

  const int tr = obs.truncation();
  const std::size_t M = candidates.size();
  const std::size_t T = obs.times();

  std::vector<std::optional<TruncatedSpectrum>> spectra(M);
  for (std::size_t m = 0; m < M; ++m) {
    try {
      candidates[m].validate();
      if (options.evaluator == EvaluatorKind::MonteCarlo && !(candidates[m].sigma > 0.0)) continue;
      spectra[m] = lag0_spectrum(candidates[m], tr);
    } catch (const ArgumentError&) {
    } catch (const NumericalError&) {
    }
  }

  TimeVaryingEstimates est;
  est.truncation = tr;
  est.candidates = M;
  est.times = T;
  est.table.assign(M * T, kNegInf);
  std::vector<double> se_table(M * T, 0.0);
  for (std::size_t t = 0; t < T; ++t) {
    const TimeSlice slice =
        options.pool_replicates ? TimeSlice::of(obs, t) : TimeSlice::of_replicate(obs, t, options.replicate);
    for (std::size_t m = 0; m < M; ++m) {
      if (!spectra[m]) continue;
      try {
        if (options.evaluator == EvaluatorKind::Closed) {
          est.table[m * T + t] = marginal_loglik_closed(slice, *spectra[m], candidates[m].sigma);
        } else {
          const auto mc = marginal_loglik_mc(slice, *spectra[m], candidates[m].sigma, options.mc_draws, options.mc_seed);
          est.table[m * T + t] = mc.estimate;
          se_table[m * T + t] = mc.std_error;
        }
      } catch (const NumericalError&) {
      }
    }
  }

  est.selected.resize(T);
  est.index.resize(T);
  est.loglik.resize(T);
  est.std_error.resize(T);
  for (std::size_t t = 0; t < T; ++t) {
    std::size_t best = M;
    for (std::size_t m = 0; m < M; ++m) {
      const double v = est.table[m * T + t];
      if (std::isnan(v) || v == kNegInf) continue;
      if (best == M || v > est.table[best * T + t]) best = m;
    }
    if (best == M) throw EstimationError("ml2_fit: every candidate is invalid at t = " + std::to_string(t));
    est.index[t] = best;
    est.selected[t] = candidates[best];
    est.loglik[t] = est.table[best * T + t];
    est.std_error[t] = se_table[best * T + t];
  }
  return est;
}

}  // namespace sphgp
