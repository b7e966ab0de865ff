#include "sphgp/experiment.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "sphgp/errors.hpp"
#include "sphgp/rng.hpp"

namespace sphgp {

std::vector<std::vector<std::size_t>> make_folds(std::size_t replicates, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw ArgumentError("make_folds: need at least 2 folds");
  if (replicates < k)
    throw ArgumentError("make_folds: " + std::to_string(replicates) + " replicates cannot fill " + std::to_string(k) +
                        " folds");
  std::vector<std::size_t> perm(replicates);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  RandomStream rs(seed, StreamTag::Folds);
  for (std::size_t i = replicates - 1; i > 0; --i) std::swap(perm[i], perm[rs.below(i + 1)]);
  std::vector<std::vector<std::size_t>> folds(k);
  for (std::size_t i = 0; i < replicates; ++i) folds[i % k].push_back(perm[i]);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

namespace {

CoefficientField replicate_mean(const CoefficientField& c) {
  CoefficientField m(c.truncation(), c.times(), 1);
  for (std::size_t t = 0; t < c.times(); ++t) {
    auto out = m.slice(t, 0);
    for (std::size_t r = 0; r < c.replicates(); ++r) {
      const auto s = c.slice(t, r);
      for (std::size_t k = 0; k < s.size(); ++k) out[k] += s[k];
    }
    for (double& v : out) v /= static_cast<double>(c.replicates());
  }
  return m;
}

void add_trend(CoefficientField& c, const CoefficientField& trend, double sign) {
  for (std::size_t t = 0; t < c.times(); ++t)
    for (std::size_t r = 0; r < c.replicates(); ++r) {
      auto s = c.slice(t, r);
      const auto m = trend.slice(t, 0);
      for (std::size_t k = 0; k < s.size(); ++k) s[k] += sign * m[k];
    }
}

EmqeMatrix score_split(const CoefficientField& truth, const CoefficientField& observed,
                       std::span<const HyperparamVector> candidates, const FitOptions& options,
                       std::span<const std::size_t> train, std::span<const std::size_t> test, bool detrend) {
  CoefficientField train_obs = observed.select_replicates(train);
  CoefficientField test_obs = observed.select_replicates(test);
  CoefficientField trend;
  if (detrend) {
    trend = replicate_mean(train_obs);
    add_trend(train_obs, trend, -1.0);
    add_trend(test_obs, trend, -1.0);
  }
  FitOptions opts = options;
  opts.pool_replicates = true;
  const TimeVaryingEstimates est = ml2_fit(train_obs, candidates, opts);
  PosteriorSummary post = posterior_coefficients(est, test_obs);
  if (detrend) add_trend(post.means, trend, 1.0);
  return emqe(truth.select_replicates(test), post.means);
}

}  // namespace

CvReport cross_validate(const CoefficientField& truth, const CoefficientField& observed,
                        std::span<const HyperparamVector> candidates, const FitOptions& options, std::size_t k,
                        std::uint64_t seed, bool detrend) {
  if (!truth.same_shape(observed)) throw ShapeError("cross_validate: truth and observations differ in shape");
  const std::size_t R = observed.replicates();
  if (R < k) throw ArgumentError("cross_validate: need at least " + std::to_string(k) + " replicates");
  CvReport rep;
  rep.folds = k;
  rep.seed = seed;
  rep.assignment = make_folds(R, k, seed);
  for (std::size_t f = 0; f < k; ++f) {
    const auto& test = rep.assignment[f];
    std::vector<std::size_t> train;
    for (std::size_t g = 0; g < k; ++g)
      if (g != f) train.insert(train.end(), rep.assignment[g].begin(), rep.assignment[g].end());
    std::sort(train.begin(), train.end());
    rep.fold_emqe.push_back(score_split(truth, observed, candidates, options, train, test, detrend));
  }
  rep.average = rep.fold_emqe.front();
  for (std::size_t f = 1; f < k; ++f)
    for (std::size_t i = 0; i < rep.average.values.size(); ++i) rep.average.values[i] += rep.fold_emqe[f].values[i];
  for (double& v : rep.average.values) v /= static_cast<double>(k);

  std::vector<std::size_t> all(R);
  std::iota(all.begin(), all.end(), std::size_t{0});
  rep.in_sample = score_split(truth, observed, candidates, options, all, all, detrend);
  return rep;
}

SimulationRun run_simulation(const ExperimentConfig& cfg) {
  cfg.validate();
  const SimulationConfig& sc = cfg.sim;
  SimulationRun run;
  if (cfg.true_hp) {
    run.generating.assign(sc.R, *cfg.true_hp);
  } else if (cfg.hp_per_replicate) {
    run.generating = sample_prior(cfg.priors, sc.subfamily, sc.R, sc.seed, StreamTag::Generating);
  } else {
    run.generating.assign(sc.R, sample_prior(cfg.priors, sc.subfamily, 1, sc.seed, StreamTag::Generating).front());
  }
  run.candidates = sample_prior(cfg.priors, sc.subfamily, sc.M, sc.seed, StreamTag::Prior);
  run.sim = simulate_replicates(sc, run.generating);
  return run;
}

SolarRun run_solar(const ExperimentConfig& cfg) {
  cfg.validate();
  SolarRun run;
  run.effect_hp = cfg.effect_hp();
  run.candidates = sample_prior(cfg.priors, cfg.sim.subfamily, cfg.sim.M, cfg.sim.seed, StreamTag::Prior);
  run.data = generate_dataset(cfg.solar, run.effect_hp, cfg.solar_noise_sigma, cfg.sim.R, cfg.sim.seed,
                              make_grid(cfg.sim.n_lat, cfg.sim.n_lon), cfg.truncation());
  return run;
}

}  // namespace sphgp
