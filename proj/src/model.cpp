#include "sphgp/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sphgp/errors.hpp"
#include "sphgp/rng.hpp"
#include "sphgp/spectral_measure.hpp"

namespace sphgp {

double BetaPrior::mode() const noexcept { return (shape1 - 1.0) / (shape1 + shape2 - 2.0); }

void PriorSpec::validate() const {
  const auto beta_ok = [](const BetaPrior& p, const char* name) {
    if (!(p.shape1 > 0.0) || !(p.shape2 > 0.0))
      throw ArgumentError(std::string("prior ") + name + ": Beta shapes must be positive");
  };
  beta_ok(gamma, "gamma");
  beta_ok(nu, "nu");
  beta_ok(alpha, "alpha");
  beta_ok(beta, "beta");
  if (!(varpi.variance > 0.0)) throw ArgumentError("prior varpi: variance must be positive");
  if (!(sigma.variance > 0.0)) throw ArgumentError("prior sigma: variance must be positive");
}

namespace {

enum Param : std::uint64_t { kGamma = 0, kNu = 1, kAlpha = 2, kBeta = 3, kVarpi = 4, kSigma = 5 };

double draw_beta(const BetaPrior& p, std::uint64_t seed, StreamTag tag, std::size_t m, Param k) {
  RandomStream rs(seed, tag, m, k);
  // a draw of exactly 0 is invalid for every Beta-distributed parameter
  for (;;) {
    const double x = rs.beta(p.shape1, p.shape2);
    if (x > 0.0) return x;
  }
}

double draw_normal(const NormalPrior& p, std::uint64_t seed, StreamTag tag, std::size_t m, Param k, bool strict) {
  RandomStream rs(seed, tag, m, k);
  const double sd = std::sqrt(p.variance);
  for (;;) {
    const double x = rs.truncated_normal(p.mean, sd, 0.0);
    if (!strict || x > 0.0) return x;
  }
}

}  // namespace

std::vector<HyperparamVector> sample_prior(const PriorSpec& spec, Subfamily subfamily, std::size_t M,
                                           std::uint64_t seed, StreamTag tag) {
  if (M < 1) throw ArgumentError("sample_prior: M must be at least 1");
  spec.validate();
  std::vector<HyperparamVector> out(M);
  for (std::size_t m = 0; m < M; ++m) {
    HyperparamVector& hp = out[m];
    hp.subfamily = subfamily;
    if (subfamily == Subfamily::S1) {
      hp.gamma = draw_beta(spec.gamma, seed, tag, m, kGamma);
      hp.nu = draw_beta(spec.nu, seed, tag, m, kNu);
    } else {
      hp.varpi = draw_normal(spec.varpi, seed, tag, m, kVarpi, true);
    }
    hp.alpha = draw_beta(spec.alpha, seed, tag, m, kAlpha);
    hp.beta = draw_beta(spec.beta, seed, tag, m, kBeta);
    hp.sigma = draw_normal(spec.sigma, seed, tag, m, kSigma, false);
  }
  return out;
}

HyperparamVector prior_mode_s1(const PriorSpec& spec, double sigma) {
  return HyperparamVector::s1(spec.gamma.mode(), spec.nu.mode(), spec.alpha.mode(), spec.beta.mode(), sigma);
}

void TruncationScheme::validate() const {
  if (kind == Kind::PowerLaw && !(rho > 0.0 && rho < 1.0))
    throw ArgumentError("truncation scheme: rho must lie in (0, 1)");
}

int truncation_order(const TruncationScheme& scheme, std::size_t T) {
  if (T < 2) throw ArgumentError("truncation_order: T must be at least 2");
  scheme.validate();
  const double t = static_cast<double>(T);
  const double v = scheme.kind == TruncationScheme::Kind::Logarithmic ? std::round(std::log(t))
                                                                      : std::floor(std::pow(t, scheme.rho));
  return std::max(1, static_cast<int>(v));
}

void SimulationConfig::validate() const {
  if (T < 2) throw ConfigError("T", "must be at least 2");
  if (n_lat < 1) throw ConfigError("N_lat", "must be positive");
  if (n_lon < 1) throw ConfigError("N_lon", "must be positive");
  if (M < 1) throw ConfigError("M", "must be positive");
  if (R < 1) throw ConfigError("R", "must be positive");
  const int tr = truncation();
  if (static_cast<std::size_t>(tr) + 1 > n_lat)
    throw ConfigError("N_lat", "truncation order " + std::to_string(tr) + " needs N_lat >= " + std::to_string(tr + 1));
  if (static_cast<std::size_t>(2 * tr) + 1 > n_lon)
    throw ConfigError("N_lon", "truncation order " + std::to_string(tr) + " needs N_lon >= " +
                                   std::to_string(2 * tr + 1));
}

Simulation simulate_replicates(const SimulationConfig& cfg, const HyperparamVector& hp) {
  const std::vector<HyperparamVector> all(cfg.R, hp);
  return simulate_replicates(cfg, all);
}

Simulation simulate_replicates(const SimulationConfig& cfg, std::span<const HyperparamVector> per_replicate) {
  cfg.validate();
  if (per_replicate.size() != cfg.R) throw ShapeError("simulate_replicates: need one hyperparameter vector per replicate");
  const int tr = cfg.truncation();
  const std::vector<double> lags = integer_lags(cfg.T);

  Simulation sim;
  sim.latent = CoefficientField(tr, cfg.T, cfg.R);
  // Group replicates sharing a hyperparameter vector so each spectrum is projected once.
  std::vector<bool> done(cfg.R, false);
  for (std::size_t r = 0; r < cfg.R; ++r) {
    if (done[r]) continue;
    std::vector<std::size_t> group;
    for (std::size_t q = r; q < cfg.R; ++q)
      if (!done[q] && per_replicate[q] == per_replicate[r]) {
        group.push_back(q);
        done[q] = true;
      }
    AngularSpectrum sp = angular_spectrum(per_replicate[r], lags, tr);
    sample_temporal_into(TemporalCovariance(sp, cfg.T), sim.latent, group, cfg.seed, StreamTag::Latent);
    if (r == 0) sim.spectrum = std::move(sp);
  }

  const CoefficientField unit = sample_noise_coeffs(1.0, tr, cfg.T, cfg.R, cfg.seed);
  sim.observed = sim.latent;
  for (std::size_t t = 0; t < cfg.T; ++t)
    for (std::size_t r = 0; r < cfg.R; ++r) {
      const double s = per_replicate[r].sigma;
      if (s == 0.0) continue;
      auto obs = sim.observed.slice(t, r);
      const auto eps = unit.slice(t, r);
      for (std::size_t k = 0; k < obs.size(); ++k) obs[k] += s * eps[k];
    }
  return sim;
}

}  // namespace sphgp
