#pragma once

// Conjugate posterior per Laplace-Beltrami eigenspace and the diagnostics
// built on it. All norms are taken in coefficient space, which equals the
// L2 norm on the sphere under the normalized measure.

#include <span>
#include <vector>

#include "sphgp/empirical_bayes.hpp"
#include "sphgp/gneiting.hpp"
#include "sphgp/sphere.hpp"

namespace sphgp {

// y B / (B + sigma2). Throws DegenerateError when B = sigma2 = 0.
double posterior_mean_coeff(double y, double bn, double sigma2);
// B sigma2 / (B + sigma2).
double posterior_eigenvalue(double bn, double sigma2);
// B / (B + sigma2).
double shrinkage_factor(double bn, double sigma2);

struct VarianceDecomposition {
  double total = 0.0;
  double residual = 0.0;
  double explained = 0.0;
};

// Sums over n of (2n+1) B_n, (2n+1) B_n s2 / (B_n + s2) and (2n+1) B_n^2 / (B_n + s2).
VarianceDecomposition variance_decomposition(std::span<const double> bn, double sigma2);

struct PosteriorSummary {
  int truncation = 0;
  std::size_t times = 0;
  CoefficientField means;                        // same shape as the observations
  std::vector<std::vector<double>> prior;        // per t: B[n, 0; selected hp]
  std::vector<std::vector<double>> eigenvalues;  // per t: posterior lambda_n
  std::vector<std::vector<double>> shrinkage;    // per t: B / (B + sigma^2)
  std::vector<VarianceDecomposition> variance;   // per t

  double shrinkage_at(std::size_t t, int n) const { return shrinkage[t][static_cast<std::size_t>(n)]; }
};

PosteriorSummary posterior_coefficients(const TimeVaryingEstimates& estimates, const CoefficientField& obs);

// Posterior mean field of one replicate at every time, synthesized on `grid`.
std::vector<FieldSample> posterior_field(const PosteriorSummary& summary, const GridPtr& grid, std::size_t replicate = 0);
std::vector<FieldSample> posterior_field(const TimeVaryingEstimates& estimates, const CoefficientField& obs,
                                         const GridPtr& grid, std::size_t replicate = 0);

// Row-major (TR + 1) x T.
struct EmqeMatrix {
  int truncation = 0;
  std::size_t times = 0;
  std::vector<double> values;

  double at(int n, std::size_t t) const { return values[static_cast<std::size_t>(n) * times + t]; }
  double mean() const;
};

// E[n, t] = mean over r of sum_j (post - latent)^2 / (2n + 1).
EmqeMatrix emqe(const CoefficientField& latent, const CoefficientField& posterior_means);

// Per (t, r), row-major T x R.
struct BiasTerms {
  std::size_t times = 0;
  std::size_t replicates = 0;
  std::vector<double> s1;     // || latent - shrink(latent) ||
  std::vector<double> s2;     // || shrink(latent - observed) ||
  std::vector<double> error;  // || latent - posterior mean ||
  std::vector<double> s1_mean;
  std::vector<double> s2_mean;

  double s1_at(std::size_t t, std::size_t r) const { return s1[t * replicates + r]; }
  double s2_at(std::size_t t, std::size_t r) const { return s2[t * replicates + r]; }
  double error_at(std::size_t t, std::size_t r) const { return error[t * replicates + r]; }
};

BiasTerms bias_terms(const CoefficientField& latent, const CoefficientField& observed, const PosteriorSummary& summary);

struct CorrelationCurves {
  std::vector<double> lags;
  std::vector<double> theoretical;
  std::vector<double> posterior;
};

// rho(l) = B[n, l] / B[n, 0] for both spectra. Lag grids must match; a zero
// lag-0 value throws DegenerateError.
CorrelationCurves time_correlation(const AngularSpectrum& sp_true, const AngularSpectrum& sp_post, int n);

// Componentwise mean of the selected hyperparameters over t. All selections
// must share one subfamily.
HyperparamVector time_averaged_estimate(const TimeVaryingEstimates& estimates);

// Alternative posterior curve: mean over t in [0, T - l) of the selected
// hyperparameters' own correlation rho_{hp(t)}(l).
std::vector<double> per_time_correlation(const TimeVaryingEstimates& estimates, std::span<const double> lags, int n);

}  // namespace sphgp
