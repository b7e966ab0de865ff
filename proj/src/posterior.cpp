#include "sphgp/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "sphgp/errors.hpp"
#include "sphgp/simd/kernels.hpp"

namespace sphgp {

double posterior_mean_coeff(double y, double bn, double sigma2) { return y * shrinkage_factor(bn, sigma2); }

double shrinkage_factor(double bn, double sigma2) {
  if (!(bn >= 0.0) || !(sigma2 >= 0.0)) throw ArgumentError("posterior: variances must be nonnegative");
  const double v = bn + sigma2;
  if (v == 0.0) throw DegenerateError("posterior: prior and noise variances are both zero");
  return bn / v;
}

double posterior_eigenvalue(double bn, double sigma2) {
  if (!(bn >= 0.0) || !(sigma2 >= 0.0)) throw ArgumentError("posterior: variances must be nonnegative");
  const double v = bn + sigma2;
  if (v == 0.0) throw DegenerateError("posterior: prior and noise variances are both zero");
  return bn * sigma2 / v;
}

VarianceDecomposition variance_decomposition(std::span<const double> bn, double sigma2) {
  VarianceDecomposition d;
  for (std::size_t n = 0; n < bn.size(); ++n) {
    const double b = bn[n];
    const double mult = 2.0 * static_cast<double>(n) + 1.0;
    d.total += mult * b;
    const double v = b + sigma2;
    if (v == 0.0) continue;
    d.residual += mult * b * sigma2 / v;
    d.explained += mult * b * b / v;
  }
  return d;
}

namespace {

// B[n, 0] per selected candidate, computed once per distinct candidate index.
std::vector<std::vector<double>> selected_spectra(const TimeVaryingEstimates& est) {
  std::map<std::size_t, std::vector<double>> cache;
  std::vector<std::vector<double>> out(est.times);
  for (std::size_t t = 0; t < est.times; ++t) {
    auto it = cache.find(est.index[t]);
    if (it == cache.end())
      it = cache.emplace(est.index[t], lag0_spectrum(est.selected[t], est.truncation).eigenvalues).first;
    out[t] = it->second;
  }
  return out;
}

}  // namespace

PosteriorSummary posterior_coefficients(const TimeVaryingEstimates& estimates, const CoefficientField& obs) {
  if (estimates.truncation != obs.truncation() || estimates.times != obs.times())
    throw ShapeError("posterior_coefficients: estimates do not match observation shape");
  const int tr = obs.truncation();
  PosteriorSummary s;
  s.truncation = tr;
  s.times = obs.times();
  s.prior = selected_spectra(estimates);
  s.means = CoefficientField(tr, obs.times(), obs.replicates());
  s.eigenvalues.resize(s.times);
  s.shrinkage.resize(s.times);
  s.variance.resize(s.times);
  std::vector<double> factor(obs.per_slice());
  for (std::size_t t = 0; t < s.times; ++t) {
    const double s2 = estimates.selected[t].sigma * estimates.selected[t].sigma;
    const auto& b = s.prior[t];
    s.eigenvalues[t].resize(b.size());
    s.shrinkage[t].resize(b.size());
    for (int n = 0; n <= tr; ++n) {
      const auto un = static_cast<std::size_t>(n);
      s.eigenvalues[t][un] = posterior_eigenvalue(b[un], s2);
      s.shrinkage[t][un] = shrinkage_factor(b[un], s2);
      for (int j = 1; j <= 2 * n + 1; ++j) factor[HarmonicIndex{n, j}.flat()] = s.shrinkage[t][un];
    }
    s.variance[t] = variance_decomposition(b, s2);
    for (std::size_t r = 0; r < obs.replicates(); ++r) {
      const auto y = obs.slice(t, r);
      auto out = s.means.slice(t, r);
      for (std::size_t k = 0; k < y.size(); ++k) out[k] = factor[k] * y[k];
    }
  }
  return s;
}

std::vector<FieldSample> posterior_field(const PosteriorSummary& summary, const GridPtr& grid, std::size_t replicate) {
  if (replicate >= summary.means.replicates()) throw ArgumentError("posterior_field: replicate out of range");
  const SphericalTransform tf(grid, summary.truncation);
  std::vector<FieldSample> out;
  out.reserve(summary.times);
  for (std::size_t t = 0; t < summary.times; ++t) {
    FieldSample f(grid);
    tf.synthesize(summary.means.slice(t, replicate), f.values);
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<FieldSample> posterior_field(const TimeVaryingEstimates& estimates, const CoefficientField& obs,
                                         const GridPtr& grid, std::size_t replicate) {
  return posterior_field(posterior_coefficients(estimates, obs), grid, replicate);
}

double EmqeMatrix::mean() const {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

EmqeMatrix emqe(const CoefficientField& latent, const CoefficientField& posterior_means) {
  if (!latent.same_shape(posterior_means)) throw ShapeError("emqe: latent and posterior shapes differ");
  const int tr = latent.truncation();
  EmqeMatrix e;
  e.truncation = tr;
  e.times = latent.times();
  e.values.assign(static_cast<std::size_t>(tr + 1) * e.times, 0.0);
  const double R = static_cast<double>(latent.replicates());
  std::vector<double> diff(latent.per_slice());
  for (std::size_t t = 0; t < e.times; ++t) {
    for (std::size_t r = 0; r < latent.replicates(); ++r) {
      const auto z = latent.slice(t, r);
      const auto p = posterior_means.slice(t, r);
      for (std::size_t k = 0; k < diff.size(); ++k) diff[k] = p[k] - z[k];
      for (int n = 0; n <= tr; ++n)
        e.values[static_cast<std::size_t>(n) * e.times + t] +=
            simd::sum_squares(std::span<const double>(diff).subspan(static_cast<std::size_t>(n * n),
                                                                    static_cast<std::size_t>(2 * n + 1)));
    }
    for (int n = 0; n <= tr; ++n) e.values[static_cast<std::size_t>(n) * e.times + t] /= R * (2.0 * n + 1.0);
  }
  return e;
}

BiasTerms bias_terms(const CoefficientField& latent, const CoefficientField& observed, const PosteriorSummary& summary) {
  if (!latent.same_shape(observed) || !latent.same_shape(summary.means))
    throw ShapeError("bias_terms: latent, observed and posterior shapes differ");
  const int tr = latent.truncation();
  BiasTerms b;
  b.times = latent.times();
  b.replicates = latent.replicates();
  b.s1.resize(b.times * b.replicates);
  b.s2.resize(b.times * b.replicates);
  b.error.resize(b.times * b.replicates);
  b.s1_mean.assign(b.times, 0.0);
  b.s2_mean.assign(b.times, 0.0);
  for (std::size_t t = 0; t < b.times; ++t) {
    for (std::size_t r = 0; r < b.replicates; ++r) {
      const auto z = latent.slice(t, r);
      const auto y = observed.slice(t, r);
      const auto p = summary.means.slice(t, r);
      double a1 = 0.0, a2 = 0.0, ae = 0.0;
      for (int n = 0; n <= tr; ++n) {
        const double f = summary.shrinkage_at(t, n);
        for (int j = 1; j <= 2 * n + 1; ++j) {
          const std::size_t k = HarmonicIndex{n, j}.flat();
          const double d1 = (1.0 - f) * z[k];
          const double d2 = f * (z[k] - y[k]);
          const double de = z[k] - p[k];
          a1 += d1 * d1;
          a2 += d2 * d2;
          ae += de * de;
        }
      }
      const std::size_t i = t * b.replicates + r;
      b.s1[i] = std::sqrt(a1);
      b.s2[i] = std::sqrt(a2);
      b.error[i] = std::sqrt(ae);
      b.s1_mean[t] += b.s1[i];
      b.s2_mean[t] += b.s2[i];
    }
    b.s1_mean[t] /= static_cast<double>(b.replicates);
    b.s2_mean[t] /= static_cast<double>(b.replicates);
  }
  return b;
}

CorrelationCurves time_correlation(const AngularSpectrum& sp_true, const AngularSpectrum& sp_post, int n) {
  if (sp_true.lags() != sp_post.lags()) throw ShapeError("time_correlation: lag grids differ");
  if (sp_true.lag_count() == 0) throw ShapeError("time_correlation: empty lag grid");
  if (n < 0 || n > sp_true.truncation() || n > sp_post.truncation())
    throw ArgumentError("time_correlation: degree out of range");
  const double b0 = sp_true.at(n, 0);
  const double p0 = sp_post.at(n, 0);
  if (b0 == 0.0 || p0 == 0.0)
    throw DegenerateError("time_correlation: zero lag-0 variance at degree " + std::to_string(n));
  CorrelationCurves c;
  c.lags = sp_true.lags();
  for (std::size_t l = 0; l < c.lags.size(); ++l) {
    c.theoretical.push_back(sp_true.at(n, l) / b0);
    c.posterior.push_back(sp_post.at(n, l) / p0);
  }
  return c;
}

HyperparamVector time_averaged_estimate(const TimeVaryingEstimates& estimates) {
  if (estimates.selected.empty()) throw ArgumentError("time_averaged_estimate: no estimates");
  HyperparamVector avg = estimates.selected.front();
  avg.gamma = avg.nu = avg.varpi = avg.alpha = avg.beta = avg.sigma = 0.0;
  for (const auto& hp : estimates.selected) {
    if (hp.subfamily != avg.subfamily) throw ArgumentError("time_averaged_estimate: mixed subfamilies");
    avg.gamma += hp.gamma;
    avg.nu += hp.nu;
    avg.varpi += hp.varpi;
    avg.alpha += hp.alpha;
    avg.beta += hp.beta;
    avg.sigma += hp.sigma;
  }
  const double T = static_cast<double>(estimates.selected.size());
  avg.gamma /= T;
  avg.nu /= T;
  avg.varpi /= T;
  avg.alpha /= T;
  avg.beta /= T;
  avg.sigma /= T;
  return avg;
}

std::vector<double> per_time_correlation(const TimeVaryingEstimates& estimates, std::span<const double> lags, int n) {
  if (n < 0 || n > estimates.truncation) throw ArgumentError("per_time_correlation: degree out of range");
  std::map<std::size_t, std::vector<double>> rho;  // candidate index -> curve
  for (std::size_t t = 0; t < estimates.times; ++t) {
    const std::size_t m = estimates.index[t];
    if (rho.count(m)) continue;
    const AngularSpectrum sp = angular_spectrum(estimates.selected[t], lags, estimates.truncation);
    const double b0 = sp.at(n, 0);
    if (b0 == 0.0) throw DegenerateError("per_time_correlation: zero lag-0 variance at degree " + std::to_string(n));
    std::vector<double> curve(lags.size());
    for (std::size_t l = 0; l < lags.size(); ++l) curve[l] = sp.at(n, l) / b0;
    rho.emplace(m, std::move(curve));
  }
  std::vector<double> out(lags.size(), 0.0);
  for (std::size_t l = 0; l < lags.size(); ++l) {
    const auto span_t = static_cast<std::size_t>(std::max(1.0, static_cast<double>(estimates.times) - lags[l]));
    std::size_t count = 0;
    for (std::size_t t = 0; t < std::min(span_t, estimates.times); ++t) {
      out[l] += rho.at(estimates.index[t])[l];
      ++count;
    }
    out[l] /= static_cast<double>(count);
  }
  return out;
}

}  // namespace sphgp
