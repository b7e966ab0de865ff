#include "sphgp/spectral_measure.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "sphgp/errors.hpp"
#include "sphgp/simd/kernels.hpp"

namespace sphgp {

double TruncatedSpectrum::trace() const noexcept {
  double s = 0.0;
  for (std::size_t n = 0; n < eigenvalues.size(); ++n) s += (2.0 * static_cast<double>(n) + 1.0) * eigenvalues[n];
  return s;
}

TruncatedSpectrum TruncatedSpectrum::from_lag0(const AngularSpectrum& sp) {
  if (sp.lag_count() == 0) throw ArgumentError("TruncatedSpectrum: spectrum has no lags");
  return {sp.column(0)};
}

TemporalCovariance::TemporalCovariance(const AngularSpectrum& sp, std::size_t times)
    : truncation_(sp.truncation()), times_(times) {
  if (times == 0) throw ArgumentError("TemporalCovariance: need at least one time point");
  if (sp.lag_count() < times)
    throw ArgumentError("TemporalCovariance: spectrum has " + std::to_string(sp.lag_count()) + " lags, need " +
                        std::to_string(times));
  rows_.resize(static_cast<std::size_t>(truncation_ + 1));
  for (int n = 0; n <= truncation_; ++n) {
    const auto row = sp.row(n);
    rows_[static_cast<std::size_t>(n)].assign(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(times));
  }
}

Eigen::MatrixXd TemporalCovariance::matrix(int n) const {
  const auto& row = rows_.at(static_cast<std::size_t>(n));
  const auto T = static_cast<Eigen::Index>(times_);
  Eigen::MatrixXd k(T, T);
  for (Eigen::Index i = 0; i < T; ++i)
    for (Eigen::Index j = 0; j < T; ++j) k(i, j) = row[static_cast<std::size_t>(std::abs(i - j))];
  return k;
}

Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& k) {
  const double scale = k.trace() / static_cast<double>(k.rows());
  constexpr double kLadder[] = {0.0, 1e-12, 1e-10, 1e-8};
  for (double eps : kLadder) {
    Eigen::MatrixXd m = k;
    m.diagonal().array() += eps * scale;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() == Eigen::Success) return llt.matrixL();
  }
  throw ValidityError("temporal covariance is not positive definite after jitter");
}

double log_density(std::span<const double> coeffs, const TruncatedSpectrum& spectrum) {
  const int tr = spectrum.truncation();
  if (coeffs.size() != coefficient_count(tr)) throw ShapeError("log_density: coefficient count does not match spectrum");
  const double log2pi = std::log(2.0 * std::numbers::pi);
  double total = 0.0;
  for (int n = 0; n <= tr; ++n) {
    const double lam = spectrum.eigenvalues[static_cast<std::size_t>(n)];
    const auto block = coeffs.subspan(static_cast<std::size_t>(n * n), static_cast<std::size_t>(2 * n + 1));
    const double ss = simd::sum_squares(block);
    if (lam < 0.0) throw DegenerateError("log_density: negative eigenvalue at degree " + std::to_string(n));
    if (lam == 0.0) {
      if (ss != 0.0)
        throw DegenerateError("log_density: nonzero coefficient at degree " + std::to_string(n) +
                              " with zero eigenvalue");
      continue;
    }
    total += -0.5 * (2.0 * n + 1.0) * (log2pi + std::log(lam)) - ss / (2.0 * lam);
  }
  return total;
}

double fredholm_determinant(const TruncatedSpectrum& spectrum, double omega) {
  double det = 1.0;
  for (std::size_t n = 0; n < spectrum.eigenvalues.size(); ++n) {
    const double f = 1.0 - omega * spectrum.eigenvalues[n];
    if (f == 0.0) throw SingularityError("fredholm_determinant: omega * lambda_" + std::to_string(n) + " = 1");
    det *= std::pow(f, static_cast<int>(2 * n + 1));
  }
  return det;
}

double fredholm_determinant_series(const TruncatedSpectrum& spectrum, double omega) {
  if (!(std::abs(omega) * spectrum.trace() < 1.0))
    throw ArgumentError("fredholm_determinant_series: |omega| * trace must be below 1");
  // log det = -sum_k omega^k tr(A^k) / k
  std::vector<double> powers(spectrum.eigenvalues.size(), 1.0);
  double log_det = 0.0;
  double omega_k = 1.0;
  for (int k = 1; k < 100000; ++k) {
    omega_k *= omega;
    double tr = 0.0;
    for (std::size_t n = 0; n < powers.size(); ++n) {
      powers[n] *= spectrum.eigenvalues[n];
      tr += (2.0 * static_cast<double>(n) + 1.0) * powers[n];
    }
    const double inc = omega_k * tr / k;
    log_det -= inc;
    if (std::abs(inc) < 1e-15) break;
  }
  return std::exp(log_det);
}

void sample_temporal_into(const TemporalCovariance& tc, CoefficientField& out, std::span<const std::size_t> replicates,
                          std::uint64_t seed, StreamTag tag) {
  const int tr = tc.truncation();
  const std::size_t T = tc.times();
  if (out.truncation() != tr || out.times() != T) throw ShapeError("sample_temporal_into: output shape mismatch");
  for (std::size_t r : replicates)
    if (r >= out.replicates()) throw ShapeError("sample_temporal_into: replicate index out of range");
  const std::size_t R = replicates.size();
  for (int n = 0; n <= tr; ++n) {
    if (tc.variance(n) == 0.0) continue;
    const Eigen::MatrixXd L = cholesky_with_jitter(tc.matrix(n));
    const std::size_t orders = static_cast<std::size_t>(2 * n + 1);
    Eigen::MatrixXd g(static_cast<Eigen::Index>(T), static_cast<Eigen::Index>(orders * R));
    for (std::size_t j = 0; j < orders; ++j)
      for (std::size_t i = 0; i < R; ++i) {
        RandomStream rs(seed, tag, static_cast<std::uint64_t>(n), j + 1, replicates[i]);
        const auto c = static_cast<Eigen::Index>(j * R + i);
        for (std::size_t t = 0; t < T; ++t) g(static_cast<Eigen::Index>(t), c) = rs.normal();
      }
    // Column-at-a-time product in fixed order, so a replicate's draw does not
    // depend on which other replicates share its spectrum.
    for (std::size_t j = 0; j < orders; ++j)
      for (std::size_t i = 0; i < R; ++i) {
        const auto c = static_cast<Eigen::Index>(j * R + i);
        for (std::size_t t = 0; t < T; ++t) {
          const auto ti = static_cast<Eigen::Index>(t);
          double acc = 0.0;
          for (Eigen::Index s = 0; s <= ti; ++s) acc += L(ti, s) * g(s, c);
          out.at(n, static_cast<int>(j + 1), t, replicates[i]) = acc;
        }
      }
  }
}

CoefficientField sample_temporal(const TemporalCovariance& tc, std::size_t replicates, std::uint64_t seed,
                                 StreamTag tag) {
  CoefficientField out(tc.truncation(), tc.times(), replicates);
  std::vector<std::size_t> ids(replicates);
  for (std::size_t r = 0; r < replicates; ++r) ids[r] = r;
  sample_temporal_into(tc, out, ids, seed, tag);
  return out;
}

CoefficientField sample_noise_coeffs(double sigma, int truncation, std::size_t times, std::size_t replicates,
                                     std::uint64_t seed, StreamTag tag) {
  if (!(sigma >= 0.0)) throw ArgumentError("sample_noise_coeffs: sigma must be nonnegative");
  CoefficientField out(truncation, times, replicates);
  if (sigma == 0.0) return out;
  for (int n = 0; n <= truncation; ++n)
    for (int j = 1; j <= 2 * n + 1; ++j)
      for (std::size_t r = 0; r < replicates; ++r) {
        RandomStream rs(seed, tag, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(j), r);
        for (std::size_t t = 0; t < times; ++t) out.at(n, j, t, r) = sigma * rs.normal();
      }
  return out;
}

}  // namespace sphgp
