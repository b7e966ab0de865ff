#pragma once

// Truncated product-measure view of a centered isotropic Gaussian field: the
// harmonic coefficients are independent with variance lambda_n (multiplicity
// 2n+1), and over time each coefficient is a stationary Gaussian process whose
// covariance is the Toeplitz matrix of the angular spectrum row B[n, |i-j|].

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "sphgp/gneiting.hpp"
#include "sphgp/rng.hpp"
#include "sphgp/sphere.hpp"

namespace sphgp {

struct TruncatedSpectrum {
  std::vector<double> eigenvalues;  // lambda_n for n = 0..TR, each with multiplicity 2n+1

  int truncation() const noexcept { return static_cast<int>(eigenvalues.size()) - 1; }
  // sum_n (2n+1) lambda_n
  double trace() const noexcept;
  static TruncatedSpectrum from_lag0(const AngularSpectrum& sp);
};

class TemporalCovariance {
 public:
  // Uses lags 0..times-1 of the spectrum; throws ArgumentError if the spectrum has fewer lags.
  TemporalCovariance(const AngularSpectrum& sp, std::size_t times);

  int truncation() const noexcept { return truncation_; }
  std::size_t times() const noexcept { return times_; }
  // K_n[i, j] = B[n, |i - j|]
  Eigen::MatrixXd matrix(int n) const;
  double variance(int n) const { return rows_[static_cast<std::size_t>(n)][0]; }

 private:
  int truncation_;
  std::size_t times_;
  std::vector<std::vector<double>> rows_;
};

// Lower Cholesky factor, retrying with diagonal jitter 1e-12, 1e-10, 1e-8 times
// trace/T. Throws ValidityError once the ladder is exhausted.
Eigen::MatrixXd cholesky_with_jitter(const Eigen::MatrixXd& k);

// sum_n sum_j [-1/2 log(2 pi lambda_n) - y_{n,j}^2 / (2 lambda_n)] over one
// flat coefficient slice. Degrees with lambda_n = 0 contribute nothing when
// their coefficients are exactly zero and throw DegenerateError otherwise.
double log_density(std::span<const double> coeffs, const TruncatedSpectrum& spectrum);

// det(I - omega A) = prod_n (1 - omega lambda_n)^(2n+1). Throws SingularityError
// when some omega lambda_n == 1.
double fredholm_determinant(const TruncatedSpectrum& spectrum, double omega);
// exp(-sum_k omega^k tr(A^k) / k), summed until the increment drops below 1e-15.
// Requires |omega| * trace < 1; throws ArgumentError otherwise.
double fredholm_determinant_series(const TruncatedSpectrum& spectrum, double omega);

// coeffs[n, j, :, r] = L_n g with g standard normal from stream (seed, tag, n, j, r).
CoefficientField sample_temporal(const TemporalCovariance& tc, std::size_t replicates, std::uint64_t seed,
                                 StreamTag tag = StreamTag::Latent);
// Same streams, written only into the listed replicates of `out`.
void sample_temporal_into(const TemporalCovariance& tc, CoefficientField& out, std::span<const std::size_t> replicates,
                          std::uint64_t seed, StreamTag tag = StreamTag::Latent);

// i.i.d. N(0, sigma^2) per (n, j, t, r).
CoefficientField sample_noise_coeffs(double sigma, int truncation, std::size_t times, std::size_t replicates,
                                     std::uint64_t seed, StreamTag tag = StreamTag::Noise);

}  // namespace sphgp
