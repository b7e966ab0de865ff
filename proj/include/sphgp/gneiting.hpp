#pragma once

// Gneiting space-time covariance restricted to the unit sphere, with the two
// hyperparameter subfamilies used throughout the library:
//
//   C(theta, tau) = psi(tau^2)^{-1} phi([2 sin(theta/2)]^2 / psi(tau^2))
//   psi(u) = (1 + u^alpha)^beta
//   S1: phi(u) = (1 + u^gamma)^{-nu}                          (Cauchy type)
//   S2: phi(u) = (2^{varpi-1} Gamma(varpi))^{-1} u^{varpi/2} K_varpi(u^{1/2})  (Matern type)
//
// The latent field variance is fixed to 1, so C(0, 0) = 1. The scale
// constants a and c are fixed to 1. The exponent of psi is d/2 with d = 2.
//
// The angular spectrum B[n, l] holds the Legendre coefficients of the kernel
// at temporal lag tau_l, normalized so that
//   C(theta, tau_l) = sum_n (2n+1) B[n, l] P_n(cos theta).

#include <cmath>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sphgp {

enum class Subfamily { S1, S2 };

std::string_view subfamily_name(Subfamily s) noexcept;
Subfamily parse_subfamily(std::string_view s);

struct HyperparamVector {
  Subfamily subfamily = Subfamily::S1;
  double gamma = 0.5;  // S1 only, (0, 1]
  double nu = 0.5;     // S1 only, > 0
  double varpi = 1.0;  // S2 only, > 0
  double alpha = 0.5;  // (0, 1]
  double beta = 0.5;   // (0, 1]
  double sigma = 0.0;  // observation-noise scale, >= 0

  static HyperparamVector s1(double gamma, double nu, double alpha, double beta, double sigma);
  static HyperparamVector s2(double varpi, double alpha, double beta, double sigma);

  // Throws ArgumentError naming the offending parameter.
  void validate() const;
  bool operator==(const HyperparamVector&) const = default;
};

double psi(double u, double alpha, double beta);
double phi_s1(double u, double gamma, double nu);
double phi_s2(double u, double varpi);

// Latent covariance at great-circle angle theta in [0, pi] and lag tau.
double kernel(double theta, double tau, const HyperparamVector& hp);

class AngularSpectrum {
 public:
  AngularSpectrum() = default;
  AngularSpectrum(int truncation, std::vector<double> lags);

  int truncation() const noexcept { return truncation_; }
  std::size_t lag_count() const noexcept { return lags_.size(); }
  const std::vector<double>& lags() const noexcept { return lags_; }

  double& at(int n, std::size_t lag) { return values_[static_cast<std::size_t>(n) * lags_.size() + lag]; }
  double at(int n, std::size_t lag) const { return values_[static_cast<std::size_t>(n) * lags_.size() + lag]; }
  // B[n, .] over all lags.
  std::span<const double> row(int n) const {
    return {values_.data() + static_cast<std::size_t>(n) * lags_.size(), lags_.size()};
  }
  // B[., lag] as a new vector of length truncation + 1.
  std::vector<double> column(std::size_t lag) const;

 private:
  int truncation_ = 0;
  std::vector<double> lags_;
  std::vector<double> values_;  // (truncation + 1) x lags
};

// Integer lags 0, 1, ..., count - 1.
std::vector<double> integer_lags(std::size_t count);

inline int default_quad_order(int truncation) noexcept { return 2 * truncation + 32; }

// Funk-Hecke projection by Gauss-Legendre quadrature of the given order.
// quad_order must be >= truncation + 2. Entries in (-1e-12, 0) are clamped to
// zero; a more negative B[n, 0] throws ValidityError.
AngularSpectrum angular_spectrum(const HyperparamVector& hp, std::span<const double> lags, int truncation,
                                 int quad_order);
AngularSpectrum angular_spectrum(const HyperparamVector& hp, std::span<const double> lags, int truncation);

// Generic projection of any zonal space-time function f(theta, tau).
template <class F>
AngularSpectrum project_zonal(F&& f, std::span<const double> lags, int truncation, int quad_order);

// sum_{n <= TR} (2n+1) B[n, lag] P_n(cos theta)
double reconstruct_kernel(const AngularSpectrum& sp, double theta, std::size_t lag_index);

namespace detail {
AngularSpectrum project_samples(std::span<const double> nodes, std::span<const double> weights,
                                std::span<const double> samples, std::span<const double> lags, int truncation);
void check_quad_order(int truncation, int quad_order);
std::vector<double> gl_nodes(int quad_order, std::vector<double>& weights);
}  // namespace detail

template <class F>
AngularSpectrum project_zonal(F&& f, std::span<const double> lags, int truncation, int quad_order) {
  detail::check_quad_order(truncation, quad_order);
  std::vector<double> weights;
  const std::vector<double> nodes = detail::gl_nodes(quad_order, weights);
  std::vector<double> samples(nodes.size() * lags.size());
  for (std::size_t l = 0; l < lags.size(); ++l)
    for (std::size_t q = 0; q < nodes.size(); ++q) samples[l * nodes.size() + q] = f(std::acos(nodes[q]), lags[l]);
  return detail::project_samples(nodes, weights, samples, lags, truncation);
}

}  // namespace sphgp
