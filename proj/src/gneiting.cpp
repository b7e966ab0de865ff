#include "sphgp/gneiting.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sphgp/bessel.hpp"
#include "sphgp/errors.hpp"
#include "sphgp/simd/kernels.hpp"
#include "sphgp/sphere.hpp"

namespace sphgp {

std::string_view subfamily_name(Subfamily s) noexcept { return s == Subfamily::S1 ? "S1" : "S2"; }

Subfamily parse_subfamily(std::string_view s) {
  if (s == "S1" || s == "s1" || s == "1") return Subfamily::S1;
  if (s == "S2" || s == "s2" || s == "2") return Subfamily::S2;
  throw ArgumentError("unknown subfamily '" + std::string(s) + "' (expected S1 or S2)");
}

HyperparamVector HyperparamVector::s1(double gamma, double nu, double alpha, double beta, double sigma) {
  HyperparamVector hp;
  hp.subfamily = Subfamily::S1;
  hp.gamma = gamma;
  hp.nu = nu;
  hp.alpha = alpha;
  hp.beta = beta;
  hp.sigma = sigma;
  hp.validate();
  return hp;
}

HyperparamVector HyperparamVector::s2(double varpi, double alpha, double beta, double sigma) {
  HyperparamVector hp;
  hp.subfamily = Subfamily::S2;
  hp.varpi = varpi;
  hp.alpha = alpha;
  hp.beta = beta;
  hp.sigma = sigma;
  hp.validate();
  return hp;
}

void HyperparamVector::validate() const {
  const auto unit = [](double v) { return v > 0.0 && v <= 1.0; };
  if (subfamily == Subfamily::S1) {
    if (!unit(gamma)) throw ArgumentError("hyperparameter gamma must lie in (0, 1]");
    if (!(nu > 0.0) || !std::isfinite(nu)) throw ArgumentError("hyperparameter nu must be positive");
  } else {
    if (!(varpi > 0.0) || !std::isfinite(varpi)) throw ArgumentError("hyperparameter varpi must be positive");
  }
  if (!unit(alpha)) throw ArgumentError("hyperparameter alpha must lie in (0, 1]");
  if (!unit(beta)) throw ArgumentError("hyperparameter beta must lie in (0, 1]");
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ArgumentError("hyperparameter sigma must be nonnegative");
}

double psi(double u, double alpha, double beta) {
  if (u <= 0.0) return 1.0;
  return std::pow(1.0 + std::pow(u, alpha), beta);
}

double phi_s1(double u, double gamma, double nu) {
  if (u <= 0.0) return 1.0;
  return std::pow(1.0 + std::pow(u, gamma), -nu);
}

double phi_s2(double u, double varpi) {
  if (u <= 0.0) return 1.0;
  const double x = std::sqrt(u);
  if (x > 700.0) return 0.0;
  // log form keeps x^varpi K(x) finite for small x and large varpi
  const double log_norm = (varpi - 1.0) * std::numbers::ln2 + std::lgamma(varpi);
  const double k = bessel_k(varpi, x);
  if (k == 0.0) return 0.0;
  return std::exp(varpi * std::log(x) + std::log(k) - log_norm);
}

namespace {

double kernel_chord2(double chord2, double tau, const HyperparamVector& hp) {
  const double p = psi(tau * tau, hp.alpha, hp.beta);
  const double u = chord2 / p;
  const double ph = hp.subfamily == Subfamily::S1 ? phi_s1(u, hp.gamma, hp.nu) : phi_s2(u, hp.varpi);
  return ph / p;
}

}  // namespace

double kernel(double theta, double tau, const HyperparamVector& hp) {
  const double s = std::sin(0.5 * theta);
  return kernel_chord2(4.0 * s * s, tau, hp);
}

AngularSpectrum::AngularSpectrum(int truncation, std::vector<double> lags)
    : truncation_(truncation), lags_(std::move(lags)) {
  if (truncation < 0) throw ArgumentError("AngularSpectrum: negative truncation");
  values_.assign(static_cast<std::size_t>(truncation + 1) * lags_.size(), 0.0);
}

std::vector<double> AngularSpectrum::column(std::size_t lag) const {
  std::vector<double> out(static_cast<std::size_t>(truncation_ + 1));
  for (int n = 0; n <= truncation_; ++n) out[static_cast<std::size_t>(n)] = at(n, lag);
  return out;
}

std::vector<double> integer_lags(std::size_t count) {
  std::vector<double> lags(count);
  for (std::size_t l = 0; l < count; ++l) lags[l] = static_cast<double>(l);
  return lags;
}

namespace detail {

void check_quad_order(int truncation, int quad_order) {
  if (truncation < 0) throw ArgumentError("angular_spectrum: negative truncation");
  if (quad_order < truncation + 2)
    throw ArgumentError("angular_spectrum: quadrature order " + std::to_string(quad_order) +
                        " below truncation + 2 = " + std::to_string(truncation + 2));
}

std::vector<double> gl_nodes(int quad_order, std::vector<double>& weights) {
  GaussLegendreRule rule = gauss_legendre(static_cast<std::size_t>(quad_order));
  weights = std::move(rule.weights);
  return std::move(rule.nodes);
}

AngularSpectrum project_samples(std::span<const double> nodes, std::span<const double> weights,
                                std::span<const double> samples, std::span<const double> lags, int truncation) {
  const std::size_t Q = nodes.size();
  const std::size_t N = static_cast<std::size_t>(truncation + 1);
  // wp[n][q] = w_q P_n(u_q) / 2
  std::vector<double> wp(N * Q);
  std::vector<double> p(N);
  for (std::size_t q = 0; q < Q; ++q) {
    legendre_all(truncation, nodes[q], p);
    for (std::size_t n = 0; n < N; ++n) wp[n * Q + q] = 0.5 * weights[q] * p[n];
  }
  AngularSpectrum sp(truncation, std::vector<double>(lags.begin(), lags.end()));
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t l = 0; l < lags.size(); ++l) {
      double b = simd::dot({wp.data() + n * Q, Q}, samples.subspan(l * Q, Q));
      if (b < 0.0 && b > -1e-12) b = 0.0;
      sp.at(static_cast<int>(n), l) = b;
    }
  if (!lags.empty())
    for (int n = 0; n <= truncation; ++n)
      if (sp.at(n, 0) < 0.0)
        throw ValidityError("angular_spectrum: B[" + std::to_string(n) + ", 0] = " + std::to_string(sp.at(n, 0)) +
                            " is negative; kernel not positive definite at this precision");
  return sp;
}

}  // namespace detail

AngularSpectrum angular_spectrum(const HyperparamVector& hp, std::span<const double> lags, int truncation,
                                 int quad_order) {
  hp.validate();
  detail::check_quad_order(truncation, quad_order);
  std::vector<double> weights;
  const std::vector<double> nodes = detail::gl_nodes(quad_order, weights);
  const std::size_t Q = nodes.size();
  std::vector<double> samples(Q * lags.size());
  for (std::size_t l = 0; l < lags.size(); ++l)
    for (std::size_t q = 0; q < Q; ++q) samples[l * Q + q] = kernel_chord2(2.0 * (1.0 - nodes[q]), lags[l], hp);
  return detail::project_samples(nodes, weights, samples, lags, truncation);
}

AngularSpectrum angular_spectrum(const HyperparamVector& hp, std::span<const double> lags, int truncation) {
  return angular_spectrum(hp, lags, truncation, default_quad_order(truncation));
}

double reconstruct_kernel(const AngularSpectrum& sp, double theta, std::size_t lag_index) {
  if (lag_index >= sp.lag_count()) throw ArgumentError("reconstruct_kernel: lag index out of range");
  std::vector<double> p(static_cast<std::size_t>(sp.truncation() + 1));
  legendre_all(sp.truncation(), std::clamp(std::cos(theta), -1.0, 1.0), p);
  double s = 0.0;
  for (int n = 0; n <= sp.truncation(); ++n) s += (2.0 * n + 1.0) * sp.at(n, lag_index) * p[static_cast<std::size_t>(n)];
  return s;
}

}  // namespace sphgp
