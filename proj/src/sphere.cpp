#include "sphgp/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "sphgp/errors.hpp"
#include "sphgp/simd/kernels.hpp"

namespace sphgp {

GaussLegendreRule gauss_legendre(std::size_t order) {
  if (order == 0) throw ArgumentError("gauss_legendre: order must be positive");
  const std::size_t n = order;
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess for the i-th largest root, then Newton.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
        p0 = p1;
        p1 = p2;
      }
      dp = nd * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16) break;
    }
    // Recompute the derivative at the converged root for the weight.
    double p0 = 1.0, p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double kd = static_cast<double>(k);
      const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
      p0 = p1;
      p1 = p2;
    }
    dp = nd * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[n - 1 - i] = x;
    rule.nodes[i] = -x;
    rule.weights[n - 1 - i] = w;
    rule.weights[i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

SphericalGrid build_grid(std::size_t n_lat, std::size_t n_lon) {
  if (n_lat < 1 || n_lon < 1) throw ArgumentError("build_grid: node counts must be positive");
  const GaussLegendreRule rule = gauss_legendre(n_lat);
  SphericalGrid g;
  g.colatitudes.resize(n_lat);
  std::vector<double> lat_w(n_lat);
  // Ascending u means descending colatitude; flip to keep colatitudes increasing.
  for (std::size_t i = 0; i < n_lat; ++i) {
    const std::size_t src = n_lat - 1 - i;
    g.colatitudes[i] = std::acos(rule.nodes[src]);
    lat_w[i] = rule.weights[src];
  }
  double lat_sum = 0.0;
  for (double w : lat_w) lat_sum += w;
  g.longitudes.resize(n_lon);
  for (std::size_t k = 0; k < n_lon; ++k)
    g.longitudes[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_lon);
  g.weights.resize(n_lat * n_lon);
  for (std::size_t i = 0; i < n_lat; ++i)
    for (std::size_t k = 0; k < n_lon; ++k)
      g.weights[i * n_lon + k] = lat_w[i] / (lat_sum * static_cast<double>(n_lon));
  return g;
}

GridPtr make_grid(std::size_t n_lat, std::size_t n_lon) {
  return std::make_shared<const SphericalGrid>(build_grid(n_lat, n_lon));
}

HarmonicIndex HarmonicIndex::from_flat(std::size_t k) noexcept {
  int n = static_cast<int>(std::sqrt(static_cast<double>(k)));
  while (static_cast<std::size_t>((n + 1) * (n + 1)) <= k) ++n;
  while (static_cast<std::size_t>(n * n) > k) --n;
  return {n, static_cast<int>(k) - n * n + 1};
}

double cos_angle(SpherePoint x, SpherePoint y) noexcept {
  const double c = std::cos(x.colat) * std::cos(y.colat) +
                   std::sin(x.colat) * std::sin(y.colat) * std::cos(x.lon - y.lon);
  return std::clamp(c, -1.0, 1.0);
}

double legendre(int n, double u) {
  if (!(std::abs(u) <= 1.0)) throw DomainError("legendre: |u| must not exceed 1");
  if (n < 0) throw ArgumentError("legendre: negative degree");
  if (n == 0) return 1.0;
  double p0 = 1.0, p1 = u;
  for (int k = 1; k < n; ++k) {
    const double p2 = ((2.0 * k + 1.0) * u * p1 - k * p0) / (k + 1.0);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

void legendre_all(int nmax, double u, std::span<double> out) {
  if (!(std::abs(u) <= 1.0)) throw DomainError("legendre: |u| must not exceed 1");
  if (out.size() < static_cast<std::size_t>(nmax + 1)) throw ShapeError("legendre_all: output too small");
  out[0] = 1.0;
  if (nmax >= 1) out[1] = u;
  for (int k = 1; k < nmax; ++k) out[k + 1] = ((2.0 * k + 1.0) * u * out[k] - k * out[k - 1]) / (k + 1.0);
}

void assoc_legendre_normalized(int nmax, double u, std::span<double> out) {
  const auto idx = [](int n, int m) { return static_cast<std::size_t>(n * (n + 1) / 2 + m); };
  if (out.size() < idx(nmax, nmax) + 1) throw ShapeError("assoc_legendre_normalized: output too small");
  const double s = std::sqrt(std::max(0.0, (1.0 - u) * (1.0 + u)));
  out[0] = 1.0;
  // Sectoral terms: Pbar_m^m = sqrt((2m+1)/(2m)) s Pbar_{m-1}^{m-1}.
  for (int m = 1; m <= nmax; ++m) out[idx(m, m)] = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * out[idx(m - 1, m - 1)];
  for (int m = 0; m < nmax; ++m) {
    out[idx(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * u * out[idx(m, m)];
    for (int n = m + 2; n <= nmax; ++n) {
      const double nn = n, mm = m;
      const double a = std::sqrt((4.0 * nn * nn - 1.0) / (nn * nn - mm * mm));
      const double b = std::sqrt(((nn - 1.0) * (nn - 1.0) - mm * mm) / (4.0 * (nn - 1.0) * (nn - 1.0) - 1.0));
      out[idx(n, m)] = a * (u * out[idx(n - 1, m)] - b * out[idx(n - 2, m)]);
    }
  }
}

namespace {

void harmonics_from_legendre(int truncation, std::span<const double> pbar, double lon, std::span<double> out) {
  const auto idx = [](int n, int m) { return static_cast<std::size_t>(n * (n + 1) / 2 + m); };
  for (int n = 0; n <= truncation; ++n) {
    const std::size_t base = static_cast<std::size_t>(n * n);
    out[base + static_cast<std::size_t>(n)] = pbar[idx(n, 0)];
    for (int m = 1; m <= n; ++m) {
      const double p = std::numbers::sqrt2 * pbar[idx(n, m)];
      out[base + static_cast<std::size_t>(n + m)] = p * std::cos(m * lon);
      out[base + static_cast<std::size_t>(n - m)] = p * std::sin(m * lon);
    }
  }
}

}  // namespace

void eval_harmonics(int truncation, double colat, double lon, std::span<double> out) {
  if (truncation < 0) throw ArgumentError("eval_harmonics: negative truncation");
  if (out.size() < coefficient_count(truncation)) throw ShapeError("eval_harmonics: output too small");
  std::vector<double> pbar(static_cast<std::size_t>((truncation + 1) * (truncation + 2) / 2));
  assoc_legendre_normalized(truncation, std::cos(colat), pbar);
  harmonics_from_legendre(truncation, pbar, lon, out);
}

double eval_harmonic(HarmonicIndex idx, double colat, double lon) {
  if (!idx.valid()) throw ArgumentError("eval_harmonic: invalid harmonic index");
  std::vector<double> all(coefficient_count(idx.degree));
  eval_harmonics(idx.degree, colat, lon, all);
  return all[idx.flat()];
}

double zonal_kernel(int n, SpherePoint x, SpherePoint y) {
  return (2.0 * n + 1.0) * legendre(n, cos_angle(x, y));
}

FieldSample::FieldSample(GridPtr g) : grid(std::move(g)), values(grid->size(), 0.0) {}

FieldSample::FieldSample(GridPtr g, std::vector<double> v) : grid(std::move(g)), values(std::move(v)) {
  if (values.size() != grid->size()) throw ShapeError("FieldSample: value count does not match grid");
}

CoefficientField::CoefficientField(int truncation, std::size_t times, std::size_t replicates)
    : truncation_(truncation), times_(times), replicates_(replicates) {
  if (truncation < 0) throw ArgumentError("CoefficientField: negative truncation");
  data_.assign(times * replicates * per_slice(), 0.0);
}

CoefficientField CoefficientField::select_replicates(std::span<const std::size_t> which) const {
  CoefficientField out(truncation_, times_, which.size());
  for (std::size_t t = 0; t < times_; ++t)
    for (std::size_t i = 0; i < which.size(); ++i) {
      if (which[i] >= replicates_) throw ShapeError("select_replicates: replicate out of range");
      const auto src = slice(t, which[i]);
      std::copy(src.begin(), src.end(), out.slice(t, i).begin());
    }
  return out;
}

SphericalTransform::SphericalTransform(GridPtr grid, int truncation)
    : grid_(std::move(grid)), truncation_(truncation), nodes_(grid_->size()) {
  if (truncation < 0) throw ArgumentError("SphericalTransform: negative truncation");
  const std::size_t K = coefficient_count(truncation);
  basis_.assign(K * nodes_, 0.0);
  weighted_basis_.assign(K * nodes_, 0.0);
  std::vector<double> pbar(static_cast<std::size_t>((truncation + 1) * (truncation + 2) / 2));
  std::vector<double> values(K);
  const std::size_t n_lon = grid_->n_lon();
  for (std::size_t i = 0; i < grid_->n_lat(); ++i) {
    assoc_legendre_normalized(truncation, std::cos(grid_->colatitudes[i]), pbar);
    for (std::size_t l = 0; l < n_lon; ++l) {
      harmonics_from_legendre(truncation, pbar, grid_->longitudes[l], values);
      const std::size_t node = i * n_lon + l;
      for (std::size_t k = 0; k < K; ++k) {
        basis_[k * nodes_ + node] = values[k];
        weighted_basis_[k * nodes_ + node] = values[k] * grid_->weights[node];
      }
    }
  }
}

bool SphericalTransform::supports_analysis() const noexcept {
  return grid_->n_lat() >= static_cast<std::size_t>(truncation_ + 1) &&
         grid_->n_lon() >= static_cast<std::size_t>(2 * truncation_ + 1);
}

void SphericalTransform::analyze(std::span<const double> field, std::span<double> coeffs) const {
  if (!supports_analysis())
    throw ResolutionError("analysis: grid " + std::to_string(grid_->n_lat()) + "x" +
                          std::to_string(grid_->n_lon()) + " cannot resolve degree " +
                          std::to_string(truncation_));
  if (field.size() != nodes_ || coeffs.size() != coefficient_count(truncation_))
    throw ShapeError("analysis: field or coefficient size mismatch");
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    coeffs[k] = simd::dot({weighted_basis_.data() + k * nodes_, nodes_}, field);
}

void SphericalTransform::synthesize(std::span<const double> coeffs, std::span<double> field) const {
  if (field.size() != nodes_ || coeffs.size() != coefficient_count(truncation_))
    throw ShapeError("synthesis: field or coefficient size mismatch");
  std::fill(field.begin(), field.end(), 0.0);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] == 0.0) continue;
    simd::axpy(coeffs[k], {basis_.data() + k * nodes_, nodes_}, field);
  }
}

CoefficientField analysis(const FieldSample& field, int truncation) {
  SphericalTransform tr(field.grid, truncation);
  CoefficientField out(truncation, 1, 1);
  tr.analyze(field.values, out.slice(0, 0));
  return out;
}

FieldSample synthesis(const CoefficientField& coeffs, GridPtr grid, std::size_t t, std::size_t r) {
  SphericalTransform tr(grid, coeffs.truncation());
  FieldSample out(std::move(grid));
  tr.synthesize(coeffs.slice(t, r), out.values);
  return out;
}

}  // namespace sphgp
