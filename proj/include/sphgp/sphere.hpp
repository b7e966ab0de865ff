#pragma once

// Real spherical harmonics on S^2, orthonormal under the normalized surface
// measure (total mass 1), together with Gauss-Legendre x uniform-longitude
// quadrature grids and direct analysis/synthesis transforms.
//
// Harmonic S_{n,j} has degree n and order index j in 1..2n+1. The azimuthal
// order is m = j - n - 1 in [-n, n]: m > 0 uses sqrt(2) cos(m lon), m < 0 uses
// sqrt(2) sin(|m| lon), m = 0 is zonal. No Condon-Shortley phase.

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace sphgp {

struct GaussLegendreRule {
  std::vector<double> nodes;    // ascending in (-1, 1)
  std::vector<double> weights;  // sum to 2
};

GaussLegendreRule gauss_legendre(std::size_t order);

struct SphericalGrid {
  std::vector<double> colatitudes;  // strictly increasing in (0, pi)
  std::vector<double> longitudes;   // strictly increasing in [0, 2 pi)
  std::vector<double> weights;      // per node, row-major (lat, lon); sums to 1

  std::size_t n_lat() const noexcept { return colatitudes.size(); }
  std::size_t n_lon() const noexcept { return longitudes.size(); }
  std::size_t size() const noexcept { return weights.size(); }
  double weight(std::size_t i_lat, std::size_t i_lon) const { return weights[i_lat * n_lon() + i_lon]; }
};

using GridPtr = std::shared_ptr<const SphericalGrid>;

SphericalGrid build_grid(std::size_t n_lat, std::size_t n_lon);
GridPtr make_grid(std::size_t n_lat, std::size_t n_lon);

struct HarmonicIndex {
  int degree = 0;
  int j = 1;  // 1-based order index

  int order() const noexcept { return j - degree - 1; }
  std::size_t flat() const noexcept {
    return static_cast<std::size_t>(degree * degree + j - 1);
  }
  static HarmonicIndex from_flat(std::size_t k) noexcept;
  // j of azimuthal order m at degree n.
  static HarmonicIndex of_order(int n, int m) noexcept { return {n, m + n + 1}; }
  bool valid() const noexcept { return degree >= 0 && j >= 1 && j <= 2 * degree + 1; }
};

constexpr std::size_t coefficient_count(int truncation) noexcept {
  return static_cast<std::size_t>((truncation + 1) * (truncation + 1));
}

struct SpherePoint {
  double colat = 0.0;
  double lon = 0.0;
};

// Cosine of the great-circle angle, clamped to [-1, 1].
double cos_angle(SpherePoint x, SpherePoint y) noexcept;

// Legendre polynomial P_n(u) by the three-term recurrence. |u| > 1 throws DomainError.
double legendre(int n, double u);
// P_0(u) .. P_nmax(u) into out (size nmax + 1).
void legendre_all(int nmax, double u, std::span<double> out);

// Fully normalized associated Legendre functions, int_{-1}^{1} Pbar^2 du / 2 = 1,
// stored at index n(n+1)/2 + m for 0 <= m <= n <= nmax.
void assoc_legendre_normalized(int nmax, double u, std::span<double> out);

double eval_harmonic(HarmonicIndex idx, double colat, double lon);
// All harmonics of degree <= truncation at one point, in flat order.
void eval_harmonics(int truncation, double colat, double lon, std::span<double> out);

// Sum_j S_{n,j}(x) S_{n,j}(y) in closed form: (2n+1) P_n(cos angle).
double zonal_kernel(int n, SpherePoint x, SpherePoint y);

struct FieldSample {
  GridPtr grid;
  std::vector<double> values;  // row-major (lat, lon)

  FieldSample() = default;
  explicit FieldSample(GridPtr g);
  FieldSample(GridPtr g, std::vector<double> v);
  double& at(std::size_t i_lat, std::size_t i_lon) { return values[i_lat * grid->n_lon() + i_lon]; }
  double at(std::size_t i_lat, std::size_t i_lon) const { return values[i_lat * grid->n_lon() + i_lon]; }
};

// Coefficients indexed by (degree, order, time, replicate). Storage keeps each
// (t, r) slice contiguous, and all replicates of one time contiguous.
class CoefficientField {
 public:
  CoefficientField() = default;
  CoefficientField(int truncation, std::size_t times, std::size_t replicates);

  int truncation() const noexcept { return truncation_; }
  std::size_t times() const noexcept { return times_; }
  std::size_t replicates() const noexcept { return replicates_; }
  std::size_t per_slice() const noexcept { return coefficient_count(truncation_); }

  double& at(int n, int j, std::size_t t, std::size_t r) {
    return data_[offset(t, r) + HarmonicIndex{n, j}.flat()];
  }
  double at(int n, int j, std::size_t t, std::size_t r) const {
    return data_[offset(t, r) + HarmonicIndex{n, j}.flat()];
  }
  std::span<double> slice(std::size_t t, std::size_t r) { return {data_.data() + offset(t, r), per_slice()}; }
  std::span<const double> slice(std::size_t t, std::size_t r) const {
    return {data_.data() + offset(t, r), per_slice()};
  }
  // All replicates at time t: replicates() * per_slice() values.
  std::span<const double> time_block(std::size_t t) const {
    return {data_.data() + offset(t, 0), replicates_ * per_slice()};
  }

  std::vector<double>& raw() noexcept { return data_; }
  const std::vector<double>& raw() const noexcept { return data_; }

  bool same_shape(const CoefficientField& o) const noexcept {
    return truncation_ == o.truncation_ && times_ == o.times_ && replicates_ == o.replicates_;
  }
  // Replicates listed in `which`, in that order.
  CoefficientField select_replicates(std::span<const std::size_t> which) const;

 private:
  std::size_t offset(std::size_t t, std::size_t r) const noexcept {
    return (t * replicates_ + r) * per_slice();
  }

  int truncation_ = 0;
  std::size_t times_ = 0;
  std::size_t replicates_ = 0;
  std::vector<double> data_;
};

// Precomputed basis for repeated transforms on one grid.
class SphericalTransform {
 public:
  SphericalTransform(GridPtr grid, int truncation);

  int truncation() const noexcept { return truncation_; }
  const GridPtr& grid() const noexcept { return grid_; }
  // n_lat >= TR + 1 and n_lon >= 2 TR + 1.
  bool supports_analysis() const noexcept;

  // coeffs[k] = sum_nodes weight * field * S_k. Throws ResolutionError if the grid is too coarse.
  void analyze(std::span<const double> field, std::span<double> coeffs) const;
  void synthesize(std::span<const double> coeffs, std::span<double> field) const;

  // Basis value S_k at node i.
  double basis(std::size_t k, std::size_t node) const noexcept { return basis_[k * nodes_ + node]; }

 private:
  GridPtr grid_;
  int truncation_;
  std::size_t nodes_;
  std::vector<double> basis_;           // K x N
  std::vector<double> weighted_basis_;  // K x N, times quadrature weights
};

// Single (t = 0, r = 0) slice.
CoefficientField analysis(const FieldSample& field, int truncation);
FieldSample synthesis(const CoefficientField& coeffs, GridPtr grid, std::size_t t = 0, std::size_t r = 0);

}  // namespace sphgp
