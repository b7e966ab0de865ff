#pragma once

// Synthetic downward solar radiation data. The irradiance and pressure models
// depend on the day t in [0, 183] and the polar angle theta1 only; the random
// effect and the noise carry the longitude dependence.

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sphgp/gneiting.hpp"
#include "sphgp/sphere.hpp"

namespace sphgp {

enum class ZenithForm {
  Printed,   // arccos(sin th1) * (sin th2 + cos th1 cos th2 cos th3)
  Standard,  // arccos(cos th1 sin th2 + sin th1 cos th2 cos th3), latitude = pi/2 - th1
};

ZenithForm parse_zenith_form(std::string_view s);
std::string_view zenith_form_name(ZenithForm f) noexcept;

struct SolarConfig {
  double G0 = 1361.0;
  double CSI = 0.8;
  double SItop = 829.5;
  double ER = 6371000.0;  // recorded in manifests; the models here do not use it
  double OI_mean = 0.005;
  double g = 9.80665;
  double day_start = 0.0;
  double day_step = 1.0;
  std::size_t days = 20;
  std::size_t mesh_lat = 180;
  std::size_t mesh_lon = 180;
  ZenithForm za_form = ZenithForm::Printed;

  void validate() const;
  std::vector<double> day_values() const;
  // Upper bound of the irradiance, G0 CSI / pi.
  double si_max() const noexcept;
};

// Degrees.
double declination(double t);
double zenith_angle(double t, double theta1, ZenithForm form = ZenithForm::Printed);
// G0 CSI cos(ZA) / pi, clamped at 0.
double solar_irradiance(double t, double theta1, const SolarConfig& cfg);
// -g cos(ZA) / OI_mean * ln(si / SItop); empty when si <= 0, si > SItop or cos(ZA) <= 0.
std::optional<double> atmospheric_pressure_from(double cos_za, double si, const SolarConfig& cfg);
std::optional<double> atmospheric_pressure(double t, double theta1, const SolarConfig& cfg, double si);
// -cos(ZA) log(CSI) / grad; empty when grad == 0.
std::optional<double> opacity_index(double cos_za, double ap_gradient, const SolarConfig& cfg);

// Midpoint meshgrid, (i + 1/2) pi / n_lat by (j + 1/2) 2 pi / n_lon.
struct Meshgrid {
  std::vector<double> colatitudes;
  std::vector<double> longitudes;
  std::size_t size() const noexcept { return colatitudes.size() * longitudes.size(); }
};

Meshgrid make_meshgrid(std::size_t n_lat, std::size_t n_lon);

struct SolarField {
  double day = 0.0;
  std::vector<double> si;          // row-major (lat, lon) on the meshgrid
  std::vector<double> ap;          // NaN where masked
  std::vector<double> oi;          // NaN where masked
  std::vector<unsigned char> mask; // 1 where AP is unavailable
};

// OI uses the polar-angle gradient of AP: central differences inside, one-sided
// at the first and last row; masked wherever a stencil value is masked.
SolarField solar_field(double day, const Meshgrid& mesh, const SolarConfig& cfg);

// Bilinear in (colat, lon) with longitude wrap and edge clamping in colatitude.
// Nodes whose stencil touches a masked value come back masked (NaN, mask 1).
void resample(const Meshgrid& mesh, std::span<const double> values, std::span<const unsigned char> mask,
              const SphericalGrid& grid, std::vector<double>& out, std::vector<unsigned char>& out_mask);

struct SolarDataset {
  SolarConfig config;
  GridPtr grid;
  int truncation = 0;
  std::size_t replicates = 0;
  std::vector<double> days;
  std::vector<double> si;             // T x N on the analysis grid
  std::vector<double> ap;             // T x N, NaN where masked
  std::vector<unsigned char> mask;    // T x N
  std::vector<double> response;       // T x R x N
  CoefficientField effect;            // latent random-effect coefficients, T x R
  CoefficientField si_coeffs;         // analysis of SI, one replicate

  std::size_t nodes() const noexcept { return grid->size(); }
  std::span<const double> response_at(std::size_t t, std::size_t r) const {
    return {response.data() + (t * replicates + r) * nodes(), nodes()};
  }
  // Analysis of the response.
  CoefficientField response_coeffs() const;
  // si_coeffs + effect, the noiseless response in coefficient space.
  CoefficientField noiseless_coeffs() const;
};

// response = SI + synthesized random effect (spectrum of `effect_hp`, temporal
// lags in day steps) + synthesized white-noise coefficients N(0, noise_sigma^2).
SolarDataset generate_dataset(const SolarConfig& cfg, const HyperparamVector& effect_hp, double noise_sigma,
                              std::size_t replicates, std::uint64_t seed, GridPtr grid, int truncation);

}  // namespace sphgp
