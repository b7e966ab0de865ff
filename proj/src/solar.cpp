#include "sphgp/solar.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "sphgp/errors.hpp"
#include "sphgp/spectral_measure.hpp"

namespace sphgp {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}  // namespace

ZenithForm parse_zenith_form(std::string_view s) {
  if (s == "printed") return ZenithForm::Printed;
  if (s == "standard") return ZenithForm::Standard;
  throw ArgumentError("unknown zenith-angle form '" + std::string(s) + "' (expected printed or standard)");
}

std::string_view zenith_form_name(ZenithForm f) noexcept { return f == ZenithForm::Printed ? "printed" : "standard"; }

void SolarConfig::validate() const {
  if (!(G0 > 0.0)) throw ConfigError("solar.G0", "must be positive");
  if (!(CSI > 0.0 && CSI < 1.0)) throw ConfigError("solar.CSI", "must lie in (0, 1)");
  if (!(SItop > 0.0)) throw ConfigError("solar.SItop", "must be positive");
  if (!(ER > 0.0)) throw ConfigError("solar.ER", "must be positive");
  if (!(OI_mean > 0.0)) throw ConfigError("solar.OI_mean", "must be positive");
  if (!(g > 0.0)) throw ConfigError("solar.g", "must be positive");
  if (days < 2) throw ConfigError("solar.days", "need at least 2 days");
  if (!(day_step > 0.0)) throw ConfigError("solar.day_step", "must be positive");
  const double last = day_start + day_step * static_cast<double>(days - 1);
  if (day_start < 0.0 || last > 183.0) throw ConfigError("solar.days", "day grid must stay inside [0, 183]");
  if (mesh_lat < 2 || mesh_lon < 2) throw ConfigError("solar.mesh", "meshgrid needs at least 2 x 2 nodes");
}

std::vector<double> SolarConfig::day_values() const {
  std::vector<double> d(days);
  for (std::size_t i = 0; i < days; ++i) d[i] = day_start + day_step * static_cast<double>(i);
  return d;
}

double SolarConfig::si_max() const noexcept { return G0 * CSI / kPi; }

double declination(double t) { return 23.45 * std::sin(2.0 * kPi / 183.0 * (t - 80.0)); }

double zenith_angle(double t, double theta1, ZenithForm form) {
  const double th2 = declination(t) * kPi / 180.0;
  const double th3 = kPi * t / 183.0;
  if (form == ZenithForm::Printed) {
    const double a = std::acos(std::clamp(std::sin(theta1), -1.0, 1.0));
    return a * (std::sin(th2) + std::cos(theta1) * std::cos(th2) * std::cos(th3));
  }
  const double arg = std::cos(theta1) * std::sin(th2) + std::sin(theta1) * std::cos(th2) * std::cos(th3);
  return std::acos(std::clamp(arg, -1.0, 1.0));
}

double solar_irradiance(double t, double theta1, const SolarConfig& cfg) {
  const double c = std::cos(zenith_angle(t, theta1, cfg.za_form));
  return c <= 0.0 ? 0.0 : cfg.G0 * cfg.CSI * c / kPi;
}

std::optional<double> atmospheric_pressure_from(double cos_za, double si, const SolarConfig& cfg) {
  if (!(cos_za > 0.0) || !(si > 0.0) || si > cfg.SItop) return std::nullopt;
  return -cfg.g * cos_za / cfg.OI_mean * std::log(si / cfg.SItop);
}

std::optional<double> atmospheric_pressure(double t, double theta1, const SolarConfig& cfg, double si) {
  return atmospheric_pressure_from(std::cos(zenith_angle(t, theta1, cfg.za_form)), si, cfg);
}

std::optional<double> opacity_index(double cos_za, double ap_gradient, const SolarConfig& cfg) {
  if (ap_gradient == 0.0 || std::isnan(ap_gradient)) return std::nullopt;
  return -cos_za * std::log(cfg.CSI) / ap_gradient;
}

Meshgrid make_meshgrid(std::size_t n_lat, std::size_t n_lon) {
  if (n_lat < 1 || n_lon < 1) throw ArgumentError("make_meshgrid: empty grid");
  Meshgrid m;
  m.colatitudes.resize(n_lat);
  m.longitudes.resize(n_lon);
  for (std::size_t i = 0; i < n_lat; ++i) m.colatitudes[i] = (static_cast<double>(i) + 0.5) * kPi / n_lat;
  for (std::size_t j = 0; j < n_lon; ++j) m.longitudes[j] = (static_cast<double>(j) + 0.5) * 2.0 * kPi / n_lon;
  return m;
}

SolarField solar_field(double day, const Meshgrid& mesh, const SolarConfig& cfg) {
  const std::size_t nl = mesh.colatitudes.size();
  const std::size_t nm = mesh.longitudes.size();
  // Zonal profiles first, broadcast over longitude at the end.
  std::vector<double> cz(nl), si(nl), ap(nl, kNaN), oi(nl, kNaN);
  for (std::size_t i = 0; i < nl; ++i) {
    cz[i] = std::cos(zenith_angle(day, mesh.colatitudes[i], cfg.za_form));
    si[i] = cz[i] <= 0.0 ? 0.0 : cfg.G0 * cfg.CSI * cz[i] / kPi;
    if (const auto p = atmospheric_pressure_from(cz[i], si[i], cfg)) ap[i] = *p;
  }
  for (std::size_t i = 0; i < nl; ++i) {
    if (nl < 2) break;
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i + 1 == nl ? i : i + 1;
    const double grad = (ap[hi] - ap[lo]) / (mesh.colatitudes[hi] - mesh.colatitudes[lo]);
    if (std::isnan(ap[i]) || std::isnan(grad)) continue;
    if (const auto o = opacity_index(cz[i], grad, cfg)) oi[i] = *o;
  }
  SolarField f;
  f.day = day;
  f.si.resize(nl * nm);
  f.ap.resize(nl * nm);
  f.oi.resize(nl * nm);
  f.mask.resize(nl * nm);
  for (std::size_t i = 0; i < nl; ++i)
    for (std::size_t j = 0; j < nm; ++j) {
      const std::size_t k = i * nm + j;
      f.si[k] = si[i];
      f.ap[k] = ap[i];
      f.oi[k] = oi[i];
      f.mask[k] = std::isnan(ap[i]) ? 1 : 0;
    }
  return f;
}

void resample(const Meshgrid& mesh, std::span<const double> values, std::span<const unsigned char> mask,
              const SphericalGrid& grid, std::vector<double>& out, std::vector<unsigned char>& out_mask) {
  const std::size_t nl = mesh.colatitudes.size();
  const std::size_t nm = mesh.longitudes.size();
  if (values.size() != nl * nm || (!mask.empty() && mask.size() != nl * nm))
    throw ShapeError("resample: values do not match the meshgrid");
  const double hl = kPi / static_cast<double>(nl);
  const double hm = 2.0 * kPi / static_cast<double>(nm);
  out.resize(grid.size());
  out_mask.resize(grid.size());
  for (std::size_t a = 0; a < grid.n_lat(); ++a) {
    const double x = grid.colatitudes[a] / hl - 0.5;
    std::size_t i0, i1;
    double wx;
    if (x <= 0.0) {
      i0 = i1 = 0;
      wx = 0.0;
    } else if (x >= static_cast<double>(nl - 1)) {
      i0 = i1 = nl - 1;
      wx = 0.0;
    } else {
      i0 = static_cast<std::size_t>(std::floor(x));
      i1 = i0 + 1;
      wx = x - static_cast<double>(i0);
    }
    for (std::size_t b = 0; b < grid.n_lon(); ++b) {
      const double y = grid.longitudes[b] / hm - 0.5;
      const double fy = std::floor(y);
      const double wy = y - fy;
      const auto nmi = static_cast<long long>(nm);
      const auto j0 = static_cast<std::size_t>(((static_cast<long long>(fy) % nmi) + nmi) % nmi);
      const std::size_t j1 = (j0 + 1) % nm;
      const std::size_t k00 = i0 * nm + j0, k01 = i0 * nm + j1, k10 = i1 * nm + j0, k11 = i1 * nm + j1;
      const std::size_t node = a * grid.n_lon() + b;
      bool masked = false;
      if (!mask.empty()) masked = mask[k00] || mask[k01] || mask[k10] || mask[k11];
      if (masked) {
        out[node] = kNaN;
        out_mask[node] = 1;
        continue;
      }
      out[node] = (1 - wx) * ((1 - wy) * values[k00] + wy * values[k01]) +
                  wx * ((1 - wy) * values[k10] + wy * values[k11]);
      out_mask[node] = 0;
    }
  }
}

CoefficientField SolarDataset::response_coeffs() const {
  const SphericalTransform tf(grid, truncation);
  CoefficientField c(truncation, days.size(), replicates);
  for (std::size_t t = 0; t < days.size(); ++t)
    for (std::size_t r = 0; r < replicates; ++r) tf.analyze(response_at(t, r), c.slice(t, r));
  return c;
}

CoefficientField SolarDataset::noiseless_coeffs() const {
  CoefficientField c = effect;
  for (std::size_t t = 0; t < days.size(); ++t)
    for (std::size_t r = 0; r < replicates; ++r) {
      auto s = c.slice(t, r);
      const auto base = si_coeffs.slice(t, 0);
      for (std::size_t k = 0; k < s.size(); ++k) s[k] += base[k];
    }
  return c;
}

SolarDataset generate_dataset(const SolarConfig& cfg, const HyperparamVector& effect_hp, double noise_sigma,
                              std::size_t replicates, std::uint64_t seed, GridPtr grid, int truncation) {
  cfg.validate();
  if (replicates < 1) throw ArgumentError("generate_dataset: need at least one replicate");
  if (!(noise_sigma >= 0.0)) throw ArgumentError("generate_dataset: noise sigma must be nonnegative");
  const SphericalTransform tf(grid, truncation);
  if (!tf.supports_analysis())
    throw ResolutionError("generate_dataset: grid too coarse for truncation " + std::to_string(truncation));

  SolarDataset ds;
  ds.config = cfg;
  ds.grid = grid;
  ds.truncation = truncation;
  ds.replicates = replicates;
  ds.days = cfg.day_values();
  const std::size_t T = ds.days.size();
  const std::size_t N = grid->size();

  const Meshgrid mesh = make_meshgrid(cfg.mesh_lat, cfg.mesh_lon);
  ds.si.resize(T * N);
  ds.ap.resize(T * N);
  ds.mask.resize(T * N);
  ds.si_coeffs = CoefficientField(truncation, T, 1);
  std::vector<double> buf;
  std::vector<unsigned char> mbuf;
  for (std::size_t t = 0; t < T; ++t) {
    const SolarField f = solar_field(ds.days[t], mesh, cfg);
    resample(mesh, f.si, {}, *grid, buf, mbuf);
    std::copy(buf.begin(), buf.end(), ds.si.begin() + static_cast<std::ptrdiff_t>(t * N));
    resample(mesh, f.ap, f.mask, *grid, buf, mbuf);
    std::copy(buf.begin(), buf.end(), ds.ap.begin() + static_cast<std::ptrdiff_t>(t * N));
    std::copy(mbuf.begin(), mbuf.end(), ds.mask.begin() + static_cast<std::ptrdiff_t>(t * N));
    tf.analyze(std::span<const double>(ds.si).subspan(t * N, N), ds.si_coeffs.slice(t, 0));
  }

  const std::vector<double> lags = integer_lags(T);
  const AngularSpectrum sp = angular_spectrum(effect_hp, lags, truncation);
  ds.effect = sample_temporal(TemporalCovariance(sp, T), replicates, seed, StreamTag::SolarEffect);
  const CoefficientField noise = sample_noise_coeffs(noise_sigma, truncation, T, replicates, seed, StreamTag::SolarNoise);

  ds.response.resize(T * replicates * N);
  std::vector<double> coeffs(coefficient_count(truncation));
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t r = 0; r < replicates; ++r) {
      const auto e = ds.effect.slice(t, r);
      const auto z = noise.slice(t, r);
      for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] = e[k] + z[k];
      std::span<double> out(ds.response.data() + (t * replicates + r) * N, N);
      tf.synthesize(coeffs, out);
      for (std::size_t i = 0; i < N; ++i) out[i] += ds.si[t * N + i];
    }
  return ds;
}

}  // namespace sphgp
