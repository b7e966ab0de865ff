#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>
#include <vector>

#include "sphgp/errors.hpp"
#include "sphgp/gneiting.hpp"
#include "sphgp/model.hpp"
#include "sphgp/sphere.hpp"

namespace sphgp {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Psi, Examples) {
  EXPECT_EQ(psi(0.0, 0.3, 0.9), 1.0);
  EXPECT_DOUBLE_EQ(psi(1.0, 1.0, 1.0), 2.0);
  EXPECT_NEAR(psi(2.0, 0.7, 0.8), 2.16390353383701336053, 1e-14);
}

TEST(PhiS1, Examples) {
  EXPECT_EQ(phi_s1(0.0, 0.4, 0.7), 1.0);
  EXPECT_DOUBLE_EQ(phi_s1(1.0, 1.0, 1.0), 0.5);
  EXPECT_NEAR(phi_s1(3.0, 0.5, 2.0), std::pow(1 + std::sqrt(3.0), -2.0), 1e-15);
}

TEST(PhiS2, Examples) {
  EXPECT_EQ(phi_s2(0.0, 1.3), 1.0);
  EXPECT_NEAR(phi_s2(1.0, 0.5), std::exp(-1.0), 1e-14);
  EXPECT_NEAR(phi_s2(2.0, 1.3), 0.5363304701916003467836, 1e-13);
}

TEST(PhiS2, ExponentialSpecialCase) {
  for (double u = 0.0; u <= 25.0; u += 0.125) EXPECT_NEAR(phi_s2(u, 0.5), std::exp(-std::sqrt(u)), 1e-12) << u;
}

TEST(PhiS2, SmallArgumentLimit) {
  // 1 - phi ~ Gamma(1-v)/Gamma(1+v) (x/2)^(2v) for v < 1 and x^2 / (4(v-1)) for v > 1.
  const double u = 1e-14, x = 1e-7;
  for (double v : {0.3, 0.7}) {
    const double lead = std::tgamma(1 - v) / std::tgamma(1 + v) * std::pow(x / 2, 2 * v);
    EXPECT_NEAR((1.0 - phi_s2(u, v)) / lead, 1.0, 1e-3) << v;
  }
  for (double v : {1.3, 2.5}) EXPECT_NEAR(phi_s2(u, v), 1.0 - u / (4 * (v - 1)), 1e-14) << v;
}

TEST(Kernel, Examples) {
  const auto s1 = HyperparamVector::s1(1, 1, 1, 1, 0);
  EXPECT_DOUBLE_EQ(kernel(0.0, 0.0, HyperparamVector::s1(0.3, 0.2, 0.6, 0.4, 0)), 1.0);
  EXPECT_DOUBLE_EQ(kernel(0.0, 0.0, HyperparamVector::s2(1.4, 0.6, 0.4, 0)), 1.0);
  EXPECT_NEAR(kernel(kPi, 0.0, s1), 0.2, 1e-15);
  EXPECT_NEAR(kernel(kPi / 2, 1.0, s1), 0.25, 1e-15);
}

TEST(Hyperparams, Validation) {
  EXPECT_THROW(HyperparamVector::s1(0.0, 0.5, 0.5, 0.5, 0.1), ArgumentError);
  EXPECT_THROW(HyperparamVector::s1(0.5, -1, 0.5, 0.5, 0.1), ArgumentError);
  EXPECT_THROW(HyperparamVector::s1(0.5, 0.5, 1.5, 0.5, 0.1), ArgumentError);
  EXPECT_THROW(HyperparamVector::s2(0.0, 0.5, 0.5, 0.1), ArgumentError);
  EXPECT_THROW(HyperparamVector::s2(1.0, 0.5, 0.5, -0.1), ArgumentError);
  EXPECT_EQ(parse_subfamily("S2"), Subfamily::S2);
  EXPECT_THROW(parse_subfamily("S3"), ArgumentError);
}

TEST(AngularSpectrum, ConstantKernel) {
  const std::vector<double> lags{0, 1, 2};
  const auto sp = project_zonal([](double, double) { return 0.7; }, lags, 6, 20);
  for (std::size_t l = 0; l < 3; ++l) {
    EXPECT_NEAR(sp.at(0, l), 0.7, 1e-12);
    for (int n = 1; n <= 6; ++n) EXPECT_NEAR(sp.at(n, l), 0.0, 1e-12);
  }
}

TEST(AngularSpectrum, FirstLegendreKernel) {
  const std::vector<double> lags{0, 1, 2.5};
  auto g = [](double tau) { return std::exp(-tau); };
  const auto sp = project_zonal([&](double th, double tau) { return 3 * std::cos(th) * g(tau); }, lags, 5, 20);
  for (std::size_t l = 0; l < 3; ++l)
    for (int n = 0; n <= 5; ++n) EXPECT_NEAR(sp.at(n, l), n == 1 ? g(lags[l]) : 0.0, 1e-12);
}

// B_n(tau) = 1/2 int_{-1}^{1} C(acos u, tau) P_n(u) du, by adaptive quadrature.
double adaptive_coefficient(const HyperparamVector& hp, int n, double tau) {
  boost::math::quadrature::tanh_sinh<double> integrator;
  return 0.5 * integrator.integrate([&](double u) { return kernel(std::acos(u), tau, hp) * legendre(n, u); });
}

TEST(AngularSpectrum, MatchesAdaptiveQuadrature) {
  const auto s2 = HyperparamVector::s2(1.4, 0.7, 0.8, 0.2);
  const std::vector<double> lags{0, 1, 3};
  // The default order is limited by the non-smooth kernel at theta = 0.
  const auto sp = angular_spectrum(s2, lags, 8);
  const auto fine = angular_spectrum(s2, lags, 8, 2000);
  for (int n = 0; n <= 8; ++n)
    for (std::size_t l = 0; l < lags.size(); ++l) {
      const double ref = adaptive_coefficient(s2, n, lags[l]);
      EXPECT_NEAR(sp.at(n, l), ref, 1e-8);
      EXPECT_NEAR(fine.at(n, l), ref, 1e-10);
    }
}

TEST(AngularSpectrum, FixedOrderAgreesWithHigherOrder) {
  const auto s1 = HyperparamVector::s1(0.5, 0.3, 0.7, 0.9, 0.2);
  const std::vector<double> lags{0, 2};
  const auto a = angular_spectrum(s1, lags, 6);
  const auto b = angular_spectrum(s1, lags, 6, 400);
  for (int n = 0; n <= 6; ++n) EXPECT_NEAR(a.at(n, 0), b.at(n, 0), 2e-4);
}

TEST(AngularSpectrum, PartialSumsIncreaseTowardOne) {
  const auto s1 = HyperparamVector::s1(0.5, 0.3, 0.7, 0.9, 0.0);
  const std::vector<double> lags{0};
  const auto sp = angular_spectrum(s1, lags, 60, 600);
  double prev = 0.0, partial = 0.0;
  for (int n = 0; n <= 60; ++n) {
    partial += (2 * n + 1) * sp.at(n, 0);
    EXPECT_GE(partial, prev);
    EXPECT_LT(partial, 1.0 + 1e-12);
    prev = partial;
  }
  EXPECT_GT(partial, 0.9);
}

TEST(AngularSpectrum, PositivityAndTemporalDecay) {
  PriorSpec priors;
  const auto draws = sample_prior(priors, Subfamily::S1, 10, 3);
  const auto lags = integer_lags(12);
  for (const auto& hp : draws) {
    const auto sp = angular_spectrum(hp, lags, 8);
    for (int n = 0; n <= 8; ++n) {
      EXPECT_GE(sp.at(n, 0), -1e-12);
      for (std::size_t l = 1; l < lags.size(); ++l) EXPECT_LE(sp.at(n, l), sp.at(n, l - 1) + 1e-14);
    }
  }
  for (const auto& hp : sample_prior(priors, Subfamily::S2, 10, 3)) {
    const auto sp = angular_spectrum(hp, lags, 8);
    for (int n = 0; n <= 8; ++n) EXPECT_GE(sp.at(n, 0), -1e-12);
  }
}

TEST(AngularSpectrum, TraceConvergesForMatern) {
  // (2n+1) B_n decays like n^(-2 varpi - 1), so the 60..80 tail is ~1e-10 here.
  const auto s2 = HyperparamVector::s2(2.5, 0.7, 0.8, 0.0);
  const std::vector<double> lags{0};
  const auto sp = angular_spectrum(s2, lags, 80, 400);
  double s60 = 0.0, s80 = 0.0;
  for (int n = 0; n <= 80; ++n) {
    if (n <= 60) s60 += (2 * n + 1) * sp.at(n, 0);
    s80 += (2 * n + 1) * sp.at(n, 0);
  }
  EXPECT_LT(std::abs(s80 - s60), 1e-6);
  EXPECT_NEAR(s80, 1.0, 1e-6);
}

double sup_error(const HyperparamVector& hp, int tr) {
  const std::vector<double> lags{0};
  const auto sp = angular_spectrum(hp, lags, tr);
  double worst = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double th = kPi * i / 400;
    worst = std::max(worst, std::abs(reconstruct_kernel(sp, th, 0) - kernel(th, 0, hp)));
  }
  return worst;
}

TEST(ReconstructKernel, Examples) {
  AngularSpectrum zero(4, {0.0});
  EXPECT_EQ(reconstruct_kernel(zero, 1.0, 0), 0.0);
  AngularSpectrum one(4, {0.0});
  one.at(0, 0) = 0.6;
  for (double th : {0.0, 1.0, kPi}) EXPECT_NEAR(reconstruct_kernel(one, th, 0), 0.6, 1e-15);
  EXPECT_THROW(reconstruct_kernel(one, 1.0, 1), ArgumentError);
}

TEST(ReconstructKernel, FunkHeckeRoundTrip) {
  PriorSpec priors;
  for (Subfamily sf : {Subfamily::S1, Subfamily::S2})
    for (const auto& hp : sample_prior(priors, sf, 10, 17)) {
      double prev = INFINITY;
      for (int tr : {5, 10, 20, 40}) {
        const double e = sup_error(hp, tr);
        EXPECT_LT(e, prev) << subfamily_name(sf) << " TR=" << tr;
        prev = e;
      }
      if (sf == Subfamily::S2 && hp.varpi >= 1.0) {
        EXPECT_LT(prev, 1e-3);
      }
    }
}

TEST(AngularSpectrum, Errors) {
  const auto hp = HyperparamVector::s2(1.0, 0.5, 0.5, 0.1);
  const std::vector<double> lags{0};
  EXPECT_THROW(angular_spectrum(hp, lags, 10, 5), ArgumentError);
  EXPECT_THROW(angular_spectrum(hp, lags, -1), ArgumentError);
  auto bad = hp;
  bad.alpha = 2.0;
  EXPECT_THROW(angular_spectrum(bad, lags, 4), ArgumentError);
  const std::vector<double> single{0.0};
  EXPECT_THROW(project_zonal([](double th, double) { return -3 * std::cos(th) - 1.0; }, single, 2, 10), ValidityError);
}

}  // namespace
}  // namespace sphgp
