#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

#include "sphgp/errors.hpp"
#include "sphgp/rng.hpp"
#include "sphgp/spectral_measure.hpp"

namespace sphgp {
namespace {

TruncatedSpectrum spectrum_of(std::vector<double> lam) { return TruncatedSpectrum{std::move(lam)}; }

TruncatedSpectrum random_spectrum(RandomStream& rs, int tr, double scale) {
  TruncatedSpectrum s;
  for (int n = 0; n <= tr; ++n) s.eigenvalues.push_back(scale * rs.uniform() / ((n + 1.0) * (n + 1.0) * (n + 1.0)));
  return s;
}

// Dense N(0, Sigma) log-density.
double dense_mvn_logpdf(const Eigen::VectorXd& y, const Eigen::MatrixXd& sigma) {
  Eigen::LLT<Eigen::MatrixXd> llt(sigma);
  const Eigen::VectorXd z = llt.matrixL().solve(y);
  const double logdet = 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  return -0.5 * (y.size() * std::log(2 * std::numbers::pi) + logdet + z.squaredNorm());
}

TEST(LogDensity, Examples) {
  const double c = -0.5 * std::log(2 * std::numbers::pi);
  std::vector<double> y{0.0};
  EXPECT_NEAR(log_density(y, spectrum_of({1.0})), c, 1e-15);
  y[0] = 1.0;
  EXPECT_NEAR(log_density(y, spectrum_of({1.0})), c - 0.5, 1e-15);
}

TEST(LogDensity, MatchesDenseOracle) {
  RandomStream rs(1, StreamTag::Prior);
  for (int trial = 0; trial < 20; ++trial) {
    const auto sp = random_spectrum(rs, 2, 2.0);
    std::vector<double> y(coefficient_count(2));
    rs.fill_normal(y);
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(9, 9);
    for (std::size_t k = 0; k < 9; ++k) sigma(k, k) = sp.eigenvalues[HarmonicIndex::from_flat(k).degree];
    EXPECT_NEAR(log_density(y, sp), dense_mvn_logpdf(Eigen::Map<Eigen::VectorXd>(y.data(), 9), sigma), 1e-12);
  }
}

TEST(LogDensity, ZeroEigenvalueRestrictsSupport) {
  const auto sp = spectrum_of({1.0, 0.0});
  std::vector<double> y{0.5, 0.0, 0.0, 0.0};
  EXPECT_NEAR(log_density(y, sp), log_density(std::vector<double>{0.5}, spectrum_of({1.0})), 1e-15);
  y[2] = 1e-3;
  EXPECT_THROW(log_density(y, sp), DegenerateError);
  EXPECT_THROW(log_density(std::vector<double>{1.0, 2.0}, sp), ShapeError);
}

TEST(Fredholm, Examples) {
  EXPECT_EQ(fredholm_determinant(spectrum_of({0.3, 0.1}), 0.0), 1.0);
  EXPECT_DOUBLE_EQ(fredholm_determinant(spectrum_of({0.5}), 1.0), 0.5);
  const auto sp = spectrum_of({0.3, 0.1});
  EXPECT_NEAR(fredholm_determinant(sp, 0.9), fredholm_determinant_series(sp, 0.9), 1e-10);
  EXPECT_NEAR(fredholm_determinant(sp, 0.9), 0.73 * std::pow(0.91, 3), 1e-15);
}

TEST(Fredholm, SeriesAgreesOnRandomSpectra) {
  RandomStream rs(2, StreamTag::Prior);
  for (int trial = 0; trial < 100; ++trial) {
    auto sp = random_spectrum(rs, 1 + static_cast<int>(rs.below(10)), 1.0);
    const double omega = (2 * rs.uniform() - 1) * 0.95 / sp.trace();
    EXPECT_NEAR(fredholm_determinant(sp, omega), fredholm_determinant_series(sp, omega), 1e-10);
  }
}

TEST(Fredholm, MatchesDenseDeterminantInRotatedBasis) {
  RandomStream rs(3, StreamTag::Prior);
  const auto sp = random_spectrum(rs, 3, 1.0);
  const std::size_t K = coefficient_count(3);
  Eigen::MatrixXd g(K, K);
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t j = 0; j < K; ++j) g(i, j) = rs.normal();
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  Eigen::VectorXd d(K);
  for (std::size_t k = 0; k < K; ++k) d[k] = sp.eigenvalues[HarmonicIndex::from_flat(k).degree];
  const Eigen::MatrixXd a = q * d.asDiagonal() * q.transpose();
  for (double omega : {-1.5, 0.4, 2.0}) {
    const double dense = (Eigen::MatrixXd::Identity(K, K) - omega * a).determinant();
    EXPECT_NEAR(fredholm_determinant(sp, omega), dense, 1e-12);
  }
}

TEST(Fredholm, Errors) {
  EXPECT_THROW(fredholm_determinant(spectrum_of({0.5}), 2.0), SingularityError);
  EXPECT_THROW(fredholm_determinant_series(spectrum_of({0.5, 0.2}), 1.0), ArgumentError);
}

TEST(Cholesky, JitterLadder) {
  Eigen::MatrixXd k(2, 2);
  k << 1.0, 0.5, 0.5, 1.0;
  const Eigen::MatrixXd l = cholesky_with_jitter(k);
  EXPECT_NEAR((l * l.transpose() - k).norm(), 0.0, 1e-15);
  Eigen::MatrixXd semi = Eigen::MatrixXd::Ones(3, 3);
  const Eigen::MatrixXd ls = cholesky_with_jitter(semi);
  EXPECT_NEAR((ls * ls.transpose() - semi).norm(), 0.0, 1e-7);
  Eigen::MatrixXd neg(2, 2);
  neg << 1.0, 2.0, 2.0, 1.0;
  EXPECT_THROW(cholesky_with_jitter(neg), ValidityError);
}

AngularSpectrum white_spectrum(int tr, std::size_t lags) {
  AngularSpectrum sp(tr, integer_lags(lags));
  for (int n = 0; n <= tr; ++n) sp.at(n, 0) = 1.0;
  return sp;
}

TEST(TemporalCovariance, ToeplitzMatrix) {
  const auto hp = HyperparamVector::s1(0.5, 0.3, 0.7, 0.9, 0.1);
  const auto sp = angular_spectrum(hp, integer_lags(6), 3);
  const TemporalCovariance tc(sp, 4);
  const auto k = tc.matrix(2);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) EXPECT_EQ(k(i, j), sp.at(2, static_cast<std::size_t>(std::abs(i - j))));
  EXPECT_EQ(tc.variance(2), sp.at(2, 0));
  EXPECT_THROW(TemporalCovariance(sp, 7), ArgumentError);
}

TEST(SampleTemporal, WhiteInTimeHasUnitVariance) {
  const TemporalCovariance tc(white_spectrum(1, 2), 2);
  const std::size_t R = 100000;
  const auto c = sample_temporal(tc, R, 5);
  for (int n = 0; n <= 1; ++n)
    for (int j = 1; j <= 2 * n + 1; ++j) {
      double s2 = 0.0, cross = 0.0;
      for (std::size_t r = 0; r < R; ++r) {
        s2 += c.at(n, j, 0, r) * c.at(n, j, 0, r);
        cross += c.at(n, j, 0, r) * c.at(n, j, 1, r);
      }
      EXPECT_NEAR(s2 / R, 1.0, 3 * std::sqrt(2.0 / R));
      EXPECT_NEAR(cross / R, 0.0, 3 * std::sqrt(1.0 / R));
    }
}

TEST(SampleTemporal, SingleTimeScalesBySqrtB) {
  const auto hp = HyperparamVector::s2(1.3, 0.7, 0.8, 0.0);
  const auto sp = angular_spectrum(hp, integer_lags(1), 2);
  const TemporalCovariance tc(sp, 1);
  const std::size_t R = 40000;
  const auto c = sample_temporal(tc, R, 6);
  for (int n = 0; n <= 2; ++n) {
    double s2 = 0.0;
    for (std::size_t r = 0; r < R; ++r) s2 += c.at(n, 1, 0, r) * c.at(n, 1, 0, r);
    const double b = sp.at(n, 0);
    EXPECT_NEAR(s2 / R, b, 3 * b * std::sqrt(2.0 / R));
  }
}

TEST(SampleTemporal, MomentsMatchSpectrum) {
  const auto hp = HyperparamVector::s1(0.5, 0.3, 0.7, 0.9, 0.0);
  const auto sp = angular_spectrum(hp, integer_lags(5), 3);
  const TemporalCovariance tc(sp, 5);
  const std::size_t R = 20000;
  const auto c = sample_temporal(tc, R, 7);
  for (int n = 0; n <= 3; ++n) {
    double v = 0.0, lag1 = 0.0;
    std::size_t cnt = 0;
    for (int j = 1; j <= 2 * n + 1; ++j)
      for (std::size_t r = 0; r < R; ++r) {
        v += c.at(n, j, 2, r) * c.at(n, j, 2, r);
        lag1 += c.at(n, j, 2, r) * c.at(n, j, 3, r);
        ++cnt;
      }
    const double b0 = sp.at(n, 0), b1 = sp.at(n, 1);
    EXPECT_NEAR(v / cnt, b0, 3 * b0 * std::sqrt(2.0 / cnt)) << n;
    EXPECT_NEAR(lag1 / cnt, b1, 3 * std::sqrt((b0 * b0 + b1 * b1) / cnt)) << n;
  }
}

TEST(SampleTemporal, ReplicateStreamsAreIndependentOfCount) {
  const auto hp = HyperparamVector::s1(0.5, 0.3, 0.7, 0.9, 0.0);
  const auto sp = angular_spectrum(hp, integer_lags(4), 2);
  const TemporalCovariance tc(sp, 4);
  const auto a = sample_temporal(tc, 3, 9);
  const auto b = sample_temporal(tc, 7, 9);
  for (std::size_t t = 0; t < 4; ++t)
    for (std::size_t r = 0; r < 3; ++r)
      for (std::size_t k = 0; k < a.per_slice(); ++k) EXPECT_EQ(a.slice(t, r)[k], b.slice(t, r)[k]);
  CoefficientField into(2, 4, 7);
  const std::vector<std::size_t> which{5};
  sample_temporal_into(tc, into, which, 9);
  for (std::size_t t = 0; t < 4; ++t)
    for (std::size_t k = 0; k < into.per_slice(); ++k) {
      EXPECT_EQ(into.slice(t, 5)[k], b.slice(t, 5)[k]);
      EXPECT_EQ(into.slice(t, 4)[k], 0.0);
    }
}

TEST(SampleTemporal, ZeroSpectrumGivesZeros) {
  AngularSpectrum sp(2, integer_lags(3));
  const auto c = sample_temporal(TemporalCovariance(sp, 3), 4, 1);
  for (double v : c.raw()) EXPECT_EQ(v, 0.0);
}

TEST(SampleNoise, Moments) {
  const auto silent = sample_noise_coeffs(0.0, 2, 3, 4, 1);
  for (double v : silent.raw()) EXPECT_EQ(v, 0.0);
  const std::size_t R = 100000;
  const auto c = sample_noise_coeffs(1.0, 1, 1, R, 2);
  double s00 = 0.0, s11 = 0.0, cross = 0.0;
  for (std::size_t r = 0; r < R; ++r) {
    s00 += c.at(0, 1, 0, r) * c.at(0, 1, 0, r);
    s11 += c.at(1, 2, 0, r) * c.at(1, 2, 0, r);
    cross += c.at(0, 1, 0, r) * c.at(1, 2, 0, r);
  }
  EXPECT_NEAR(s00 / R, 1.0, 3 * std::sqrt(2.0 / R));
  EXPECT_NEAR(s11 / R, 1.0, 3 * std::sqrt(2.0 / R));
  EXPECT_NEAR(cross / R, 0.0, 3 * std::sqrt(1.0 / R));
  EXPECT_THROW(sample_noise_coeffs(-1.0, 1, 1, 1, 1), ArgumentError);
}

}  // namespace
}  // namespace sphgp
