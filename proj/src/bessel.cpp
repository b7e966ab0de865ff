#include "sphgp/bessel.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "sphgp/errors.hpp"

namespace sphgp {
namespace {

constexpr double kEps = 1e-17;
constexpr int kMaxIter = 10000;

// Taylor coefficients of 1/Gamma(z) = sum_{k>=1} c_k z^k.
constexpr std::array<double, 22> kRecipGamma{
    1.0,
    0.5772156649015328606,
    -0.6558780715202538811,
    -0.0420026350340952355,
    0.1665386113822914895,
    -0.0421977345555443367,
    -0.0096219715278769736,
    0.0072189432466630995,
    -0.0011651675918590651,
    -0.0002152416741149510,
    0.0001280502823881162,
    -0.0000201348547807882,
    -0.0000012504934821427,
    0.0000011330272319817,
    -0.0000002056338416978,
    0.0000000061160951045,
    0.0000000050020076445,
    -0.0000000011812745705,
    0.0000000001043426712,
    0.0000000000077822634,
    -0.0000000000036968056,
    0.0000000000005100370,
};

struct GammaTerms {
  double gam1;    // (1/G(1-mu) - 1/G(1+mu)) / (2 mu)
  double gam2;    // (1/G(1-mu) + 1/G(1+mu)) / 2
  double gampl;   // 1/G(1+mu)
  double gammi;   // 1/G(1-mu)
};

// |mu| <= 1/2. 1/G(1+mu) = sum_k c_k mu^(k-1), so the even and odd parts of
// that series give gam1 and gam2 without cancellation near mu = 0.
GammaTerms gamma_terms(double mu) {
  const double mu2 = mu * mu;
  double even = 0.0, odd = 0.0;
  for (int k = static_cast<int>(kRecipGamma.size()); k >= 1; --k) {
    const double c = kRecipGamma[static_cast<std::size_t>(k - 1)];
    if (k % 2 == 0)
      even = even * mu2 + c;  // c_2, c_4, ... multiply mu^0, mu^2, ...
    else
      odd = odd * mu2 + c;  // c_1, c_3, ...
  }
  GammaTerms g;
  g.gam1 = -even;
  g.gam2 = odd;
  g.gampl = odd + mu * even;
  g.gammi = odd - mu * even;
  return g;
}

}  // namespace

double bessel_k(double order, double x) {
  if (!(x > 0.0)) throw DomainError("bessel_k: argument must be positive");
  if (!(order >= 0.0)) throw DomainError("bessel_k: order must be nonnegative");

  const int nl = static_cast<int>(order + 0.5);
  const double mu = order - nl;
  const double mu2 = mu * mu;
  const double xi = 1.0 / x;
  const double xi2 = 2.0 * xi;
  double kmu, k1;

  if (x <= 2.0) {
    const double x2 = 0.5 * x;
    const double pimu = std::numbers::pi * mu;
    const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
    const GammaTerms g = gamma_terms(mu);
    double ff = fact * (g.gam1 * std::cosh(e) + g.gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / g.gampl;
    double q = 0.5 / (e * g.gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    int i = 1;
    for (; i <= kMaxIter; ++i) {
      const double di = i;
      ff = (di * ff + p + q) / (di * di - mu2);
      c *= d / di;
      p /= di - mu;
      q /= di + mu;
      const double del = c * ff;
      sum += del;
      const double del1 = c * (p - di * ff);
      sum1 += del1;
      if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    if (i > kMaxIter) throw NumericalError("bessel_k: series failed to converge");
    kmu = sum;
    k1 = sum1 * xi2;
  } else {
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    const double a1 = 0.25 - mu2;
    double q = a1, c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    int i = 2;
    for (; i <= kMaxIter; ++i) {
      a -= 2.0 * (i - 1);
      c = -a * c / i;
      const double qnew = (q1 - b * q2) / a;
      q1 = q2;
      q2 = qnew;
      q += c * qnew;
      b += 2.0;
      d = 1.0 / (b + a * d);
      delh = (b * d - 1.0) * delh;
      h += delh;
      const double dels = q * delh;
      s += dels;
      if (std::abs(dels / s) < kEps) break;
    }
    if (i > kMaxIter) throw NumericalError("bessel_k: continued fraction failed to converge");
    h = a1 * h;
    kmu = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
    k1 = kmu * (mu + x + 0.5 - h) * xi;
  }

  for (int i = 1; i <= nl; ++i) {
    const double next = (mu + i) * xi2 * k1 + kmu;
    kmu = k1;
    k1 = next;
  }
  return kmu;
}

}  // namespace sphgp
