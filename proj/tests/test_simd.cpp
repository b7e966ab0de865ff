#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "sphgp/errors.hpp"
#include "sphgp/rng.hpp"
#include "sphgp/simd/kernels.hpp"

namespace sphgp {
namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t id) {
  RandomStream rs(99, StreamTag::MonteCarlo, id);
  std::vector<double> v(n);
  rs.fill_normal(v);
  return v;
}

std::vector<const simd::KernelTable*> variants() {
  std::vector<const simd::KernelTable*> out;
  if (const auto* t = simd::avx2_table()) out.push_back(t);
  if (const auto* t = simd::neon_table()) out.push_back(t);
  return out;
}

// Lengths cover empty input, partial vectors and the unrolled main loop.
const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 31, 64, 101, 1000};

TEST(Simd, ScalarTableIsAlwaysAvailable) {
  EXPECT_TRUE(simd::isa_available(simd::Isa::Scalar));
  EXPECT_EQ(simd::scalar_table().isa, simd::Isa::Scalar);
}

TEST(Simd, ScalarKernelsMatchNaiveLoops) {
  const auto& s = simd::scalar_table();
  const auto a = random_vector(37, 1);
  const auto b = random_vector(37, 2);
  double dot = 0.0, ss = 0.0, wss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    ss += a[i] * a[i];
    wss += b[i] * b[i] * a[i] * a[i];
  }
  std::vector<double> w(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) w[i] = a[i] * a[i];
  EXPECT_NEAR(s.dot(a.data(), b.data(), a.size()), dot, 1e-13);
  EXPECT_NEAR(s.sum_squares(a.data(), a.size()), ss, 1e-13);
  EXPECT_NEAR(s.weighted_sum_squares(b.data(), w.data(), b.size()), wss, 1e-13);
  std::vector<double> out(a.size());
  s.residual_squares(0.3, 1.7, a.data(), out.data(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_DOUBLE_EQ(out[i], (0.3 - 1.7 * a[i]) * (0.3 - 1.7 * a[i]));
  double mx = -std::numeric_limits<double>::infinity();
  for (double v : a) mx = std::max(mx, v);
  EXPECT_EQ(s.max_value(a.data(), a.size()), mx);
  EXPECT_EQ(s.max_value(a.data(), 0), -std::numeric_limits<double>::infinity());
}

TEST(Simd, VariantsMatchScalarReference) {
  const auto& ref = simd::scalar_table();
  for (const auto* t : variants()) {
    SCOPED_TRACE(std::string(simd::isa_name(t->isa)));
    for (std::size_t n : kLengths) {
      SCOPED_TRACE(n);
      const auto a = random_vector(n, 10 + n);
      const auto b = random_vector(n, 20 + n);
      std::vector<double> w(n);
      for (std::size_t i = 0; i < n; ++i) w[i] = std::abs(b[i]) + 0.1;
      const double scale = 1e-13 * (1.0 + static_cast<double>(n));
      EXPECT_NEAR(t->dot(a.data(), b.data(), n), ref.dot(a.data(), b.data(), n), scale);
      EXPECT_NEAR(t->sum_squares(a.data(), n), ref.sum_squares(a.data(), n), scale);
      EXPECT_NEAR(t->weighted_sum_squares(a.data(), w.data(), n), ref.weighted_sum_squares(a.data(), w.data(), n),
                  scale);
      EXPECT_EQ(t->max_value(a.data(), n), ref.max_value(a.data(), n));

      std::vector<double> y1 = b, y2 = b;
      t->axpy(0.75, a.data(), y1.data(), n);
      ref.axpy(0.75, a.data(), y2.data(), n);
      for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(y1[i], y2[i], 1e-15);

      std::vector<double> r1(n), r2(n);
      t->residual_squares(-0.4, 2.5, a.data(), r1.data(), n);
      ref.residual_squares(-0.4, 2.5, a.data(), r2.data(), n);
      for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(r1[i], r2[i], 1e-14 * (1.0 + r2[i]));
    }
  }
}

TEST(Simd, VariantsAreDeterministic) {
  const auto a = random_vector(333, 5);
  const auto b = random_vector(333, 6);
  for (const auto* t : variants()) {
    const double first = t->dot(a.data(), b.data(), a.size());
    for (int i = 0; i < 5; ++i) EXPECT_EQ(t->dot(a.data(), b.data(), a.size()), first);
  }
}

TEST(Simd, ScopedIsaSwitchesAndRestores) {
  const simd::Isa before = simd::active_isa();
  {
    simd::ScopedIsa guard(simd::Isa::Scalar);
    EXPECT_EQ(simd::active_isa(), simd::Isa::Scalar);
    const auto a = random_vector(50, 7);
    EXPECT_EQ(simd::sum_squares(a), simd::scalar_table().sum_squares(a.data(), a.size()));
  }
  EXPECT_EQ(simd::active_isa(), before);
}

TEST(Simd, UnavailableIsaThrows) {
  for (simd::Isa isa : {simd::Isa::Avx2, simd::Isa::Neon})
    if (!simd::isa_available(isa)) {
      EXPECT_THROW(simd::set_isa(isa), ArgumentError);
    }
}

TEST(Simd, SpanWrappersCheckLengths) {
  std::vector<double> a(4, 1.0), b(3, 1.0);
  EXPECT_THROW(simd::dot(a, b), ShapeError);
}

}  // namespace
}  // namespace sphgp
