#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "alphatex/oracles.hpp"
#include "alphatex/representation.hpp"
#include "alphatex/rng.hpp"

using namespace alphatex;

constexpr double kPi = std::numbers::pi;

TEST(Rectify, Examples) {
  EXPECT_DOUBLE_EQ(rectify(Complex(1.0, 0.0), 0.0), 1.0);
  EXPECT_DOUBLE_EQ(rectify(Complex(1.0, 0.0), kPi), 0.0);
  EXPECT_NEAR(rectify(Complex(0.0, 1.0), 1.5 * kPi), 1.0, 1e-15);
  EXPECT_NEAR(rectify(Complex(0.0, 1.0), 0.5 * kPi), 0.0, 1e-15);
  EXPECT_EQ(rectify(Complex(0.0, 0.0), 0.3), 0.0);
  EXPECT_NEAR(rectify(Complex(3.0, 4.0), 0.0), 3.0, 1e-15);
}

TEST(Rectify, PositiveHomogeneity) {
  NormalSampler rng(Seed{1});
  for (int i = 0; i < 100; ++i) {
    const Complex z(rng.normal(), rng.normal());
    const double a = 2 * kPi * rng.uniform(), lambda = 5 * rng.uniform();
    EXPECT_NEAR(rectify(lambda * z, a), lambda * rectify(z, a), 1e-12);
  }
}

TEST(Rectify, PhaseRotationShiftsAlpha) {
  NormalSampler rng(Seed{2});
  for (int i = 0; i < 100; ++i) {
    const Complex z(rng.normal(), rng.normal());
    const double a = 2 * kPi * rng.uniform(), b = 2 * kPi * rng.uniform();
    EXPECT_NEAR(rectify(std::polar(1.0, b) * z, a), rectify(z, a + b), 1e-12);
  }
}

TEST(RectifierDecomposition, RecoversInput) {
  EXPECT_EQ(rectifier_decomposition_check(Complex(2.0, -3.0)), Complex(2.0, -3.0));
  const auto r = rectifier_decomposition_report(10000, Seed{3});
  EXPECT_TRUE(r.passed);
  EXPECT_LT(r.max_rel_err, 1e-14);
}

TEST(PhaseHarmonic, Examples) {
  const Complex z(0.0, 2.0);
  EXPECT_NEAR(std::abs(phase_harmonic(z, 2) - Complex(-2.0, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(phase_harmonic(z, 0) - Complex(2.0, 0.0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(phase_harmonic(z, -1) - Complex(0.0, -2.0)), 0.0, 1e-15);
  EXPECT_EQ(phase_harmonic(z, 1), z);
  EXPECT_EQ(phase_harmonic(Complex(0.0, 0.0), 3), Complex(0.0, 0.0));
}

TEST(RectifierFourierCoefficient, KnownValues) {
  EXPECT_NEAR(std::abs(rectifier_fourier_coefficient(0, 256) - 1.0 / kPi), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(rectifier_fourier_coefficient(1, 256) - 0.25), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(rectifier_fourier_coefficient(-1, 256) - 0.25), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(rectifier_fourier_coefficient(3, 256)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(rectifier_fourier_coefficient(2, 256) - 1.0 / (3.0 * kPi)), 0.0, 1e-14);
}

TEST(RectifierFourierCoefficient, MatchesClosedForm) {
  for (int k = -64; k <= 64; ++k) {
    const Complex q = rectifier_fourier_coefficient(k, 4 * std::abs(k) + 64);
    EXPECT_LT(std::abs(q - rectifier_coefficient_closed_form(k)), 1e-12) << "k = " << k;
  }
  EXPECT_THROW(rectifier_fourier_coefficient(10, 50), Error);
}

TEST(RectifierSeries, WithinTailBound) {
  const FilterBank bank = build_filter_bank(32, 2, 4);
  const ImagePlane x = sample_gaussian_image(32, 0.0, 1.0, Seed{4});
  const auto r = rectifier_series_report(x, bank, 4, 64);
  EXPECT_TRUE(r.passed) << r.detail;
  // The tail of |c_k| decays like 1/k^2, so the relative error shrinks with K.
  const auto coarse = rectifier_series_report(x, bank, 4, 8);
  EXPECT_LT(r.max_rel_err, coarse.max_rel_err);
}

TEST(PhaseGrid, UniformAndValidated) {
  const auto g = phase_grid(4);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_DOUBLE_EQ(g[2], kPi);
  EXPECT_THROW(phase_grid(0), Error);
}

TEST(PlaneLayout, IndexRoundTrip) {
  const PlaneLayout layout{3, 4, 2, 3};
  EXPECT_EQ(layout.count(), 72);
  for (int p = 0; p < layout.count(); ++p) EXPECT_EQ(layout.index(layout.gamma(p)), p);
  EXPECT_FALSE(layout.contains(Gamma{3, 0, 0, 0}));
}

TEST(Representation, ConstantImageIsZero) {
  const FilterBank bank = build_filter_bank(32, 2, 4);
  const ImagePlane x(32, 0.4);
  const auto stack = compute_representation(std::span(&x, 1), bank, 4, Boundary::periodic);
  for (const auto& plane : stack.planes)
    for (double v : plane) EXPECT_LT(v, 1e-12);
}

TEST(Representation, ScalesPositively) {
  const FilterBank bank = build_filter_bank(32, 2, 4);
  const ImagePlane x = sample_gaussian_image(32, 0.0, 1.0, Seed{5});
  ImagePlane y(32);
  for (std::size_t i = 0; i < x.pixel_count(); ++i) y.data()[i] = 2.5 * x.data()[i];
  const auto a = compute_representation(std::span(&x, 1), bank, 4, Boundary::periodic);
  const auto b = compute_representation(std::span(&y, 1), bank, 4, Boundary::periodic);
  for (std::size_t p = 0; p < a.planes.size(); ++p)
    for (std::size_t i = 0; i < a.planes[p].size(); ++i) EXPECT_NEAR(b.planes[p][i], 2.5 * a.planes[p][i], 1e-12);
}

TEST(Representation, MeansFollowTheAveragingRegion) {
  const FilterBank bank = build_filter_bank(32, 2, 4);
  const ImagePlane x = sample_gaussian_image(32, 0.0, 1.0, Seed{6});
  const auto per = compute_representation(std::span(&x, 1), bank, 4, Boundary::periodic);
  const auto win = compute_representation(std::span(&x, 1), bank, 4, Boundary::windowed);
  ASSERT_EQ(per.means.levels(), 2);
  for (int p = 0; p < per.layout.count(); ++p) {
    EXPECT_EQ(per.means.at(p, 0), per.means.at(p, 1));
    EXPECT_NEAR(per.means.at(p, 0), region_mean(per.planes[p], 32, Boundary::periodic, 0), 1e-15);
    for (int level = 0; level < 2; ++level)
      EXPECT_NEAR(win.means.at(p, level), region_mean(win.planes[p], 32, Boundary::windowed, level), 1e-15);
  }
  // Supplied means are copied verbatim.
  const auto copied = compute_representation(std::span(&x, 1), bank, 4, Boundary::windowed, per.means);
  EXPECT_EQ(copied.means, per.means);
  EXPECT_THROW(compute_representation(std::span(&x, 1), bank, 4, Boundary::windowed, PlaneMeans(3, 2)), Error);
}

TEST(Representation, WindowMargins) {
  EXPECT_EQ(window_margin(Boundary::periodic, 3), 0);
  EXPECT_EQ(window_margin(Boundary::windowed, 3), 8);
  const std::vector<double> plane(64, 1.0);
  EXPECT_THROW(region_mean(plane, 8, Boundary::windowed, 2), Error);
}
