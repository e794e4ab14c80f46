#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "alphatex/oracles.hpp"
#include "alphatex/rng.hpp"
#include "alphatex/wavelets.hpp"

using namespace alphatex;

namespace {

double max_abs_diff(const ComplexPlane& a, const ComplexPlane& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double max_abs(const ComplexPlane& a) {
  double m = 0.0;
  for (const auto& v : a) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

TEST(FilterBank, HasOneFilterPerBandPlusLowPass) {
  const FilterBank bank = build_filter_bank(64, 3, 4);
  EXPECT_EQ(bank.band_count(), 12);
  EXPECT_EQ(bank.low_pass_hat().size(), 64u * 64u);
  for (int j = 0; j < 3; ++j)
    for (int t = 0; t < 4; ++t) EXPECT_EQ(bank.band_pass_hat(j, t).size(), 64u * 64u);
}

TEST(FilterBank, BandPassHasZeroMeanAndUnitL1) {
  const FilterBank bank = build_filter_bank(128, 4, 4);
  for (int j = 0; j < 4; ++j) {
    for (int t = 0; t < 4; ++t) {
      EXPECT_LT(std::abs(bank.band_pass_hat(j, t)[0]), 1e-12);
      double l1 = 0.0;
      for (const auto& v : bank.band_pass_spatial(j, t)) l1 += std::abs(v);
      EXPECT_NEAR(l1, 1.0, 1e-12);
    }
  }
  EXPECT_NEAR(bank.low_pass_hat()[0].real(), 1.0, 1e-12);
}

TEST(FilterBank, LittlewoodPaleyRatioIsBounded) {
  const FilterBank bank = build_filter_bank(256, 5, 4);
  const auto a = littlewood_paley_sum(bank);
  const auto [lo, hi] = std::minmax_element(a.begin(), a.end());
  ASSERT_GT(*lo, 0.0);
  EXPECT_LE(*hi / *lo, 10.0);
}

TEST(FilterBank, RejectsInvalidParameters) {
  EXPECT_THROW(build_filter_bank(48, 2, 4), Error);
  EXPECT_THROW(build_filter_bank(64, 0, 4), Error);
  EXPECT_THROW(build_filter_bank(64, 2, 0), Error);
  EXPECT_THROW(build_filter_bank(64, 5, 4), Error);
  EXPECT_NO_THROW(build_filter_bank(64, 4, 4));
  EXPECT_THROW(parse_wavelet_family("haar"), Error);
  EXPECT_EQ(parse_wavelet_family("morlet"), WaveletFamily::morlet);
}

TEST(FilterBank, OrientationAngles) {
  const FilterBank bank = build_filter_bank(32, 2, 4);
  for (int t = 0; t < 4; ++t) EXPECT_DOUBLE_EQ(bank.angle(t), t * std::numbers::pi / 4);
}

TEST(WaveletTransform, DeltaReturnsFilters) {
  const int n = 32;
  const FilterBank bank = build_filter_bank(n, 2, 4);
  ImagePlane delta(n);
  delta.at(0, 0) = 1.0;
  const auto w = wavelet_transform(delta, bank);
  for (int j = 0; j < 2; ++j)
    for (int t = 0; t < 4; ++t) EXPECT_LT(max_abs_diff(w.at(j, t), bank.band_pass_spatial(j, t)), 1e-14);
  EXPECT_LT(max_abs_diff(w.low, bank.low_pass_spatial()), 1e-14);
}

TEST(WaveletTransform, ConstantImageHasZeroBandsAndConstantLowPass) {
  const int n = 32;
  const FilterBank bank = build_filter_bank(n, 3, 4);
  const auto w = wavelet_transform(ImagePlane(n, 0.7), bank);
  for (const auto& b : w.band) EXPECT_LT(max_abs(b), 1e-12);
  for (const auto& v : w.low) EXPECT_NEAR(v.real(), 0.7, 1e-12);
}

TEST(WaveletTransform, MatchesDirectConvolution) {
  const int n = 8;
  const FilterBank bank = build_filter_bank(n, 1, 4);
  const ImagePlane x = sample_gaussian_image(n, 0.0, 1.0, Seed{11});
  const auto w = wavelet_transform(x, bank);
  for (int t = 0; t < 4; ++t) {
    const auto ref = naive_convolution(x.data(), bank.band_pass_spatial(0, t), n);
    EXPECT_LT(max_abs_diff(w.at(0, t), ref), 1e-12);
  }
  EXPECT_LT(max_abs_diff(w.low, naive_convolution(x.data(), bank.low_pass_spatial(), n)), 1e-12);
}

TEST(WaveletTransform, IsLinear) {
  const int n = 32;
  const FilterBank bank = build_filter_bank(n, 2, 4);
  const ImagePlane a = sample_gaussian_image(n, 0.0, 1.0, Seed{1});
  const ImagePlane b = sample_gaussian_image(n, 0.0, 1.0, Seed{2});
  ImagePlane c(n);
  for (std::size_t i = 0; i < c.pixel_count(); ++i) c.data()[i] = 2.0 * a.data()[i] - 3.0 * b.data()[i];
  const auto wa = wavelet_transform(a, bank), wb = wavelet_transform(b, bank), wc = wavelet_transform(c, bank);
  for (int k = 0; k < bank.band_count(); ++k) {
    ComplexPlane expected(wa.band[k].size());
    for (std::size_t i = 0; i < expected.size(); ++i) expected[i] = 2.0 * wa.band[k][i] - 3.0 * wb.band[k][i];
    EXPECT_LT(max_abs_diff(wc.band[k], expected), 1e-12);
  }
}

TEST(WaveletTransform, CommutesWithTranslation) {
  const int n = 32;
  const FilterBank bank = build_filter_bank(n, 2, 4);
  const ImagePlane x = sample_gaussian_image(n, 0.0, 1.0, Seed{3});
  const auto w = wavelet_transform(x, bank);
  const auto ws = wavelet_transform(circular_shift(x, 5, -7), bank);
  for (int k = 0; k < bank.band_count(); ++k) {
    double err = 0.0;
    for (int y = 0; y < n; ++y)
      for (int xx = 0; xx < n; ++xx) {
        const int sx = (xx - 5 + n) % n, sy = (y + 7) % n;
        err = std::max(err, std::abs(ws.band[k][y * n + xx] - w.band[k][sy * n + sx]));
      }
    EXPECT_LT(err, 1e-12);
  }
}

TEST(WaveletTransform, BandEnergyMatchesFourierEnergy) {
  const int n = 32;
  const FilterBank bank = build_filter_bank(n, 2, 4);
  const ImagePlane x = sample_gaussian_image(n, 0.0, 1.0, Seed{4});
  const auto w = wavelet_transform(x, bank);
  const auto xh = bank.fft().forward_real(x.data());
  for (int k = 0; k < bank.band_count(); ++k) {
    double space = 0.0, freq = 0.0;
    for (const auto& v : w.band[k]) space += std::norm(v);
    const auto& h = bank.band_pass_hat(k / 4, k % 4);
    for (std::size_t i = 0; i < h.size(); ++i) freq += std::norm(xh[i] * h[i]);
    EXPECT_NEAR(space, freq / (n * n), 1e-10 * space);
  }
}

TEST(WaveletTransform, RejectsSizeMismatch) {
  const FilterBank bank = build_filter_bank(32, 2, 4);
  EXPECT_THROW(wavelet_transform(ImagePlane(16), bank), Error);
}

TEST(AdjointWaveletTransform, ZeroInputGivesZero) {
  const FilterBank bank = build_filter_bank(32, 2, 4);
  const auto w = wavelet_transform(ImagePlane(32), bank);
  const ImagePlane back = adjoint_wavelet_transform(w, bank);
  for (double v : back.data()) EXPECT_EQ(v, 0.0);
}

TEST(AdjointWaveletTransform, SatisfiesDotProductIdentity) {
  const FilterBank bank = build_filter_bank(32, 3, 4);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto r = adjoint_report(bank, Seed{s});
    EXPECT_TRUE(r.passed) << r.detail;
    EXPECT_LT(r.max_rel_err, 1e-12);
  }
}

TEST(AdjointWaveletTransform, NormalOperatorIsPositive) {
  const FilterBank bank = build_filter_bank(32, 2, 4);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const ImagePlane x = sample_gaussian_image(32, 0.0, 1.0, Seed{s});
    const ImagePlane y = adjoint_wavelet_transform(wavelet_transform(x, bank), bank);
    const double q = std::inner_product(x.data().begin(), x.data().end(), y.data().begin(), 0.0);
    EXPECT_GE(q, 0.0);
  }
}
