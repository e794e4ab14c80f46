#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "alphatex/histogram.hpp"
#include "alphatex/image.hpp"
#include "alphatex/image_io.hpp"
#include "alphatex/rng.hpp"

using namespace alphatex;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "alphatex_test_image";
  fs::create_directories(dir);
  return dir;
}

void write_pgm(const fs::path& path, int n, unsigned char value) {
  std::ofstream out(path, std::ios::binary);
  out << "P5\n" << n << " " << n << "\n255\n";
  std::string pixels(static_cast<std::size_t>(n) * n, static_cast<char>(value));
  out.write(pixels.data(), static_cast<std::streamsize>(pixels.size()));
}

}  // namespace

TEST(ImagePlane, RejectsInvalidSides) {
  EXPECT_THROW(ImagePlane(4), Error);
  EXPECT_THROW(ImagePlane(12), Error);
  EXPECT_NO_THROW(ImagePlane(8));
  EXPECT_THROW(ImagePlane(8, std::vector<double>(63)), Error);
}

TEST(ImagePlane, RejectsNonFiniteValues) {
  std::vector<double> v(64, 0.0);
  v[5] = std::nan("");
  EXPECT_THROW(ImagePlane(8, v), Error);
  v[5] = INFINITY;
  EXPECT_THROW(ImagePlane(8, v), Error);
}

TEST(ColorImage, RequiresMatchingSides) {
  EXPECT_THROW(ColorImage(ImagePlane(8), ImagePlane(16), ImagePlane(8)), Error);
}

TEST(ImageIo, FullScalePgmLoadsAsOnes) {
  const fs::path p = temp_dir() / "white.pgm";
  write_pgm(p, 256, 255);
  const Texture t = load_image(p, ColorMode::gray);
  const auto& plane = std::get<ImagePlane>(t);
  ASSERT_EQ(plane.size(), 256);
  for (double v : plane.data()) ASSERT_EQ(v, 1.0);
}

TEST(ImageIo, GrayModeAveragesChannels) {
  const int n = 256;
  NormalSampler rng(Seed{3});
  std::array<ImagePlane, 3> c{ImagePlane(n), ImagePlane(n), ImagePlane(n)};
  for (auto& plane : c)
    for (double& v : plane.data()) v = std::round(255.0 * rng.uniform()) / 255.0;
  const fs::path p = temp_dir() / "rgb.png";
  save_png(p, Texture{ColorImage(c[0], c[1], c[2])});

  const auto gray = std::get<ImagePlane>(load_image(p, ColorMode::gray));
  for (std::size_t i = 0; i < gray.pixel_count(); ++i) {
    const double expected = (c[0].data()[i] + c[1].data()[i] + c[2].data()[i]) / 3.0;
    ASSERT_NEAR(gray.data()[i], expected, 1e-15);
  }
  const auto color = std::get<ColorImage>(load_image(p, ColorMode::color));
  for (int ch = 0; ch < 3; ++ch) EXPECT_EQ(color.channels[ch], c[ch]);
}

TEST(ImageIo, NonPowerOfTwoIsRejected) {
  const fs::path p = temp_dir() / "odd.png";
  save_gray_png(p, 250, 250, std::vector<double>(250 * 250, 0.5));
  EXPECT_THROW(load_image(p, ColorMode::gray), Error);
  const fs::path q = temp_dir() / "rect.png";
  save_gray_png(q, 64, 32, std::vector<double>(64 * 32, 0.5));
  EXPECT_THROW(load_image(q, ColorMode::gray), Error);
  EXPECT_THROW(load_image(temp_dir() / "missing.png", ColorMode::gray), Error);
}

TEST(ImageIo, RoundTripPreservesQuantizedValues) {
  const ImagePlane x = sample_gaussian_image(32, 0.5, 0.3, Seed{9});
  const Texture q = quantize_8bit(Texture{x});
  const fs::path p = temp_dir() / "roundtrip.png";
  save_png(p, q);
  EXPECT_EQ(std::get<ImagePlane>(load_image(p, ColorMode::gray)), std::get<ImagePlane>(q));
  // Saving the unquantized image gives the same file content.
  save_png(p, Texture{x});
  EXPECT_EQ(std::get<ImagePlane>(load_image(p, ColorMode::gray)), std::get<ImagePlane>(q));
}

TEST(Rng, ZeroStdGivesConstant) {
  const ImagePlane x = sample_gaussian_image(16, 0.5, 0.0, Seed{123});
  for (double v : x.data()) EXPECT_EQ(v, 0.5);
}

TEST(Rng, SameSeedSameImage) {
  EXPECT_EQ(sample_gaussian_image(64, 0.0, 1.0, Seed{7}), sample_gaussian_image(64, 0.0, 1.0, Seed{7}));
  EXPECT_NE(sample_gaussian_image(64, 0.0, 1.0, Seed{7}), sample_gaussian_image(64, 0.0, 1.0, Seed{8}));
}

TEST(Rng, SampleMeanWithinStandardError) {
  const ImagePlane x = sample_gaussian_image(128, 0.0, 1.0, Seed{7});
  EXPECT_LT(std::abs(x.mean()), 3.0 / 128.0);
  EXPECT_NEAR(x.stddev(), 1.0, 0.03);
}

TEST(Rng, NegativeStdThrows) { EXPECT_THROW(sample_gaussian_image(8, 0.0, -1.0, Seed{1}), Error); }

TEST(HistogramMatch, RankAssignmentWithRasterTieBreak) {
  const std::vector<double> synth{0.9, 0.1, 0.5, 0.5};
  const std::vector<double> target{0.0, 0.25, 0.5, 0.75};
  EXPECT_EQ(histogram_match(synth, target), (std::vector<double>{0.75, 0.0, 0.25, 0.5}));
}

TEST(HistogramMatch, IdentityAndConstantTarget) {
  const ImagePlane x = sample_gaussian_image(16, 0.0, 1.0, Seed{5});
  EXPECT_EQ(histogram_match(x, x), x);
  const ImagePlane c(16, 0.3);
  const ImagePlane m = histogram_match(x, c);
  for (double v : m.data()) EXPECT_EQ(v, 0.3);
}

TEST(HistogramMatch, SortedOutputEqualsSortedTargetAndIsIdempotent) {
  const ImagePlane a = sample_gaussian_image(32, 0.0, 1.0, Seed{1});
  const ImagePlane b = sample_gaussian_image(32, 2.0, 0.5, Seed{2});
  const ImagePlane m = histogram_match(a, b);
  auto sorted = [](const ImagePlane& p) {
    std::vector<double> v(p.data().begin(), p.data().end());
    std::sort(v.begin(), v.end());
    return v;
  };
  EXPECT_EQ(sorted(m), sorted(b));
  EXPECT_EQ(histogram_match(m, b), m);
  // Rank order follows the synthesized image.
  for (std::size_t i = 1; i < a.pixel_count(); ++i) {
    if (a.data()[i] < a.data()[i - 1]) {
      EXPECT_LE(m.data()[i], m.data()[i - 1]);
    }
  }
}

TEST(HistogramMatch, SizeMismatchThrows) {
  EXPECT_THROW(histogram_match(ImagePlane(8), ImagePlane(16)), Error);
}

TEST(HistogramMatch, ColorIsChannelWise) {
  const ColorImage a(sample_gaussian_image(8, 0, 1, Seed{1}), sample_gaussian_image(8, 0, 1, Seed{2}),
                     sample_gaussian_image(8, 0, 1, Seed{3}));
  const ColorImage b(sample_gaussian_image(8, 1, 1, Seed{4}), sample_gaussian_image(8, 2, 1, Seed{5}),
                     sample_gaussian_image(8, 3, 1, Seed{6}));
  const auto m = std::get<ColorImage>(histogram_match(Texture{a}, Texture{b}));
  for (int c = 0; c < 3; ++c) EXPECT_EQ(m.channels[c], histogram_match(a.channels[c], b.channels[c]));
}

TEST(CircularShift, MovesContentByShift) {
  ImagePlane x(8);
  x.at(1, 2) = 1.0;
  const ImagePlane y = circular_shift(x, 3, -3);
  EXPECT_EQ(y.at(4, 7), 1.0);
  double total = 0.0;
  for (double v : y.data()) total += v;
  EXPECT_EQ(total, 1.0);
}

TEST(Flatten, RoundTrip) {
  const Texture t = ColorImage(sample_gaussian_image(8, 0, 1, Seed{1}), sample_gaussian_image(8, 0, 1, Seed{2}),
                               sample_gaussian_image(8, 0, 1, Seed{3}));
  const auto v = flatten(t);
  EXPECT_EQ(v.size(), 3u * 64u);
  EXPECT_EQ(std::get<ColorImage>(unflatten(v, t)), std::get<ColorImage>(t));
  EXPECT_THROW(unflatten(std::vector<double>(10), t), Error);
}
