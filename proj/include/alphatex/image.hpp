#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace alphatex {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr bool is_power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

/// Square n x n real image, row-major, pixel (x, y) at data[y * n + x].
///
/// Invariants: n >= 8 is a power of two and every value is finite. They are
/// checked on construction; direct writes through data() are the caller's
/// responsibility (use validate() afterwards if the source is untrusted).
class ImagePlane {
 public:
  ImagePlane() = default;
  explicit ImagePlane(int n, double fill = 0.0);
  ImagePlane(int n, std::vector<double> values);

  int size() const { return n_; }
  std::size_t pixel_count() const { return values_.size(); }

  double& at(int x, int y) { return values_[static_cast<std::size_t>(y) * n_ + x]; }
  double at(int x, int y) const { return values_[static_cast<std::size_t>(y) * n_ + x]; }

  std::span<double> data() { return values_; }
  std::span<const double> data() const { return values_; }
  const std::vector<double>& values() const { return values_; }

  double mean() const;
  double stddev() const;

  void validate() const;

  bool operator==(const ImagePlane&) const = default;

 private:
  int n_ = 0;
  std::vector<double> values_;
};

/// Three planes (R, G, B) of identical side length.
struct ColorImage {
  std::array<ImagePlane, 3> channels;

  ColorImage() = default;
  ColorImage(ImagePlane r, ImagePlane g, ImagePlane b);

  int size() const { return channels[0].size(); }
  bool operator==(const ColorImage&) const = default;
};

/// A gray or color texture; the model treats both as a list of channels.
using Texture = std::variant<ImagePlane, ColorImage>;

std::span<const ImagePlane> channels(const Texture& t);
std::span<ImagePlane> channels(Texture& t);
int texture_size(const Texture& t);
bool is_color(const Texture& t);

/// Concatenate all channels into one vector (channel-major).
std::vector<double> flatten(const Texture& t);
/// Inverse of flatten, using `shape` for the channel count and side length.
Texture unflatten(std::span<const double> values, const Texture& shape);

/// Circular translation: out(u) = in(u - shift).
ImagePlane circular_shift(const ImagePlane& in, int dx, int dy);
Texture circular_shift(const Texture& in, int dx, int dy);

}  // namespace alphatex
