#include "alphatex/image.hpp"

#include <cmath>
#include <numeric>

namespace alphatex {

namespace {

void check_side(int n) {
  if (n < 8 || !is_power_of_two(n)) {
    throw Error("image side length must be a power of two >= 8, got " + std::to_string(n));
  }
}

}  // namespace

ImagePlane::ImagePlane(int n, double fill) : n_(n) {
  check_side(n);
  values_.assign(static_cast<std::size_t>(n) * n, fill);
  validate();
}

ImagePlane::ImagePlane(int n, std::vector<double> values) : n_(n), values_(std::move(values)) {
  check_side(n);
  if (values_.size() != static_cast<std::size_t>(n) * n) {
    throw Error("image data size does not match side length");
  }
  validate();
}

void ImagePlane::validate() const {
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error("image contains a non-finite value");
  }
}

double ImagePlane::mean() const {
  return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

double ImagePlane::stddev() const {
  const double m = mean();
  double acc = 0.0;
  for (double v : values_) acc += (v - m) * (v - m);
  return std::sqrt(acc / static_cast<double>(values_.size()));
}

ColorImage::ColorImage(ImagePlane r, ImagePlane g, ImagePlane b)
    : channels{std::move(r), std::move(g), std::move(b)} {
  if (channels[1].size() != channels[0].size() || channels[2].size() != channels[0].size()) {
    throw Error("color channels must share the same side length");
  }
}

std::span<const ImagePlane> channels(const Texture& t) {
  if (const auto* g = std::get_if<ImagePlane>(&t)) return {g, 1};
  return std::get<ColorImage>(t).channels;
}

std::span<ImagePlane> channels(Texture& t) {
  if (auto* g = std::get_if<ImagePlane>(&t)) return {g, 1};
  return std::get<ColorImage>(t).channels;
}

int texture_size(const Texture& t) { return channels(t)[0].size(); }

bool is_color(const Texture& t) { return std::holds_alternative<ColorImage>(t); }

std::vector<double> flatten(const Texture& t) {
  std::vector<double> out;
  for (const auto& c : channels(t)) out.insert(out.end(), c.values().begin(), c.values().end());
  return out;
}

Texture unflatten(std::span<const double> values, const Texture& shape) {
  const int n = texture_size(shape);
  const std::size_t np = static_cast<std::size_t>(n) * n;
  const auto nc = channels(shape).size();
  if (values.size() != np * nc) throw Error("flat vector does not match texture shape");
  auto plane = [&](std::size_t c) {
    return ImagePlane(n, std::vector<double>(values.begin() + c * np, values.begin() + (c + 1) * np));
  };
  if (nc == 1) return plane(0);
  return ColorImage(plane(0), plane(1), plane(2));
}

ImagePlane circular_shift(const ImagePlane& in, int dx, int dy) {
  const int n = in.size();
  ImagePlane out(n);
  for (int y = 0; y < n; ++y) {
    const int ys = ((y - dy) % n + n) % n;
    for (int x = 0; x < n; ++x) {
      const int xs = ((x - dx) % n + n) % n;
      out.at(x, y) = in.at(xs, ys);
    }
  }
  return out;
}

Texture circular_shift(const Texture& in, int dx, int dy) {
  if (const auto* g = std::get_if<ImagePlane>(&in)) return circular_shift(*g, dx, dy);
  const auto& c = std::get<ColorImage>(in).channels;
  return ColorImage(circular_shift(c[0], dx, dy), circular_shift(c[1], dx, dy),
                    circular_shift(c[2], dx, dy));
}

}  // namespace alphatex
