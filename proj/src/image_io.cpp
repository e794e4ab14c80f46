#include "alphatex/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace alphatex {

namespace {

double full_scale(int depth) {
  switch (depth) {
    case CV_8U: return 255.0;
    case CV_16U: return 65535.0;
    default: throw Error("unsupported pixel depth");
  }
}

std::uint8_t quantize(double v) {
  return static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(v, 0.0, 1.0)));
}

}  // namespace

Texture load_image(const std::filesystem::path& path, ColorMode mode) {
  cv::Mat raw = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (raw.empty()) throw Error("cannot read image: " + path.string());
  if (raw.rows != raw.cols || raw.rows < 8 || !is_power_of_two(raw.rows)) {
    throw Error("image must be square with a power-of-two side >= 8, got " +
                std::to_string(raw.cols) + "x" + std::to_string(raw.rows) + ": " + path.string());
  }
  const int n = raw.rows;
  const double scale = full_scale(raw.depth());
  const int src_channels = raw.channels();
  cv::Mat pixels;
  raw.convertTo(pixels, CV_MAKETYPE(CV_64F, src_channels));

  // OpenCV stores color as BGR(A); an alpha channel is ignored.
  auto channel_plane = [&](int c) {
    ImagePlane p(n);
    for (int y = 0; y < n; ++y) {
      const double* row = pixels.ptr<double>(y);
      for (int x = 0; x < n; ++x) p.at(x, y) = row[x * src_channels + c] / scale;  // exact k / 255, as quantize_8bit
    }
    return p;
  };

  const int color_channels = src_channels >= 3 ? 3 : 1;
  if (color_channels == 1) {
    ImagePlane g = channel_plane(0);
    if (mode == ColorMode::gray) return g;
    return ColorImage(g, g, g);
  }
  ImagePlane b = channel_plane(0), g = channel_plane(1), r = channel_plane(2);
  if (mode == ColorMode::color) return ColorImage(std::move(r), std::move(g), std::move(b));
  ImagePlane gray(n);
  for (std::size_t i = 0; i < gray.pixel_count(); ++i) {
    gray.data()[i] = (r.data()[i] + g.data()[i] + b.data()[i]) / 3.0;
  }
  return gray;
}

void save_png(const std::filesystem::path& path, const Texture& image) {
  const int n = texture_size(image);
  const auto ch = channels(image);
  cv::Mat out;
  if (ch.size() == 1) {
    out.create(n, n, CV_8UC1);
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) out.at<std::uint8_t>(y, x) = quantize(ch[0].at(x, y));
  } else {
    out.create(n, n, CV_8UC3);
    for (int y = 0; y < n; ++y)
      for (int x = 0; x < n; ++x) {
        auto& px = out.at<cv::Vec3b>(y, x);
        px[0] = quantize(ch[2].at(x, y));
        px[1] = quantize(ch[1].at(x, y));
        px[2] = quantize(ch[0].at(x, y));
      }
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  if (!cv::imwrite(path.string(), out)) throw Error("cannot write image: " + path.string());
}

void save_png(const std::filesystem::path& path, const ImagePlane& image) {
  save_png(path, Texture{image});
}

void save_gray_png(const std::filesystem::path& path, int width, int height, std::span<const double> values) {
  if (width < 1 || height < 1 || values.size() != static_cast<std::size_t>(width) * height) {
    throw Error("save_gray_png: buffer does not match the given size");
  }
  cv::Mat out(height, width, CV_8UC1);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) out.at<std::uint8_t>(y, x) = quantize(values[static_cast<std::size_t>(y) * width + x]);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  if (!cv::imwrite(path.string(), out)) throw Error("cannot write image: " + path.string());
}

Texture quantize_8bit(const Texture& image) {
  Texture out = image;
  for (auto& c : channels(out))
    for (double& v : c.data()) v = quantize(v) / 255.0;
  return out;
}

}  // namespace alphatex
