#pragma once

#include <filesystem>

#include "alphatex/image.hpp"

namespace alphatex {

enum class ColorMode { gray, color };

/// Load a PNG / PGM / PPM file, scaling pixel values to [0, 1].
///
/// Gray mode averages the channels of a color source. The image must be
/// square with a power-of-two side; callers crop or resize upstream.
Texture load_image(const std::filesystem::path& path, ColorMode mode);

/// Write an 8-bit PNG. Values are clamped to [0, 1] and quantized as round(255 v).
void save_png(const std::filesystem::path& path, const Texture& image);
void save_png(const std::filesystem::path& path, const ImagePlane& image);

/// Rectangular gray PNG from a row-major buffer, same quantization.
void save_gray_png(const std::filesystem::path& path, int width, int height, std::span<const double> values);

/// The exact values an image takes after a save/load round trip.
Texture quantize_8bit(const Texture& image);

}  // namespace alphatex
