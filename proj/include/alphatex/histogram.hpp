#pragma once

#include <span>
#include <vector>

#include "alphatex/image.hpp"

namespace alphatex {

/// Exact histogram specification by rank assignment.
///
/// The k-th smallest value of `synth` (ties broken by raster index) receives
/// the k-th smallest value of `target`. The output's sorted multiset equals the
/// target's exactly.
std::vector<double> histogram_match(std::span<const double> synth, std::span<const double> target);

ImagePlane histogram_match(const ImagePlane& synth, const ImagePlane& target);

/// Channel-wise matching for color textures.
Texture histogram_match(const Texture& synth, const Texture& target);

}  // namespace alphatex
