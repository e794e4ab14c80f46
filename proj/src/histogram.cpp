#include "alphatex/histogram.hpp"

#include <algorithm>
#include <numeric>

namespace alphatex {

std::vector<double> histogram_match(std::span<const double> synth, std::span<const double> target) {
  if (synth.size() != target.size()) throw Error("histogram_match: size mismatch");
  std::vector<std::size_t> order(synth.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return synth[a] < synth[b]; });
  std::vector<double> sorted_target(target.begin(), target.end());
  std::sort(sorted_target.begin(), sorted_target.end());

  std::vector<double> out(synth.size());
  for (std::size_t k = 0; k < order.size(); ++k) out[order[k]] = sorted_target[k];
  return out;
}

ImagePlane histogram_match(const ImagePlane& synth, const ImagePlane& target) {
  if (synth.size() != target.size()) throw Error("histogram_match: size mismatch");
  return ImagePlane(synth.size(), histogram_match(synth.data(), target.data()));
}

Texture histogram_match(const Texture& synth, const Texture& target) {
  if (is_color(synth) != is_color(target)) throw Error("histogram_match: channel count mismatch");
  Texture out = synth;
  auto dst = channels(out);
  auto ref = channels(target);
  for (std::size_t c = 0; c < dst.size(); ++c) dst[c] = histogram_match(dst[c], ref[c]);
  return out;
}

}  // namespace alphatex
