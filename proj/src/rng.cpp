#include "alphatex/rng.hpp"

#include <cmath>
#include <numbers>

namespace alphatex {

double NormalSampler::uniform() {
  // (k + 0.5) / 2^53 lies strictly inside (0, 1).
  const std::uint64_t k = engine_() >> 11;
  return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double NormalSampler::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

ImagePlane sample_gaussian_image(int n, double mean, double std, Seed seed) {
  if (!(std >= 0.0)) throw Error("standard deviation must be non-negative");
  ImagePlane out(n, mean);
  if (std == 0.0) return out;
  NormalSampler sampler(seed);
  for (double& v : out.data()) v = mean + std * sampler.normal();
  return out;
}

}  // namespace alphatex
