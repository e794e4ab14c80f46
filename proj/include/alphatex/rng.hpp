#pragma once

#include <cstdint>
#include <random>

#include "alphatex/image.hpp"

namespace alphatex {

struct Seed {
  std::uint64_t value = 0;
};

/// Reproducible normal sampler.
///
/// Uniforms come from std::mt19937_64, whose output sequence is fixed by the
/// C++ standard. Normals are produced by the Box-Muller transform written out
/// here, because std::normal_distribution is implementation-defined and would
/// break cross-platform reproducibility.
class NormalSampler {
 public:
  explicit NormalSampler(Seed seed) : engine_(seed.value) {}

  /// Uniform in the open interval (0, 1) with 53 bits of resolution.
  double uniform();
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// i.i.d. N(mean, std^2) pixels; identical seeds give bit-identical images.
ImagePlane sample_gaussian_image(int n, double mean, double std, Seed seed);

}  // namespace alphatex
