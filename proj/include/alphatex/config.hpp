#pragma once

#include <string>

#include "alphatex/representation.hpp"
#include "alphatex/rng.hpp"
#include "alphatex/statistics.hpp"
#include "alphatex/wavelets.hpp"
#include "json.hpp"

namespace alphatex {

/// Multipliers applied to each section of the squared-residual loss.
struct SectionWeights {
  double mean = 1.0;
  double covariance = 1.0;
  double lowpass = 1.0;
  bool operator==(const SectionWeights&) const = default;
};

/// Model and sampler settings. Defaults: J = 5, L = 4, A = 4, windowed
/// boundary, 10 restarts of 500 L-BFGS iterations, memory 20.
struct ModelConfig {
  Variant variant = Variant::I;
  int n = 0;  // 0: taken from the observation
  int scales = 5;
  int orientations = 4;
  int alphas = 4;
  Boundary boundary = Boundary::windowed;
  WaveletFamily family = WaveletFamily::morlet;
  int iterations_per_restart = 500;
  int restarts = 10;
  int lbfgs_memory = 20;
  Seed seed{0};
  bool histogram_match = true;
  bool histogram_match_between_restarts = false;
  SectionWeights weights;

  bool operator==(const ModelConfig& o) const;
};

/// Throws on inconsistent settings; `n` is the observation size.
void validate(const ModelConfig& config, int n);

std::string to_string(Boundary b);
Boundary parse_boundary(const std::string& name);

nlohmann::json to_json(const ModelConfig& config);
/// Missing keys keep the values already in `base`.
ModelConfig config_from_json(const nlohmann::json& j, ModelConfig base = {});

/// Short stable hash of the JSON form, for labelling outputs.
std::string config_hash(const ModelConfig& config);

}  // namespace alphatex
