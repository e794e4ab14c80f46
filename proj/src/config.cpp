#include "alphatex/config.hpp"

#include "alphatex/hash.hpp"

namespace alphatex {

bool ModelConfig::operator==(const ModelConfig& o) const { return to_json(*this) == to_json(o); }

std::string to_string(Boundary b) { return b == Boundary::periodic ? "periodic" : "windowed"; }

Boundary parse_boundary(const std::string& name) {
  if (name == "periodic") return Boundary::periodic;
  if (name == "windowed") return Boundary::windowed;
  throw Error("unknown boundary: " + name + " (expected periodic or windowed)");
}

void validate(const ModelConfig& c, int n) {
  if (c.n != 0 && c.n != n) {
    throw Error("configured size " + std::to_string(c.n) + " does not match the image size " + std::to_string(n));
  }
  if (n < 8 || !is_power_of_two(n)) throw Error("image side must be a power of two >= 8");
  if (c.scales < 1 || c.orientations < 1 || c.alphas < 1) throw Error("scales, orientations and alphas must be >= 1");
  if ((1 << c.scales) > n / 4) {
    throw Error("scale too large for grid: 2^J = " + std::to_string(1 << c.scales) + " exceeds n/4 = " +
                std::to_string(n / 4));
  }
  if (c.boundary == Boundary::windowed && n <= (2 << c.scales) + 1) {
    throw Error("windowed statistics need n > 2^(J+1) + 1");
  }
  if (c.iterations_per_restart < 0 || c.restarts < 1) throw Error("need restarts >= 1 and iterations >= 0");
  if (c.lbfgs_memory < 1) throw Error("L-BFGS memory must be >= 1");
  if (!(c.weights.mean >= 0.0 && c.weights.covariance >= 0.0 && c.weights.lowpass >= 0.0)) {
    throw Error("section weights must be non-negative");
  }
}

nlohmann::json to_json(const ModelConfig& c) {
  return {
      {"variant", to_string(c.variant)},
      {"n", c.n},
      {"scales", c.scales},
      {"orientations", c.orientations},
      {"alphas", c.alphas},
      {"boundary", to_string(c.boundary)},
      {"wavelet", to_string(c.family)},
      {"iterations_per_restart", c.iterations_per_restart},
      {"restarts", c.restarts},
      {"lbfgs_memory", c.lbfgs_memory},
      {"seed", c.seed.value},
      {"histogram_match", c.histogram_match},
      {"histogram_match_between_restarts", c.histogram_match_between_restarts},
      {"weights", {{"mean", c.weights.mean}, {"covariance", c.weights.covariance}, {"lowpass", c.weights.lowpass}}},
  };
}

ModelConfig config_from_json(const nlohmann::json& j, ModelConfig c) {
  if (!j.is_object()) throw Error("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "variant") c.variant = parse_variant(value.get<std::string>());
      else if (key == "n") c.n = value.get<int>();
      else if (key == "scales") c.scales = value.get<int>();
      else if (key == "orientations") c.orientations = value.get<int>();
      else if (key == "alphas") c.alphas = value.get<int>();
      else if (key == "boundary") c.boundary = parse_boundary(value.get<std::string>());
      else if (key == "wavelet") c.family = parse_wavelet_family(value.get<std::string>());
      else if (key == "iterations_per_restart") c.iterations_per_restart = value.get<int>();
      else if (key == "restarts") c.restarts = value.get<int>();
      else if (key == "lbfgs_memory") c.lbfgs_memory = value.get<int>();
      else if (key == "seed") c.seed.value = value.get<std::uint64_t>();
      else if (key == "histogram_match") c.histogram_match = value.get<bool>();
      else if (key == "histogram_match_between_restarts") c.histogram_match_between_restarts = value.get<bool>();
      else if (key == "weights") {
        c.weights.mean = value.value("mean", c.weights.mean);
        c.weights.covariance = value.value("covariance", c.weights.covariance);
        c.weights.lowpass = value.value("lowpass", c.weights.lowpass);
      } else {
        throw Error("unknown config key: " + key);
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed config: ") + e.what());
  }
  return c;
}

std::string config_hash(const ModelConfig& config) { return sha256_hex(to_json(config).dump()).substr(0, 16); }

}  // namespace alphatex
