#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "alphatex/config.hpp"
#include "alphatex/covariance_engine.hpp"
#include "alphatex/image.hpp"
#include "alphatex/statistics.hpp"
#include "alphatex/wavelets.hpp"

namespace alphatex {

/// Squared statistic mismatch ||C x - C xbar||^2 and its gradient.
///
/// x is passed flattened channel-major (see flatten()). The gradient runs the
/// covariance adjoint, then the rectifier subgradient (zero at the kink), then
/// the adjoint wavelet transform.
class Objective {
 public:
  /// Centering means and targets are taken from `observation`.
  Objective(const Texture& observation, const ModelConfig& config, int jobs = 1);

  double evaluate(std::span<const double> x, std::span<double> grad);
  double loss(std::span<const double> x);
  StatisticsVector statistics(std::span<const double> x);

  const StatisticsVector& target() const { return target_; }
  const PlaneMeans& means() const { return means_; }
  const IndexSet& index_set() const { return set_; }
  const FilterBank& bank() const { return bank_; }
  int channels() const { return channels_; }
  int size() const { return n_; }

 private:
  void forward(std::span<const double> x, std::span<double> stats);
  double residual_loss(std::span<const double> stats, std::vector<double>* dstat) const;

  int n_;
  int channels_;
  int jobs_;
  Boundary boundary_;
  SectionWeights weights_;
  FilterBank bank_;
  IndexSet set_;
  CovarianceEngine engine_;
  PlaneMeans means_;
  StatisticsVector target_;

  // Scratch kept between forward and backward.
  std::vector<WaveletCoefficients> coeffs_;
  RectifiedStack stack_;
  std::vector<std::vector<double>> lowpass_;
};

struct HistoryRecord {
  int restart = 0;
  int iter = 0;
  double loss = 0.0;
  double grad_norm = 0.0;
  double wall_ms = 0.0;
};

struct SynthesisRun {
  Texture current;          // output (after histogram matching if enabled)
  Texture before_matching;  // optimizer result
  std::vector<HistoryRecord> history;
  int restart_index = 0;  // restarts completed
  StatisticsVector target_stats;
  PlaneMeans obs_means;
  double initial_loss = 0.0;
  double final_loss = 0.0;  // loss of before_matching
};

struct SynthesisOptions {
  int jobs = 1;
  /// Starting image; if empty, i.i.d. normal with the observation's mean/std.
  std::optional<Texture> initial;
  std::function<void(const HistoryRecord&)> on_iteration;
};

/// Gaussian initialization for a synthesis: per channel N(mean, std^2) of
/// the observation, channel c drawn from seed + c.
Texture initial_image(const Texture& observation, Seed seed);

SynthesisRun synthesize(const Texture& observation, const ModelConfig& config,
                        const SynthesisOptions& options = {});

}  // namespace alphatex
