#include "alphatex/synthesis.hpp"

#include <chrono>
#include <cmath>
#include <limits>

#include "alphatex/histogram.hpp"
#include "alphatex/lbfgs.hpp"
#include "alphatex/parallel.hpp"
#include "alphatex/rng.hpp"

namespace alphatex {

namespace {

int expected_channels(Variant v) { return is_color_variant(v) ? 3 : 1; }

const ModelConfig& checked(const Texture& observation, const ModelConfig& config) {
  validate(config, texture_size(observation));
  const int channels = static_cast<int>(alphatex::channels(observation).size());
  if (channels != expected_channels(config.variant)) {
    throw Error("variant " + to_string(config.variant) + " expects " +
                std::to_string(expected_channels(config.variant)) + " channel(s), image has " +
                std::to_string(channels));
  }
  return config;
}

}  // namespace

Objective::Objective(const Texture& observation, const ModelConfig& config, int jobs)
    : n_(texture_size(observation)),
      channels_(static_cast<int>(alphatex::channels(observation).size())),
      jobs_(jobs),
      boundary_(checked(observation, config).boundary),
      weights_(config.weights),
      bank_(build_filter_bank(n_, config.scales, config.orientations, config.family)),
      set_(build_index_set(config.variant, config.scales, config.orientations, config.alphas)),
      engine_(set_, n_, boundary_) {
  const std::vector<double> xbar = flatten(observation);
  const std::size_t np = static_cast<std::size_t>(n_) * n_;
  std::vector<WaveletCoefficients> coeffs;
  for (int c = 0; c < channels_; ++c) {
    coeffs.push_back(wavelet_transform(std::span(xbar).subspan(c * np, np), bank_));
  }
  means_ = rectify_coefficients(coeffs, set_.layout.alphas, boundary_, std::nullopt).means;
  target_ = statistics(xbar);
}

void Objective::forward(std::span<const double> x, std::span<double> stats) {
  const std::size_t np = static_cast<std::size_t>(n_) * n_;
  if (x.size() != np * channels_) throw Error("image buffer has the wrong size");
  coeffs_.resize(channels_);
  for (int c = 0; c < channels_; ++c) coeffs_[c] = wavelet_transform(x.subspan(c * np, np), bank_);
  stack_ = rectify_coefficients(coeffs_, set_.layout.alphas, boundary_, means_);
  lowpass_.resize(channels_);
  for (int c = 0; c < channels_; ++c) {
    lowpass_[c].resize(np);
    for (std::size_t i = 0; i < np; ++i) lowpass_[c][i] = coeffs_[c].low[i].real();
  }
  engine_.forward(stack_, lowpass_, stats, jobs_);
}

StatisticsVector Objective::statistics(std::span<const double> x) {
  StatisticsVector out;
  out.values.resize(engine_.statistic_count());
  forward(x, out.values);
  out.mean_count = engine_.mean_count();
  out.covariance_count = engine_.covariance_count();
  out.lowpass_count = engine_.lowpass_count();
  out.layout_hash = layout_hash(set_);
  return out;
}

double Objective::residual_loss(std::span<const double> stats, std::vector<double>* dstat) const {
  const std::size_t m = engine_.mean_count(), e = engine_.covariance_count();
  if (dstat) dstat->resize(stats.size());
  double loss = 0.0;
  auto section = [&](std::size_t begin, std::size_t end, double w) {
    double acc = 0.0;
    for (std::size_t i = begin; i < end; ++i) {
      const double r = stats[i] - target_.values[i];
      acc += r * r;
      if (dstat) (*dstat)[i] = 2.0 * w * r;
    }
    loss += w * acc;
  };
  section(0, m, weights_.mean);
  section(m, m + e, weights_.covariance);
  section(m + e, stats.size(), weights_.lowpass);
  return loss;
}

double Objective::loss(std::span<const double> x) {
  for (double v : x)
    if (!std::isfinite(v)) return std::numeric_limits<double>::quiet_NaN();
  std::vector<double> stats(engine_.statistic_count());
  forward(x, stats);
  return residual_loss(stats, nullptr);
}

double Objective::evaluate(std::span<const double> x, std::span<double> grad) {
  if (grad.size() != x.size()) throw Error("gradient buffer has the wrong size");
  for (double v : x) {
    if (!std::isfinite(v)) {
      std::fill(grad.begin(), grad.end(), 0.0);
      return std::numeric_limits<double>::quiet_NaN();
    }
  }
  std::vector<double> stats(engine_.statistic_count()), dstat;
  forward(x, stats);
  const double loss = residual_loss(stats, &dstat);
  if (!std::isfinite(loss)) {
    std::fill(grad.begin(), grad.end(), 0.0);
    return loss;
  }

  std::vector<std::vector<double>> grad_planes, grad_lowpass;
  engine_.backward(dstat, grad_planes, grad_lowpass, jobs_);

  const std::size_t np = static_cast<std::size_t>(n_) * n_;
  const auto& fft = bank_.fft();
  const PlaneLayout& layout = set_.layout;
  const auto phases = phase_grid(layout.alphas);
  const int bands = bank_.band_count();
  std::vector<ComplexPlane> spectra(bands + 1);

  for (int c = 0; c < channels_; ++c) {
    // Rectifier subgradient then the band's adjoint filter, one band per task.
    parallel_for(spectra.size(), jobs_, [&](std::size_t b) {
      ComplexPlane& g = spectra[b];
      g.assign(np, Complex(0.0, 0.0));
      if (static_cast<int>(b) == bands) {
        for (std::size_t i = 0; i < np; ++i) g[i] = grad_lowpass[c][i];
        fft.forward(g, g);
        const auto& h = bank_.low_pass_hat();
        for (std::size_t i = 0; i < np; ++i) g[i] *= std::conj(h[i]);
        return;
      }
      const int j = static_cast<int>(b) / layout.orientations;
      const int t = static_cast<int>(b) % layout.orientations;
      for (int a = 0; a < layout.alphas; ++a) {
        const int p = layout.index({j, t, a, c});
        const auto& plane = stack_.planes[p];
        const auto& gp = grad_planes[p];
        const double ca = std::cos(phases[a]), sa = std::sin(phases[a]);
        for (std::size_t i = 0; i < np; ++i) {
          if (plane[i] > 0.0) g[i] += Complex(gp[i] * ca, -gp[i] * sa);
        }
      }
      fft.forward(g, g);
      const auto& h = bank_.band_pass_hat(j, t);
      for (std::size_t i = 0; i < np; ++i) g[i] *= std::conj(h[i]);
    });
    ComplexPlane acc(np, Complex(0.0, 0.0));
    for (const auto& s : spectra)
      for (std::size_t i = 0; i < np; ++i) acc[i] += s[i];
    fft.inverse(acc, acc);
    for (std::size_t i = 0; i < np; ++i) grad[c * np + i] = acc[i].real();
  }
  return loss;
}

Texture initial_image(const Texture& observation, Seed seed) {
  Texture out = observation;
  auto dst = channels(out);
  const auto src = channels(observation);
  for (std::size_t c = 0; c < src.size(); ++c) {
    dst[c] = sample_gaussian_image(src[c].size(), src[c].mean(), src[c].stddev(), Seed{seed.value + c});
  }
  return out;
}

SynthesisRun synthesize(const Texture& observation, const ModelConfig& config,
                        const SynthesisOptions& options) {
  Objective objective(observation, config, options.jobs);
  SynthesisRun run;
  run.target_stats = objective.target();
  run.obs_means = objective.means();

  Texture start = options.initial ? *options.initial : initial_image(observation, config.seed);
  if (texture_size(start) != texture_size(observation) ||
      channels(start).size() != channels(observation).size()) {
    throw Error("initial image does not match the observation");
  }
  std::vector<double> x = flatten(start);

  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed_ms = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  };
  auto record = [&](const HistoryRecord& h) {
    run.history.push_back(h);
    if (options.on_iteration) options.on_iteration(h);
  };
  const Evaluator evaluator = [&](std::span<const double> v, std::span<double> g) {
    return objective.evaluate(v, g);
  };

  LbfgsOptions lbfgs;
  lbfgs.max_iterations = config.iterations_per_restart;
  lbfgs.memory = config.lbfgs_memory;

  for (int r = 0; r < config.restarts; ++r) {
    std::vector<double> g(x.size());
    const double f0 = objective.evaluate(x, g);
    if (!std::isfinite(f0)) throw Error("loss is not finite at the start of a restart");
    double gnorm = 0.0;
    for (double v : g) gnorm += v * v;
    if (r == 0) run.initial_loss = f0;
    record({r, 0, f0, std::sqrt(gnorm), elapsed_ms()});

    LbfgsResult result = lbfgs_minimize(x, evaluator, lbfgs, [&](const LbfgsIteration& it) {
      record({r, it.iteration, it.loss, it.grad_norm, elapsed_ms()});
    });
    x = std::move(result.x);
    run.final_loss = result.loss;
    run.restart_index = r + 1;

    if (config.histogram_match && config.histogram_match_between_restarts && r + 1 < config.restarts) {
      x = flatten(histogram_match(unflatten(x, observation), observation));
    }
  }

  run.before_matching = unflatten(x, observation);
  run.current = config.histogram_match ? histogram_match(run.before_matching, observation) : run.before_matching;
  return run;
}

}  // namespace alphatex
