#include <gtest/gtest.h>

#include <cmath>

#include "alphatex/oracles.hpp"
#include "alphatex/rng.hpp"
#include "alphatex/synthesis.hpp"

using namespace alphatex;

namespace {

ModelConfig small_config(Variant v, Boundary b) {
  ModelConfig c;
  c.variant = v;
  c.scales = 2;
  c.orientations = 2;
  c.alphas = 4;
  c.boundary = b;
  return c;
}

Texture random_texture(bool color, int n, std::uint64_t seed) {
  if (!color) return sample_gaussian_image(n, 0.5, 0.2, Seed{seed});
  return ColorImage(sample_gaussian_image(n, 0.5, 0.2, Seed{seed}), sample_gaussian_image(n, 0.4, 0.1, Seed{seed + 1}),
                    sample_gaussian_image(n, 0.6, 0.3, Seed{seed + 2}));
}

double l2(const std::vector<double>& v) {
  double a = 0.0;
  for (double x : v) a += x * x;
  return std::sqrt(a);
}

}  // namespace

TEST(Objective, ZeroAtTheObservation) {
  for (Boundary b : {Boundary::periodic, Boundary::windowed}) {
    const Texture obs = random_texture(false, 32, 1);
    Objective f(obs, small_config(Variant::I, b));
    const auto x = flatten(obs);
    std::vector<double> g(x.size());
    EXPECT_EQ(f.evaluate(x, g), 0.0);
    EXPECT_EQ(l2(g), 0.0);
  }
}

TEST(Objective, NonFiniteInputGivesNaN) {
  const Texture obs = random_texture(false, 16, 2);
  Objective f(obs, small_config(Variant::S, Boundary::periodic));
  auto x = flatten(obs);
  x[3] = INFINITY;
  std::vector<double> g(x.size(), 1.0);
  EXPECT_TRUE(std::isnan(f.evaluate(x, g)));
  EXPECT_EQ(l2(g), 0.0);
}

TEST(Objective, RejectsMismatchedChannels) {
  EXPECT_THROW(Objective(random_texture(false, 16, 1), small_config(Variant::C, Boundary::periodic)), Error);
  EXPECT_THROW(Objective(random_texture(true, 16, 1), small_config(Variant::I, Boundary::periodic)), Error);
}

TEST(Objective, GradientMatchesFiniteDifferences) {
  for (Boundary b : {Boundary::periodic, Boundary::windowed}) {
    for (Variant v : {Variant::S, Variant::I, Variant::L, Variant::C}) {
      const bool color = is_color_variant(v);
      Objective f(random_texture(color, 32, 10), small_config(v, b));
      const auto x = flatten(random_texture(color, 32, 20));
      const auto r = gradient_report(f, x, 20, 1e-5, Seed{30});
      EXPECT_TRUE(r.passed) << to_string(v) << " " << to_string(b) << ": " << r.detail << " rel "
                            << r.max_rel_err;
    }
  }
}

TEST(Objective, SectionWeightScalesGradient) {
  const Texture obs = random_texture(false, 16, 3);
  ModelConfig base = small_config(Variant::I, Boundary::periodic);
  ModelConfig scaled = base;
  scaled.weights = {3.0, 3.0, 3.0};
  Objective f(obs, base), h(obs, scaled);
  const auto x = flatten(random_texture(false, 16, 4));
  std::vector<double> g(x.size()), gs(x.size());
  const double a = f.evaluate(x, g), b = h.evaluate(x, gs);
  EXPECT_NEAR(b, 3.0 * a, 1e-12 * b);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(gs[i], 3.0 * g[i], 1e-12 * std::abs(gs[i]) + 1e-300);
}

TEST(Objective, ZeroWeightRemovesSection) {
  const Texture obs = random_texture(false, 16, 3);
  ModelConfig c = small_config(Variant::I, Boundary::periodic);
  c.weights = {0.0, 0.0, 0.0};
  Objective f(obs, c);
  const auto x = flatten(random_texture(false, 16, 4));
  std::vector<double> g(x.size());
  EXPECT_EQ(f.evaluate(x, g), 0.0);
  EXPECT_EQ(l2(g), 0.0);
}

TEST(Synthesis, StartingAtTheObservationStaysThere) {
  const Texture obs = random_texture(false, 32, 5);
  ModelConfig c = small_config(Variant::I, Boundary::windowed);
  c.restarts = 2;
  c.iterations_per_restart = 5;
  SynthesisOptions opt;
  opt.initial = obs;
  const auto run = synthesize(obs, c, opt);
  EXPECT_EQ(std::get<ImagePlane>(run.before_matching), std::get<ImagePlane>(obs));
  EXPECT_EQ(std::get<ImagePlane>(run.current), std::get<ImagePlane>(obs));
  EXPECT_EQ(run.final_loss, 0.0);
}

TEST(Synthesis, SameSeedIsBitIdentical) {
  const Texture obs = random_texture(false, 32, 6);
  ModelConfig c = small_config(Variant::I, Boundary::windowed);
  c.restarts = 2;
  c.iterations_per_restart = 10;
  c.seed = Seed{42};
  const auto a = synthesize(obs, c);
  SynthesisOptions threaded;
  threaded.jobs = 3;
  const auto b = synthesize(obs, c, threaded);
  EXPECT_EQ(std::get<ImagePlane>(a.current), std::get<ImagePlane>(b.current));
  EXPECT_EQ(std::get<ImagePlane>(a.before_matching), std::get<ImagePlane>(b.before_matching));
  ASSERT_EQ(a.history.size(), b.history.size());
  for (std::size_t i = 0; i < a.history.size(); ++i) EXPECT_EQ(a.history[i].loss, b.history[i].loss);
}

TEST(Synthesis, HistoryIsNonIncreasingAndComplete) {
  const Texture obs = random_texture(false, 32, 7);
  ModelConfig c = small_config(Variant::S, Boundary::periodic);
  c.restarts = 3;
  c.iterations_per_restart = 15;
  const auto run = synthesize(obs, c);
  EXPECT_EQ(run.restart_index, 3);
  ASSERT_FALSE(run.history.empty());
  EXPECT_EQ(run.history.front().iter, 0);
  EXPECT_EQ(run.history.front().loss, run.initial_loss);
  for (std::size_t i = 1; i < run.history.size(); ++i) EXPECT_LE(run.history[i].loss, run.history[i - 1].loss);
  EXPECT_EQ(run.history.back().loss, run.final_loss);
  EXPECT_LT(run.final_loss, run.initial_loss);
}

TEST(Synthesis, HistogramMatchingIsOptional) {
  const Texture obs = random_texture(false, 32, 8);
  ModelConfig c = small_config(Variant::S, Boundary::periodic);
  c.restarts = 1;
  c.iterations_per_restart = 5;
  c.histogram_match = false;
  const auto run = synthesize(obs, c);
  EXPECT_EQ(std::get<ImagePlane>(run.current), std::get<ImagePlane>(run.before_matching));
  c.histogram_match = true;
  const auto matched = synthesize(obs, c);
  auto sorted = [](const Texture& t) {
    auto v = flatten(t);
    std::sort(v.begin(), v.end());
    return v;
  };
  EXPECT_EQ(sorted(matched.current), sorted(obs));
}

TEST(Synthesis, InitialImageFollowsObservationMoments) {
  const Texture obs = random_texture(true, 64, 9);
  const auto x = initial_image(obs, Seed{5});
  const auto& c = std::get<ColorImage>(x);
  const auto& o = std::get<ColorImage>(obs);
  for (int k = 0; k < 3; ++k) {
    EXPECT_NEAR(c.channels[k].mean(), o.channels[k].mean(), 0.02);
    EXPECT_NEAR(c.channels[k].stddev(), o.channels[k].stddev(), 0.02);
  }
  EXPECT_NE(c.channels[0], c.channels[1]);
}

TEST(Synthesis, WhiteNoiseLossDropsByThreeOrders) {
  const Texture obs = sample_gaussian_image(32, 0.5, 0.15, Seed{77});
  ModelConfig c;
  c.variant = Variant::I;
  c.scales = 3;
  c.orientations = 4;
  c.boundary = Boundary::periodic;
  c.restarts = 3;
  c.iterations_per_restart = 150;
  c.seed = Seed{1};
  const auto run = synthesize(obs, c);
  EXPECT_LT(run.final_loss / run.initial_loss, 1e-3) << run.final_loss << " / " << run.initial_loss;
}
