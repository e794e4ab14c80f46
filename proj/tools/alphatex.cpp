// alphatex: texture synthesis from rectified wavelet covariances.
//
//   alphatex synth   --input obs.png --out s.png [model flags]
//   alphatex synth   --manifest s.manifest.json --out replay.png
//   alphatex stats   --input obs.png --out stats.json | --compare a.json b.json
//   alphatex count   --model alpha-i --scales 5 --orients 4 --alphas 4
//   alphatex filters --scales 3 --orients 4 --out dir/
//   alphatex verify  [--only prop2]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "alphatex/config.hpp"
#include "alphatex/hash.hpp"
#include "alphatex/histogram.hpp"
#include "alphatex/image_io.hpp"
#include "alphatex/oracles.hpp"
#include "alphatex/serialization.hpp"
#include "alphatex/statistics.hpp"
#include "alphatex/synthesis.hpp"
#include "alphatex/wavelets.hpp"

namespace fs = std::filesystem;
using namespace alphatex;

namespace {

struct ModelFlags {
  std::string variant, boundary, wavelet, config_file;
  int scales = 0, orients = 0, alphas = 0, iters = 0, restarts = 0, memory = 0;
  std::uint64_t seed = 0;
  bool no_histmatch = false, histmatch_between = false;
  std::vector<CLI::Option*> model_options;

  void attach(CLI::App* app, bool sampler) {
    model_options = {
        app->add_option("--variant", variant, "Model: s, i, l, c, c-reduced (default i)"),
        app->add_option("--scales", scales, "Number of scales J (default 5)"),
        app->add_option("--orients", orients, "Orientations L (default 4)"),
        app->add_option("--alphas", alphas, "Phase grid size A (default 4)"),
        app->add_option("--boundary", boundary, "periodic or windowed (default windowed)"),
        app->add_option("--wavelet", wavelet, "Wavelet family (morlet)"),
    };
    app->add_option("--config", config_file, "JSON config file; flags take precedence");
    if (!sampler) return;
    model_options.push_back(app->add_option("--iters", iters, "L-BFGS iterations per restart (default 500)"));
    model_options.push_back(app->add_option("--restarts", restarts, "Number of restarts (default 10)"));
    model_options.push_back(app->add_option("--seed", seed, "Random seed (default 0)"));
    model_options.push_back(app->add_option("--lbfgs-memory", memory, "L-BFGS memory (default 20)"));
    model_options.push_back(app->add_flag("--no-histmatch", no_histmatch, "Skip final histogram matching"));
    model_options.push_back(
        app->add_flag("--histmatch-between-restarts", histmatch_between, "Also match histograms between restarts"));
  }

  bool any_model_flag() const {
    for (auto* o : model_options)
      if (o->count() > 0) return true;
    return !config_file.empty();
  }

  ModelConfig apply(ModelConfig c) const {
    if (!config_file.empty()) c = config_from_json(read_json_file(config_file), c);
    auto given = [](CLI::Option* o) { return o->count() > 0; };
    for (auto* o : model_options) {
      if (!given(o)) continue;
      const std::string name = o->get_name();
      if (name == "--variant") c.variant = parse_variant(variant);
      else if (name == "--scales") c.scales = scales;
      else if (name == "--orients") c.orientations = orients;
      else if (name == "--alphas") c.alphas = alphas;
      else if (name == "--boundary") c.boundary = parse_boundary(boundary);
      else if (name == "--wavelet") c.family = parse_wavelet_family(wavelet);
      else if (name == "--iters") c.iterations_per_restart = iters;
      else if (name == "--restarts") c.restarts = restarts;
      else if (name == "--seed") c.seed = Seed{seed};
      else if (name == "--lbfgs-memory") c.lbfgs_memory = memory;
      else if (name == "--no-histmatch") c.histogram_match = false;
      else if (name == "--histmatch-between-restarts") c.histogram_match_between_restarts = true;
    }
    return c;
  }
};

ColorMode color_mode(const ModelConfig& c) { return is_color_variant(c.variant) ? ColorMode::color : ColorMode::gray; }

fs::path sibling(const fs::path& image, const std::string& suffix) {
  fs::path p = image;
  p.replace_extension();
  return fs::path(p.string() + suffix);
}

nlohmann::json window_margins(const ModelConfig& c) {
  nlohmann::json m = nlohmann::json::array();
  for (int level = 0; level <= c.scales; ++level) m.push_back(window_margin(c.boundary, level));
  return m;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  ModelFlags model;
  std::string input, out, manifest, history;
  int jobs = 1;
  bool quiet = false;
};

int cmd_synth(const SynthArgs& a) {
  ModelConfig config;
  fs::path input = a.input;
  std::string expected_hash;
  const bool replay = a.input.empty() && !a.manifest.empty();
  if (replay) {
    if (a.model.any_model_flag()) throw Error("model flags cannot be combined with manifest replay");
    const auto m = read_json_file(a.manifest);
    try {
      config = config_from_json(m.at("config"));
      input = m.at("input").at("path").get<std::string>();
      expected_hash = m.at("input").at("sha256").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(std::string("malformed manifest: ") + e.what());
    }
  } else {
    if (a.input.empty()) throw CLI::RequiredError("--input");
    config = a.model.apply(config);
  }
  if (a.out.empty()) throw CLI::RequiredError("--out");

  const std::string input_hash = sha256_file(input);
  if (replay && input_hash != expected_hash) throw Error("input file changed since the manifest was written: " + input.string());
  const Texture observation = load_image(input, color_mode(config));
  validate(config, texture_size(observation));

  const fs::path out = a.out;
  const fs::path manifest_path = !replay && !a.manifest.empty() ? fs::path(a.manifest) : sibling(out, ".manifest.json");
  const fs::path history_path = a.history.empty() ? sibling(out, ".history.jsonl") : fs::path(a.history);

  SynthesisOptions options;
  options.jobs = a.jobs;
  if (!a.quiet) {
    options.on_iteration = [&](const HistoryRecord& h) {
      if (h.iter == 0 || h.iter == config.iterations_per_restart || h.iter % 50 == 0) {
        char seconds[32];
        std::snprintf(seconds, sizeof seconds, "%.1f", h.wall_ms / 1000.0);
        std::cerr << "restart " << h.restart << " iter " << h.iter << " loss " << h.loss << " |grad| " << h.grad_norm
                  << " (" << seconds << " s)\n";
      }
    };
  }
  const auto t0 = std::chrono::steady_clock::now();
  const SynthesisRun run = synthesize(observation, config, options);
  const double total_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  save_png(out, run.current);
  {
    if (history_path.has_parent_path()) fs::create_directories(history_path.parent_path());
    std::ofstream h(history_path);
    if (!h) throw Error("cannot write " + history_path.string());
    write_history_jsonl(h, run.history);
  }

  nlohmann::json manifest = {
      {"config", to_json(config)},
      {"config_hash", config_hash(config)},
      {"input", {{"path", fs::absolute(input).string()}, {"sha256", input_hash}, {"n", texture_size(observation)}}},
      {"outputs", {{"image", out.string()}, {"history", history_path.string()}, {"manifest", manifest_path.string()}}},
      {"timings", {{"total_ms", total_ms}}},
      {"initial_loss", run.initial_loss},
      {"final_loss", run.final_loss},
      {"statistic_counts",
       {{"means", run.target_stats.mean_count},
        {"covariances", run.target_stats.covariance_count},
        {"lowpass", run.target_stats.lowpass_count},
        {"total", run.target_stats.size()}}},
      {"window_margins", window_margins(config)},
      {"output_sha256", sha256_file(out)},
  };
  write_json_file(manifest_path, manifest);
  std::cout << "wrote " << out.string() << " (loss " << run.initial_loss << " -> " << run.final_loss << ")\n"
            << "manifest " << manifest_path.string() << "\n";
  return 0;
}

// ---------------------------------------------------------------- stats

struct StatsArgs {
  ModelFlags model;
  std::string input, out, means_out;
  std::vector<std::string> compare;
  double epsilon = -1.0;
  int jobs = 1;
};

int cmd_stats(const StatsArgs& a) {
  if (!a.compare.empty()) {
    const StatisticsVector x = statistics_from_json(read_json_file(a.compare[0]));
    const StatisticsVector y = statistics_from_json(read_json_file(a.compare[1]));
    const double d = statistics_distance(x, y);
    const double rel = d / norm(y);
    double max_diff = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) max_diff = std::max(max_diff, std::abs(x.values[i] - y.values[i]));
    std::cout << std::setprecision(10) << "distance " << d << "\nrelative distance " << rel << "\nmax entry difference "
              << max_diff << "\n";
    if (a.epsilon >= 0.0) std::cout << "relative distance < " << a.epsilon << ": " << (rel < a.epsilon ? "yes" : "no") << "\n";
    return 0;
  }
  if (a.input.empty()) throw CLI::RequiredError("--input");
  if (a.out.empty() && a.means_out.empty()) throw CLI::RequiredError("--out");
  ModelConfig config = a.model.apply(ModelConfig{});
  const Texture image = load_image(a.input, color_mode(config));
  validate(config, texture_size(image));
  const FilterBank bank = build_filter_bank(texture_size(image), config.scales, config.orientations, config.family);
  const IndexSet set = build_index_set(config.variant, config.scales, config.orientations, config.alphas);
  const PlaneMeans means = observation_means(channels(image), bank, set, config.boundary);
  if (!a.out.empty()) {
    const StatisticsVector stats = compute_statistics(channels(image), bank, set, means, config.boundary, a.jobs);
    write_json_file(a.out, statistics_to_json(stats, set, config));
    std::cout << "wrote " << stats.size() << " statistics to " << a.out << "\n";
  }
  if (!a.means_out.empty()) write_json_file(a.means_out, means_to_json(means, set.layout));
  return 0;
}

// ---------------------------------------------------------------- count

struct CountArgs {
  std::string model;
  int scales = 5, orients = 4, alphas = 4, delta = 3;
};

int cmd_count(const CountArgs& a) {
  auto row = [](const std::string& label, std::int64_t v, const std::string& note = "") {
    std::cout << "  " << std::left << std::setw(46) << label << std::right << std::setw(10) << v;
    if (!note.empty()) std::cout << "  " << note;
    std::cout << "\n";
  };
  if (a.model == "ps-gray" || a.model == "ps-color") {
    const bool color = a.model == "ps-color";
    const PsCount c = count_ps_statistics(color, a.scales, a.orients, a.delta);
    std::cout << a.model << "  J=" << a.scales << " L=" << a.orients << " delta=" << a.delta
              << " (Na=" << 2 * a.delta + 1 << ")\n";
    for (const auto& cat : c.categories) row(cat.name, cat.count, cat.software_only ? "(software only)" : "");
    row("total", c.total);
    row("published total", c.published_count);
    return 0;
  }
  if (a.model.rfind("alpha-", 0) != 0) throw Error("unknown model: " + a.model);
  const Variant v = parse_variant(a.model);
  const int nominal = 1 + 2 * a.scales * a.orients;
  const IndexSet set = build_index_set(v, a.scales, a.orients, a.alphas);
  const int built_shifts = static_cast<int>(set.shifts.size());
  std::cout << a.model << "  J=" << a.scales << " L=" << a.orients << " A=" << a.alphas << "\n";
  row("shift set size, nominal 1 + 2JL", nominal);
  row("shift set size, built (rounded, deduplicated)", built_shifts);
  row("upper bound, nominal shift set", count_alpha_statistics(v, a.scales, a.orients, a.alphas, nominal));
  row("upper bound, built shift set", count_alpha_statistics(v, a.scales, a.orients, a.alphas, built_shifts));
  row("built covariances", static_cast<std::int64_t>(set.entries.size()));
  row("first-order means", set.layout.count());
  row("low-pass covariances", static_cast<std::int64_t>(set.lowpass.size()));
  row("total statistics", static_cast<std::int64_t>(set.layout.count() + set.entries.size() + set.lowpass.size()));
  return 0;
}

// ---------------------------------------------------------------- filters

struct FiltersArgs {
  int scales = 3, orients = 4, size = 64;
  std::string out;
};

void write_filter(const fs::path& path, const ComplexPlane& f, int n) {
  double scale = 0.0;
  for (const auto& v : f) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) scale = 1.0;
  // Strip of three n x n tiles, origin moved to the tile center. Real and
  // imaginary parts map [-scale, scale] to [0, 1]; the modulus maps [0, scale].
  std::vector<double> strip(static_cast<std::size_t>(3) * n * n);
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      const Complex v = f[static_cast<std::size_t>((y + n / 2) % n) * n + (x + n / 2) % n];
      double* row = strip.data() + static_cast<std::size_t>(y) * 3 * n;
      row[x] = 0.5 + 0.5 * v.real() / scale;
      row[n + x] = 0.5 + 0.5 * v.imag() / scale;
      row[2 * n + x] = std::abs(v) / scale;
    }
  save_gray_png(path, 3 * n, n, strip);
}

int cmd_filters(const FiltersArgs& a) {
  if (a.out.empty()) throw CLI::RequiredError("--out");
  const FilterBank bank = build_filter_bank(a.size, a.scales, a.orients);
  fs::create_directories(a.out);
  int written = 0;
  for (int j = 0; j < a.scales; ++j)
    for (int t = 0; t < a.orients; ++t) {
      write_filter(fs::path(a.out) / ("psi_j" + std::to_string(j) + "_theta" + std::to_string(t) + ".png"),
                   bank.band_pass_spatial(j, t), a.size);
      ++written;
    }
  write_filter(fs::path(a.out) / "phi.png", bank.low_pass_spatial(), a.size);
  ++written;
  std::cout << "wrote " << written << " filter images to " << a.out << "\n";
  return 0;
}

// ---------------------------------------------------------------- verify

int cmd_verify(const std::string& only, const std::string& out) {
  const auto reports = run_oracle_suite(only.empty() ? std::nullopt : std::optional<std::string>(only));
  nlohmann::json arr = nlohmann::json::array();
  bool ok = true;
  for (const auto& r : reports) {
    arr.push_back(to_json(r));
    ok = ok && r.passed;
    std::cerr << (r.passed ? "[PASS] " : "[FAIL] ") << r.name << "  max_abs_err=" << r.max_abs_err
              << " max_rel_err=" << r.max_rel_err << " tol=" << r.tolerance << "  " << r.detail << "\n";
  }
  std::cout << arr.dump(2) << "\n";
  if (!out.empty()) write_json_file(out, arr);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"alphatex: texture synthesis from rectified wavelet covariance statistics"};
  app.require_subcommand(1);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Synthesize a texture from an observation");
  synth_cmd->add_option("--input", synth.input, "Observed texture (PNG/PGM/PPM, square power-of-two side)");
  synth_cmd->add_option("--out", synth.out, "Output PNG");
  synth_cmd->add_option("--manifest", synth.manifest,
                        "Manifest path to write; without --input, a manifest to replay");
  synth_cmd->add_option("--history", synth.history, "Loss history JSONL (default <out>.history.jsonl)");
  synth_cmd->add_option("--jobs", synth.jobs, "Threads for the loss evaluation")->check(CLI::PositiveNumber);
  synth_cmd->add_flag("--quiet", synth.quiet, "No progress output");
  synth.model.attach(synth_cmd, true);

  StatsArgs stats;
  auto* stats_cmd = app.add_subcommand("stats", "Compute or compare statistics vectors");
  stats_cmd->add_option("--input", stats.input, "Image");
  stats_cmd->add_option("--out", stats.out, "Statistics JSON");
  stats_cmd->add_option("--means-out", stats.means_out, "Dump of the centering means");
  stats_cmd->add_option("--compare", stats.compare, "Two statistics JSON files")->expected(2);
  stats_cmd->add_option("--epsilon", stats.epsilon, "Report whether the relative distance is below this");
  stats_cmd->add_option("--jobs", stats.jobs, "Threads")->check(CLI::PositiveNumber);
  stats.model.attach(stats_cmd, false);

  CountArgs count;
  auto* count_cmd = app.add_subcommand("count", "Statistic counts for ALPHA and PS models");
  count_cmd->add_option("--model", count.model, "alpha-s, alpha-i, alpha-l, alpha-c, alpha-c-reduced, ps-gray, ps-color")
      ->required();
  count_cmd->add_option("--scales", count.scales, "J");
  count_cmd->add_option("--orients", count.orients, "L");
  count_cmd->add_option("--alphas", count.alphas, "A");
  count_cmd->add_option("--delta", count.delta, "PS shift half-width");

  FiltersArgs filters;
  auto* filters_cmd = app.add_subcommand("filters", "Write the filter bank as PNG strips [real | imag | modulus]");
  filters_cmd->add_option("--scales", filters.scales, "J");
  filters_cmd->add_option("--orients", filters.orients, "L");
  filters_cmd->add_option("--size", filters.size, "Grid side");
  filters_cmd->add_option("--out", filters.out, "Output directory");

  std::string verify_only, verify_out;
  auto* verify_cmd = app.add_subcommand("verify", "Run the reference-implementation checks");
  verify_cmd->add_option("--only", verify_only, "Run one check: " + [] {
    std::string s;
    for (const auto& n : oracle_names()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }());
  verify_cmd->add_option("--out", verify_out, "Also write the report array here");

  try {
    app.parse(argc, argv);
    if (*synth_cmd) return cmd_synth(synth);
    if (*stats_cmd) return cmd_stats(stats);
    if (*count_cmd) return cmd_count(count);
    if (*filters_cmd) return cmd_filters(filters);
    if (*verify_cmd) return cmd_verify(verify_only, verify_out);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    std::cerr << sub->help();
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
