#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "alphatex/hash.hpp"
#include "alphatex/image_io.hpp"
#include "alphatex/rng.hpp"
#include "alphatex/serialization.hpp"

using namespace alphatex;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

const fs::path& work_dir() {
  static const fs::path dir = [] {
    const fs::path d = fs::temp_directory_path() / ("alphatex_test_cli_" + std::to_string(getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

Result run(const std::string& args) {
  const fs::path out = work_dir() / "stdout.txt";
  const std::string cmd = std::string(ALPHATEX_CLI) + " " + args + " > " + out.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  Result r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

std::string data(const std::string& name) { return (fs::path(ALPHATEX_TEST_DATA) / name).string(); }

}  // namespace

TEST(Cli, CountAlphaVariants) {
  const auto r = run("count --model alpha-i");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("39360"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("35490"), std::string::npos) << r.out;
  const auto s = run("count --model alpha-s");
  EXPECT_NE(s.out.find("3856"), std::string::npos) << s.out;
}

TEST(Cli, CountPortillaSimoncelli) {
  const auto r = run("count --model ps-gray --scales 4 --orients 4 --delta 3");
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("792"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("710"), std::string::npos) << r.out;
}

TEST(Cli, UsageErrors) {
  const auto r = run("synth --out " + (work_dir() / "x.png").string());
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.out.find("--input"), std::string::npos) << r.out;
  EXPECT_EQ(run("count --model alpha-xl").code, 1);
  EXPECT_EQ(run("synth --input " + data("brick_64.png") + " --out " + (work_dir() / "y.png").string() +
                " --variant c")
                .code,
            1);
}

TEST(Cli, FiltersWritesOnePngPerFilter) {
  const fs::path dir = work_dir() / "filters";
  const auto r = run("filters --scales 3 --orients 4 --size 64 --out " + dir.string());
  ASSERT_EQ(r.code, 0) << r.out;
  int pngs = 0;
  for (const auto& e : fs::directory_iterator(dir)) pngs += e.path().extension() == ".png";
  EXPECT_EQ(pngs, 13);
  EXPECT_TRUE(fs::exists(dir / "phi.png"));
}

TEST(Cli, VerifySingleCheck) {
  const auto r = run("verify --only prop2");
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("[PASS] prop2"), std::string::npos) << r.out;
  EXPECT_EQ(run("verify --only bogus").code, 1);
}

TEST(Cli, StatsOfShiftedImageMatchInPeriodicMode) {
  const Texture x = load_image(data("brick_64.png"), ColorMode::gray);
  const fs::path shifted = work_dir() / "shifted.png";
  save_png(shifted, circular_shift(x, 9, 20));
  const std::string common = " --boundary periodic --scales 3 --orients 4";
  const fs::path a = work_dir() / "a.json", b = work_dir() / "b.json";
  ASSERT_EQ(run("stats --input " + data("brick_64.png") + common + " --out " + a.string()).code, 0);
  ASSERT_EQ(run("stats --input " + shifted.string() + common + " --out " + b.string()).code, 0);
  const auto sa = statistics_from_json(read_json_file(a));
  const auto sb = statistics_from_json(read_json_file(b));
  double max_diff = 0.0;
  for (std::size_t i = 0; i < sa.size(); ++i) max_diff = std::max(max_diff, std::abs(sa.values[i] - sb.values[i]));
  EXPECT_LT(max_diff, 1e-10);
  const auto cmp = run("stats --compare " + a.string() + " " + b.string() + " --epsilon 1e-6");
  EXPECT_EQ(cmp.code, 0);
  EXPECT_NE(cmp.out.find("yes"), std::string::npos) << cmp.out;
}

TEST(Cli, SynthManifestReplayIsBitIdentical) {
  const fs::path out = work_dir() / "brick.png";
  const auto r = run("synth --input " + data("brick_64.png") + " --out " + out.string() +
                     " --scales 3 --restarts 2 --iters 10 --seed 3 --quiet");
  ASSERT_EQ(r.code, 0) << r.out;
  const fs::path manifest = work_dir() / "brick.manifest.json";
  ASSERT_TRUE(fs::exists(manifest));
  ASSERT_TRUE(fs::exists(work_dir() / "brick.history.jsonl"));
  const auto m = read_json_file(manifest);
  EXPECT_EQ(m["output_sha256"], sha256_file(out));
  EXPECT_EQ(m["input"]["sha256"], sha256_file(data("brick_64.png")));

  const fs::path replay = work_dir() / "replay.png";
  const auto rr = run("synth --manifest " + manifest.string() + " --out " + replay.string() + " --quiet");
  ASSERT_EQ(rr.code, 0) << rr.out;
  EXPECT_EQ(sha256_file(replay), sha256_file(out));
  EXPECT_EQ(run("synth --manifest " + manifest.string() + " --out " + replay.string() + " --scales 2").code, 1);
}

TEST(Cli, LargeScaleOnLargeImageRecordsMargins) {
  const fs::path in = work_dir() / "noise256.png";
  save_png(in, sample_gaussian_image(256, 0.5, 0.15, Seed{4}));
  const fs::path out = work_dir() / "noise256_out.png";
  const auto r = run("synth --input " + in.string() + " --out " + out.string() +
                     " --variant s --scales 6 --orients 2 --alphas 2 --restarts 1 --iters 1 --quiet");
  ASSERT_EQ(r.code, 0) << r.out;
  const auto m = read_json_file(work_dir() / "noise256_out.manifest.json");
  EXPECT_EQ(m["window_margins"], nlohmann::json({1, 2, 4, 8, 16, 32, 64}));
  EXPECT_EQ(m["config"]["scales"], 6);
}
