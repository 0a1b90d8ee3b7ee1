#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string cli = MMREACH_CLI_PATH;
const std::string configs = MMREACH_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("mmreach_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args, const fs::path& stdout_file = "/dev/null") {
  const std::string cmd = cli + " " + args + " > " + stdout_file.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json load(const fs::path& p) { return json::parse(slurp(p)); }

fs::path write_config(const fs::path& dir, const std::string& name, const std::string& text) {
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST(Cli, ReachZeroHorizonReturnsX0) {
  const auto out = scratch("zero");
  EXPECT_EQ(run("reach --system poly3d --x0 -0.5,0.5 -0.5,0.5 -0.5,0.5 --T 0 --decomp closed --out " + out.string()), 0);
  const json r = load(out / "result.json");
  for (const char* key : {"over", "under"}) {
    EXPECT_EQ(r[key]["status"], "ok");
    EXPECT_EQ(r[key]["box"]["lower"], json({-0.5, -0.5, -0.5}));
    EXPECT_EQ(r[key]["box"]["upper"], json({0.5, 0.5, 0.5}));
  }
  const json m = load(out / "manifest.json");
  EXPECT_EQ(m["command"], "reach");
  EXPECT_EQ(m["system"], "poly3d");
  EXPECT_EQ(m["T"], 0.0);
  EXPECT_TRUE(m.contains("integrator"));
  EXPECT_TRUE(m.contains("optimizer"));
  EXPECT_TRUE(m.contains("seed"));
  EXPECT_TRUE(m.contains("version"));
  EXPECT_TRUE(m.contains("timestamp"));
  EXPECT_TRUE(m.contains("disturbance"));
}

TEST(Cli, ReachWithOracleWritesArtifacts) {
  const auto out = scratch("oracle");
  EXPECT_EQ(run("reach --system abs2d --x0 -1,1 0,1 --T 0.5 --method both --decomp closed --oracle --samples 500 "
                "--out " + out.string()),
            0);
  EXPECT_TRUE(fs::exists(out / "oracle.csv"));
  const json v = load(out / "validation.json");
  EXPECT_EQ(v["pass"], true);
  EXPECT_EQ(v["over"]["outside"], 0);
}

TEST(Cli, ReachIsDeterministic) {
  const auto a = scratch("det_a");
  const auto b = scratch("det_b");
  const std::string args = "reach --system poly3d --x0 -0.5,0.5 -0.5,0.5 -0.5,0.5 --T 0.5 --decomp closed --oracle "
                           "--samples 300 --probes 20 --seed 42 --out ";
  ASSERT_EQ(run(args + a.string()), 0);
  ASSERT_EQ(run(args + b.string()), 0);
  EXPECT_EQ(slurp(a / "result.json"), slurp(b / "result.json"));
  EXPECT_EQ(slurp(a / "oracle.csv"), slurp(b / "oracle.csv"));
  EXPECT_EQ(slurp(a / "validation.json"), slurp(b / "validation.json"));
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run("reach --system poly3d --x0 -0.5,0.5 -0.5,0.5 -0.5,0.5 --T -1"), 64);
  EXPECT_EQ(run("reach --system poly3d --x0 -0.5,0.5 --T 1"), 64);
  EXPECT_EQ(run("reach --system poly3d --x0 -0.5,0.5 a,b -0.5,0.5 --T 1"), 64);
  EXPECT_EQ(run("reach --system poly3d --x0 0.5,-0.5 -0.5,0.5 -0.5,0.5 --T 1"), 64);
  EXPECT_EQ(run("reach --system nosuch --x0 -0.5,0.5 --T 1"), 64);
  EXPECT_EQ(run("reach --system abs2d --x0 -1,1 0,1 --T 1 --method sideways"), 64);
  EXPECT_EQ(run("frobnicate"), 64);
  EXPECT_EQ(run(""), 64);
}

TEST(Cli, ReachStatusExitCodes) {
  const auto dir = scratch("status");
  const auto shrink = write_config(dir, "shrink.json",
                                   R"({"n": 1, "m": 1, "disturbance": {"lower": [-1], "upper": [1]}, "field": ["-x1 + w1"]})");
  EXPECT_EQ(run("reach --system " + shrink.string() + " --x0 -0.5,0.5 --T 1 --method under --out " + dir.string()), 2);
  EXPECT_EQ(load(dir / "result.json")["under"]["status"], "left_TX");

  const auto bounded = write_config(dir, "bounded.json",
                                    R"({"n": 1, "domain": {"lower": [-1], "upper": [2]}, "field": ["x1"]})");
  EXPECT_EQ(run("reach --system " + bounded.string() + " --x0 1,1 --T 1 --method over --out " + dir.string()), 3);
  EXPECT_EQ(load(dir / "result.json")["over"]["status"], "left_domain");
}

TEST(Cli, UnderFallsBackToNumericBackwardDecomposition) {
  const auto dir = scratch("precondition");
  const std::string args = "reach --system abs2d --x0 -1,1 0,1 --T 0.1 --method under --out " + dir.string();
  EXPECT_EQ(run(args), 0);
}

TEST(Cli, DecompEval) {
  const auto dir = scratch("eval");
  EXPECT_EQ(run("decomp eval --system abs2d --x 1,3 --xhat 1,3", dir / "out.json"), 0);
  EXPECT_EQ(load(dir / "out.json")["value"], json({2.0, -1.0}));
  EXPECT_EQ(run("decomp eval --system abs2d --x 1,0 --xhat 0,1"), 65);
  EXPECT_EQ(run("decomp eval --system poly3d --x 0,-1,0 --xhat 0,1,0 --w -0.25,0 --what -0.25,0 --compare-oracle",
                dir / "poly.json"),
            0);
  const json p = load(dir / "poly.json");
  EXPECT_LE(p["gap"].get<double>(), 1e-4);
  EXPECT_EQ(run("decomp eval --system abs2d --x 1 --xhat 1,3"), 64);
}

TEST(Cli, Verify) {
  EXPECT_EQ(run("verify --system abs2d --decomp closed"), 0);
  EXPECT_EQ(run("verify --system poly3d --decomp closed --against tight --samples 300 --pairs 20 --gap-points 100"), 0);
  EXPECT_EQ(run("verify --system abs2d --decomp " + configs + "/abs2d_corrupted.json --pairs 20"), 4);
  EXPECT_EQ(run("verify --system abs2d --decomp loose --pairs 20"), 0);
}

TEST(Cli, Compare) {
  const auto dir = scratch("compare");
  EXPECT_EQ(run("compare --system abs2d --x0 -1,1 0,1 --other loose --out " + dir.string()), 0);
  const json c = load(dir / "compare.json");
  EXPECT_EQ(c["pass"], true);
  EXPECT_EQ(c["boxes"].size(), 3u);
  EXPECT_EQ(run("compare --system abs2d --x0 -1,1 0,1 --tight closed --other tight --out " + dir.string()), 0);
  EXPECT_LE(load(dir / "compare.json")["max_bound_difference"].get<double>(), 1e-9);
  EXPECT_EQ(run("compare --system abs2d --x0 -1,1 0,1 --other " + configs + "/abs2d_corrupted.json"), 4);
}
