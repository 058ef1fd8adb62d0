#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cuttree/cli.hpp"
#include "cuttree/errors.hpp"
#include "cuttree/plane_tree.hpp"

using namespace cuttree;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string line; std::getline(is, line);) out.push_back(line);
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("cuttree_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(CliSample, ThreeDeterministicLines) {
  const std::vector<std::string> args{"sample", "--model", "geometric", "--n", "100", "--count", "3", "--seed", "7"};
  const auto a = cli(args);
  const auto b = cli(args);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto ls = lines(a.out);
  ASSERT_EQ(ls.size(), 4u);
  EXPECT_EQ(ls[0].rfind("# manifest: ", 0), 0u);
  for (int k = 1; k <= 3; ++k) EXPECT_EQ(from_text(ls[k]).n_edges(), 100);
  const auto manifest = nlohmann::json::parse(ls[0].substr(12));
  EXPECT_EQ(manifest["seed"], 7);
  EXPECT_EQ(manifest["tool"], "cuttree-lab");
}

TEST(CliSample, UsageErrors) {
  EXPECT_EQ(cli({"sample", "--model", "geometric", "--n", "0", "--seed", "1"}).code, kExitUsage);
  EXPECT_EQ(cli({"sample", "--model", "geometric", "--n", "10"}).code, kExitUsage);
  EXPECT_EQ(cli({"sample", "--model", "nope", "--n", "10", "--seed", "1"}).code, kExitUsage);
  EXPECT_EQ(cli({"sample", "--model", "power_tail", "--alpha", "2.5", "--n", "10", "--seed", "1"}).code, kExitUsage);
  EXPECT_EQ(cli({"sample", "--model", "explicit", "--pmf", "0.5,0,0.5", "--n", "3", "--seed", "1"}).code, kExitUsage);
  EXPECT_EQ(cli({"bogus"}).code, kExitUsage);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

TEST(CliSample, WorkerCountDoesNotChangeOutput) {
  auto trees = [](const std::string& workers) {
    auto ls = lines(cli({"sample", "--model", "power_tail", "--alpha", "1.5", "--n", "300", "--count", "12", "--seed",
                         "11", "--workers", workers})
                        .out);
    return std::vector<std::string>(ls.begin() + 1, ls.end());
  };
  const auto det = trees("deterministic");
  ASSERT_EQ(det.size(), 12u);
  EXPECT_EQ(det, trees("1"));
  EXPECT_EQ(det, trees("8"));
}

TEST(CliSample, EnvOverrideIgnoredInDeterministicMode) {
  const std::vector<std::string> args{"sample", "--model", "geometric", "--n", "50", "--count", "5", "--seed", "3"};
  ::setenv("CUTTREE_WORKERS", "1", 1);
  const auto a = cli(args);
  ::setenv("CUTTREE_WORKERS", "8", 1);
  const auto b = cli(args);
  ::unsetenv("CUTTREE_WORKERS");
  EXPECT_EQ(a.out, b.out);
}

TEST(CliSample, WritesRunDirectory) {
  const auto dir = scratch_dir("sample");
  const auto r = cli({"sample", "--model", "geometric", "--n", "20", "--count", "2", "--seed", "9", "--out",
                      dir.string(), "--traces", "--distances", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const fs::path run = lines(r.out).at(0);
  EXPECT_EQ(run.parent_path(), dir);
  EXPECT_NE(run.filename().string().find("-seed9"), std::string::npos);
  for (const char* f : {"trees.txt", "trace_0.csv", "trace_1.csv", "distances.csv"}) {
    ASSERT_TRUE(fs::exists(run / f)) << f;
    EXPECT_EQ(slurp(run / f).rfind("# manifest: ", 0), 0u) << f;
  }
  const auto dist = lines(slurp(run / "distances.csv"));
  EXPECT_EQ(dist[1], "tree,i,j,delta");
  EXPECT_EQ(dist.size(), 2u + 2 * 6);
  fs::remove_all(dir);
}

TEST(CliExperiment, ConfigErrors) {
  EXPECT_EQ(cli({"experiment", "theorem1", "--model", "geometric", "--ns", "50", "--reps", "10", "--seed", "1"}).code,
            kExitUsage);
  EXPECT_EQ(cli({"experiment", "theorem2", "--model", "power_tail", "--alpha", "1.5", "--ns", "50", "--reps", "10",
                 "--seed", "1"})
                .code,
            kExitUsage);
  EXPECT_EQ(cli({"experiment", "theorem2", "--model", "geometric", "--ns", "50", "--reps", "10"}).code, kExitUsage);
  EXPECT_EQ(cli({"experiment", "theorem2", "--model", "geometric", "--ns", "100,50", "--reps", "10", "--seed", "1"})
                .code,
            kExitUsage);
  EXPECT_EQ(cli({"experiment", "moddist", "--model", "geometric", "--ns", "10", "--reps", "10", "--seed", "1"}).code,
            kExitUsage);
  EXPECT_EQ(cli({"experiment", "nope", "--model", "geometric", "--ns", "10", "--reps", "10", "--seed", "1"}).code,
            kExitUsage);
}

TEST(CliExperiment, Theorem2ReportShape) {
  const auto r = cli({"experiment", "theorem2", "--model", "geometric", "--ns", "50,100", "--reps", "50", "--seed", "1"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["experiment"], "theorem2");
  EXPECT_EQ(j["manifest"]["seed"], 1);
  EXPECT_FALSE(j.contains("runtime_seconds"));
  ASSERT_EQ(j["results"]["per_n"].size(), 2u);
  EXPECT_TRUE(j["results"]["per_n"][0].contains("mean_ratio"));
  EXPECT_TRUE(j["results"]["per_n"][0].contains("mean_ratio_vertex_edge"));
  EXPECT_TRUE(j.contains("passed"));
}

TEST(CliExperiment, DeterministicReportsAreByteIdentical) {
  const std::vector<std::string> args{"experiment", "moddist", "--model", "geometric", "--ns",
                                      "5,20",       "--reps",  "200",      "--seed",   "4"};
  const auto a = cli(args);
  ASSERT_EQ(a.code, kExitOk) << a.err;
  EXPECT_EQ(a.out, cli(args).out);
}

TEST(CliExperiment, ConfigFileWithFlagOverride) {
  const auto dir = scratch_dir("config");
  {
    std::ofstream f(dir / "run.json");
    f << R"({"model": {"model": "geometric"}, "ns": [10, 20], "reps": 100, "seed": 2})";
  }
  const auto from_file = cli({"experiment", "tails", "--config", (dir / "run.json").string()});
  ASSERT_EQ(from_file.code, kExitOk) << from_file.err;
  const auto j = nlohmann::json::parse(from_file.out);
  EXPECT_EQ(j["manifest"]["seed"], 2);
  const auto overridden = cli({"experiment", "tails", "--config", (dir / "run.json").string(), "--seed", "3"});
  ASSERT_EQ(overridden.code, kExitOk) << overridden.err;
  EXPECT_EQ(nlohmann::json::parse(overridden.out)["manifest"]["seed"], 3);
  fs::remove_all(dir);
}

TEST(CliVerify, OnlyOneCheck) {
  const auto r = cli({"verify", "--only", "cyclic"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const auto ls = lines(r.out);
  ASSERT_EQ(ls.size(), 1u);
  EXPECT_EQ(ls[0].rfind("PASS cyclic:", 0), 0u);
}

TEST(CliVerify, GuardViolationIsUsageError) {
  EXPECT_EQ(cli({"verify", "--only", "emn", "--m", "20"}).code, kExitUsage);
  EXPECT_EQ(cli({"verify", "--only", "nosuchcheck"}).code, kExitUsage);
}

TEST(CliModel, FromJson) {
  EXPECT_EQ(model_from_json({{"model", "geometric"}}).family(), OffspringModel::Family::geometric);
  EXPECT_EQ(model_from_json({{"model", "power_tail"}, {"alpha", 1.5}}).alpha(), 1.5);
  EXPECT_EQ(model_from_json({{"model", "explicit"}, {"pmf", {0.5, 0.0, 0.5}}}).period(), 2);
  EXPECT_THROW(model_from_json({{"model", "power_tail"}}), ConfigError);
  EXPECT_THROW(model_from_json({{"model", "power_tail"}, {"alpha", 3.0}}), ConfigError);
  EXPECT_THROW(model_from_json({{"alpha", 1.5}}), ConfigError);
}
