#include "cuttree/cli.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "cuttree/cut_tree.hpp"
#include "cuttree/errors.hpp"
#include "cuttree/fragmentation.hpp"
#include "cuttree/gw_sampler.hpp"
#include "cuttree/modified_distance.hpp"
#include "cuttree/parallel.hpp"
#include "cuttree/statistics.hpp"
#include "cuttree/verify.hpp"

#ifndef CUTTREE_VERSION
#define CUTTREE_VERSION "0.0.0"
#endif

namespace cuttree {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

OffspringModel model_from_json(const nlohmann::json& spec) {
  if (!spec.is_object() || !spec.contains("model") || !spec["model"].is_string()) {
    throw ConfigError("model spec must be an object with a \"model\" name");
  }
  const auto name = spec["model"].get<std::string>();
  if (name == "geometric") return OffspringModel::geometric_critical();
  if (name == "power_tail") {
    if (!spec.contains("alpha") || !spec["alpha"].is_number()) throw ConfigError("power_tail model needs alpha");
    try {
      return OffspringModel::power_tail_critical(spec["alpha"].get<double>());
    } catch (const DomainError& e) {
      throw ConfigError(e.what());
    }
  }
  if (name == "explicit") {
    if (!spec.contains("pmf") || !spec["pmf"].is_array()) throw ConfigError("explicit model needs a pmf array");
    try {
      return OffspringModel::from_pmf(spec["pmf"].get<std::vector<double>>(),
                                      spec.value("label", std::string("explicit")));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    } catch (const std::domain_error& e) {
      throw ConfigError(e.what());
    }
  }
  throw ConfigError("unknown model: " + name);
}

namespace {

constexpr std::uint64_t kSampleTag = 0x73616d;

struct RunConfig {
  std::string command;
  std::string kind;
  nlohmann::json model = {{"model", "geometric"}};
  std::vector<int> ns;
  std::int64_t reps = 0;
  int k = 2;
  std::optional<std::uint64_t> seed;
  std::string workers = "deterministic";
  int n = 0;
  int count = 1;
  int levels = 6;
  double tail_threshold = 0.02;
  int permutations = 999;
  bool raw = false;
  bool traces = false;
  int distances = 0;
  std::string out_dir;
  std::string report;
  std::string config_file;
  std::vector<std::string> only;
  VerifyOptions verify;

  bool deterministic() const { return workers == "deterministic"; }
};

// 0 runs inline; otherwise the requested count, overridden by CUTTREE_WORKERS.
int resolve_workers(const RunConfig& cfg) {
  if (cfg.deterministic()) return 0;
  int count = 0;
  try {
    count = std::stoi(cfg.workers);
  } catch (const std::exception&) {
    throw ConfigError("--workers must be 'deterministic' or a positive count");
  }
  if (const char* env = std::getenv("CUTTREE_WORKERS")) {
    try {
      count = std::stoi(env);
    } catch (const std::exception&) {
      throw ConfigError("CUTTREE_WORKERS must be a positive integer");
    }
  }
  if (count < 1) throw ConfigError("worker count must be positive");
  return count;
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("config file " + path + ": " + e.what());
  }
  if (j.contains("model")) cfg.model = j["model"].is_string() ? nlohmann::json{{"model", j["model"]}} : j["model"];
  if (j.contains("ns")) cfg.ns = j["ns"].get<std::vector<int>>();
  if (j.contains("reps")) cfg.reps = j["reps"].get<std::int64_t>();
  if (j.contains("k")) cfg.k = j["k"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("workers")) {
    cfg.workers = j["workers"].is_string() ? j["workers"].get<std::string>() : std::to_string(j["workers"].get<int>());
  }
  if (j.contains("levels")) cfg.levels = j["levels"].get<int>();
}

ojson config_echo(const RunConfig& cfg) {
  ojson j;
  j["command"] = cfg.command;
  if (!cfg.kind.empty()) j["kind"] = cfg.kind;
  j["model"] = cfg.model;
  if (cfg.command == "sample") {
    j["n"] = cfg.n;
    j["count"] = cfg.count;
    j["traces"] = cfg.traces;
    j["distances"] = cfg.distances;
  } else {
    j["ns"] = cfg.ns;
    j["reps"] = cfg.reps;
    j["k"] = cfg.k;
    if (cfg.kind == "tails") {
      j["levels"] = cfg.levels;
      j["tail_threshold"] = cfg.tail_threshold;
    }
    if (cfg.kind == "theorem1") j["permutations"] = cfg.permutations;
  }
  j["workers"] = cfg.workers;
  return j;
}

ojson manifest(const RunConfig& cfg, const std::string& command_line, const OffspringModel& model) {
  ojson m;
  m["tool"] = "cuttree-lab";
  m["version"] = CUTTREE_VERSION;
  m["command_line"] = command_line;
  m["config"] = config_echo(cfg);
  if (cfg.seed) m["seed"] = *cfg.seed;
  const ScalingSequence a(model);
  m["scaling"] = a.kind() == ScalingSequence::Kind::finite_variance
                     ? "sigma*sqrt(n)"
                     : "tail inversion: a_n = min{r >= 1 : P(Z - 1 > r) <= 1/n} (one representative of its "
                       "equivalence class)";
  return m;
}

std::string utc_stamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

fs::path make_run_dir(const RunConfig& cfg) {
  const fs::path dir = fs::path(cfg.out_dir) / (utc_stamp() + "-seed" + std::to_string(cfg.seed.value_or(0)));
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path.string());
  f << content;
  if (!f) throw ConfigError("failed writing " + path.string());
}

ojson estimate_json(const Estimate& e) { return ojson{{"mean", e.mean}, {"se", e.se}, {"count", e.count}}; }

std::string raw_csv(const std::vector<RawValue>& raw, const ojson& head) {
  std::ostringstream os;
  os << "# manifest: " << head.dump() << '\n';
  os << "n,replicate,source,observable,value\n";
  os.precision(17);
  for (const auto& r : raw) os << r.n << ',' << r.replicate << ',' << r.source << ',' << r.observable << ',' << r.value << '\n';
  return os.str();
}

struct ExperimentOutput {
  ojson results;
  bool passed = false;
  double runtime = 0.0;
  std::vector<RawValue> raw;
};

ExperimentOutput run_theorem1(const RunConfig& cfg, const OffspringModel& model, int workers) {
  Theorem1Config c;
  c.ns = cfg.ns;
  c.replicates = cfg.reps;
  c.k = cfg.k;
  c.seed = *cfg.seed;
  c.workers = workers;
  c.permutations = cfg.permutations;
  c.keep_raw = cfg.raw;
  const auto rep = run_theorem1_experiment(model, c);
  ExperimentOutput out;
  ojson rows = ojson::array();
  for (const auto& r : rep.rows) {
    rows.push_back({{"n", r.n},
                    {"a_n", r.a_n},
                    {"replicates", r.replicates},
                    {"ks", r.ks},
                    {"ks_pvalue_asymptotic", r.ks_pvalue},
                    {"energy_distance", r.energy},
                    {"tree_root_distance", estimate_json(r.tree_distance)},
                    {"cut_root_distance", estimate_json(r.cut_distance)}});
  }
  out.results["per_n"] = rows;
  out.results["calibration"] = {{"n", rep.rows.back().n},
                                {"replicates", cfg.reps},
                                {"ks", rep.calibration_ks},
                                {"permutation_pvalue", rep.calibration_pvalue},
                                {"permutations", cfg.permutations},
                                {"passed", rep.calibration_passed}};
  out.results["ks_non_increasing"] = rep.ks_non_increasing;
  out.results["ks_slack"] = c.ks_slack;
  out.results["ks_threshold"] = c.ks_threshold;
  out.results["final_ks_below_threshold"] = rep.final_below_threshold;
  out.passed = rep.passed();
  out.runtime = rep.runtime_seconds;
  out.raw = rep.raw;
  return out;
}

ExperimentOutput run_theorem2(const RunConfig& cfg, const OffspringModel& model, int workers) {
  Theorem2Config c;
  c.ns = cfg.ns;
  c.replicates = cfg.reps;
  c.seed = *cfg.seed;
  c.workers = workers;
  c.keep_raw = cfg.raw;
  const auto rep = run_theorem2_experiment(model, c);
  ExperimentOutput out;
  ojson rows = ojson::array();
  for (const auto& r : rep.rows) {
    rows.push_back({{"n", r.n},
                    {"replicates", r.replicates},
                    {"tree_mean", estimate_json(r.tree_mean)},
                    {"vertex_cut_mean", estimate_json(r.vertex_mean)},
                    {"edge_cut_mean", estimate_json(r.edge_mean)},
                    {"mean_ratio", r.ratio_vertex_tree},
                    {"mean_ratio_vertex_edge", r.ratio_vertex_edge},
                    {"ks_vertex_vs_tree", r.ks_vertex_tree},
                    {"ks_edge_vs_tree", r.ks_edge_tree},
                    {"within_tolerance", r.within_tolerance}});
  }
  out.results["sigma"] = rep.sigma;
  out.results["tolerance"] = c.tolerance;
  out.results["reference_mean_informational"] = rep.reference_mean;
  out.results["per_n"] = rows;
  out.passed = rep.passed();
  out.runtime = rep.runtime_seconds;
  out.raw = rep.raw;
  return out;
}

ExperimentOutput run_moddist(const RunConfig& cfg, const OffspringModel& model, int workers) {
  const auto start = std::chrono::steady_clock::now();
  const ScalingSequence a(model);
  ExperimentOutput out;
  out.passed = true;
  ojson rows = ojson::array();
  for (int n : cfg.ns) {
    const auto rep = moddist_identity_stats(model, n, a(n), cfg.reps, *cfg.seed, workers);
    const bool pair_bound = rep.pair_lhs.mean <= rep.pair_rhs.mean + 3.0 * std::hypot(rep.pair_lhs.se, rep.pair_rhs.se);
    ojson row{{"n", n},
              {"a_n", rep.a_n},
              {"replicates", rep.replicates},
              {"L", estimate_json(rep.lhs)},
              {"R", estimate_json(rep.rhs)},
              {"difference", rep.difference},
              {"combined_se", rep.combined_se},
              {"paired_se", rep.paired_se},
              {"identity_within_3se", rep.identity_holds()},
              {"pair_L", estimate_json(rep.pair_lhs)},
              {"pair_R", estimate_json(rep.pair_rhs)},
              {"pair_bound_within_3se", pair_bound}};
    if (n == 1) {
      const auto exact = single_edge_moddist(rep.a_n);
      row["single_edge_exact"] = {{"L", exact.lhs}, {"R", exact.rhs}};
    }
    out.passed = out.passed && rep.identity_holds();
    rows.push_back(row);
  }
  out.results["per_n"] = rows;
  out.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

ExperimentOutput run_tails(const RunConfig& cfg, const OffspringModel& model, int workers) {
  const auto start = std::chrono::steady_clock::now();
  const ScalingSequence a(model);
  ExperimentOutput out;
  out.passed = true;
  ojson rows = ojson::array();
  for (int n : cfg.ns) {
    const auto rep = tail_mass_integral(model, n, a(n), cfg.levels, cfg.reps, *cfg.seed, workers);
    ojson levels = ojson::array();
    bool monotone = true;
    for (std::size_t l = 0; l < rep.levels.size(); ++l) {
      levels.push_back({{"level", l}, {"threshold_time", std::ldexp(1.0, static_cast<int>(l))},
                        {"estimate", estimate_json(rep.levels[l])}});
      if (l > 0) {
        const auto& prev = rep.levels[l - 1];
        const auto& cur = rep.levels[l];
        if (cur.mean > prev.mean + 2.0 * std::hypot(prev.se, cur.se)) monotone = false;
      }
    }
    const bool small = rep.levels.back().mean < cfg.tail_threshold;
    out.passed = out.passed && monotone && small;
    rows.push_back({{"n", n},
                    {"a_n", rep.a_n},
                    {"replicates", rep.replicates},
                    {"levels", levels},
                    {"non_increasing_within_2se", monotone},
                    {"last_level_below_threshold", small}});
  }
  out.results["per_n"] = rows;
  out.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

void check_ns(const std::vector<int>& ns) {
  if (ns.empty()) throw ConfigError("--ns is required");
  for (std::size_t q = 0; q < ns.size(); ++q) {
    if (ns[q] < 1) throw ConfigError("every n must be >= 1");
    if (q > 0 && ns[q] <= ns[q - 1]) throw ConfigError("ns must be strictly increasing");
  }
}

int cmd_experiment(const RunConfig& cfg, const std::string& command_line, std::ostream& out) {
  if (!cfg.seed) throw ConfigError("--seed is required for experiments");
  check_ns(cfg.ns);
  if (cfg.reps < 1) throw ConfigError("--reps must be positive");
  if (cfg.raw && cfg.out_dir.empty()) throw ConfigError("--raw needs --out");
  const OffspringModel model = model_from_json(cfg.model);
  const int workers = resolve_workers(cfg);

  ExperimentOutput result;
  try {
    if (cfg.kind == "theorem1") {
      result = run_theorem1(cfg, model, workers);
    } else if (cfg.kind == "theorem2") {
      result = run_theorem2(cfg, model, workers);
    } else if (cfg.kind == "moddist") {
      result = run_moddist(cfg, model, workers);
    } else {
      result = run_tails(cfg, model, workers);
    }
  } catch (const InputError& e) {
    throw ConfigError(e.what());
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }

  ojson report;
  report["manifest"] = manifest(cfg, command_line, model);
  report["experiment"] = cfg.kind;
  report["results"] = result.results;
  report["passed"] = result.passed;
  if (!cfg.deterministic()) report["runtime_seconds"] = result.runtime;
  const std::string text = report.dump(2) + "\n";

  if (!cfg.out_dir.empty()) {
    const fs::path dir = make_run_dir(cfg);
    write_file(dir / "report.json", text);
    if (cfg.raw) write_file(dir / "raw.csv", raw_csv(result.raw, report["manifest"]));
    out << dir.string() << '\n';
  } else if (!cfg.report.empty()) {
    write_file(cfg.report, text);
  } else {
    out << text;
  }
  return kExitOk;
}

struct SampleOutput {
  std::string coding;
  std::string trace_csv;
  std::vector<std::array<int, 3>> distances;  // i, j, delta
};

int cmd_sample(const RunConfig& cfg, const std::string& command_line, std::ostream& out) {
  if (!cfg.seed) throw ConfigError("--seed is required for sample");
  if (cfg.n < 1) throw ConfigError("--n must be >= 1");
  if (cfg.count < 1) throw ConfigError("--count must be >= 1");
  if ((cfg.traces || cfg.distances > 0) && cfg.out_dir.empty()) throw ConfigError("--traces/--distances need --out");
  const OffspringModel model = model_from_json(cfg.model);
  const int workers = resolve_workers(cfg);
  std::optional<ConditionedSampler> sampler;
  try {
    sampler.emplace(model, cfg.n);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  const std::uint64_t seed = *cfg.seed;

  auto samples = run_replicates<SampleOutput>(cfg.count, workers, [&](std::int64_t r) {
    Rng rng = substream(seed, {kSampleTag, static_cast<std::uint64_t>(r)});
    SampleOutput s;
    const PlaneTree tree = sampler->draw(rng);
    s.coding = to_text(tree);
    if (cfg.traces || cfg.distances > 0) {
      const FragmentationTrace trace = run_vertex_discrete(tree, rng);
      if (cfg.traces) {
        std::ostringstream os;
        trace.write_csv(os);
        s.trace_csv = os.str();
      }
      if (cfg.distances > 0) {
        const CutTree ct = build_cut_tree(tree, trace);
        const auto obs = sample_distance_observables(ct, cfg.distances, rng, 1.0);
        for (int a = 0; a <= obs.k; ++a) {
          for (int b = a + 1; b <= obs.k; ++b) {
            s.distances.push_back({obs.points[a], obs.points[b], static_cast<int>(obs.matrix[a][b])});
          }
        }
      }
    }
    return s;
  });

  const std::string head = "# manifest: " + manifest(cfg, command_line, model).dump() + "\n";
  std::string trees = head;
  for (const auto& s : samples) trees += s.coding + "\n";
  if (cfg.out_dir.empty()) {
    out << trees;
    return kExitOk;
  }
  const fs::path dir = make_run_dir(cfg);
  write_file(dir / "trees.txt", trees);
  if (cfg.traces) {
    for (std::size_t r = 0; r < samples.size(); ++r) {
      write_file(dir / ("trace_" + std::to_string(r) + ".csv"), head + samples[r].trace_csv);
    }
  }
  if (cfg.distances > 0) {
    std::ostringstream os;
    os << head << "tree,i,j,delta\n";
    for (std::size_t r = 0; r < samples.size(); ++r) {
      for (const auto& d : samples[r].distances) os << r << ',' << d[0] << ',' << d[1] << ',' << d[2] << '\n';
    }
    write_file(dir / "distances.csv", os.str());
  }
  out << dir.string() << '\n';
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, const std::string& command_line, std::ostream& out) {
  std::vector<std::string> names = cfg.only.empty() ? check_names() : cfg.only;
  for (const auto& name : names) {
    if (std::find(check_names().begin(), check_names().end(), name) == check_names().end()) {
      throw ConfigError("unknown check: " + name);
    }
  }
  VerifyOptions options = cfg.verify;
  if (cfg.seed) options.seed = *cfg.seed;
  bool all = true;
  ojson checks = ojson::array();
  for (const auto& name : names) {
    const CheckResult r = run_check(name, options);
    all = all && r.passed;
    out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << '\n';
    checks.push_back({{"name", r.name}, {"passed", r.passed}, {"metric", r.metric}, {"detail", r.detail}});
  }
  if (!cfg.report.empty()) {
    ojson report;
    report["manifest"] = {{"tool", "cuttree-lab"},
                          {"version", CUTTREE_VERSION},
                          {"command_line", command_line},
                          {"seed", options.seed}};
    report["checks"] = checks;
    report["passed"] = all;
    write_file(cfg.report, report.dump(2) + "\n");
  }
  if (!all) {
    out << "verification failed:";
    for (const auto& c : checks) {
      if (!c["passed"].get<bool>()) out << ' ' << c["name"].get<std::string>();
    }
    out << '\n';
  }
  return all ? kExitOk : kExitCheckFailed;
}

void add_model_options(CLI::App* app, std::string& model, double& alpha, std::vector<double>& pmf) {
  app->add_option("--model", model, "geometric | power_tail | explicit");
  app->add_option("--alpha", alpha, "power_tail index in (1,2)");
  app->add_option("--pmf", pmf, "explicit pmf nu(0),nu(1),...")->delimiter(',');
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cut-trees of conditioned Galton-Watson trees: sampling, experiments, exact checks", "cuttree-lab"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string model_name;
  double alpha = 0.0;
  std::vector<double> pmf;
  std::uint64_t seed = 0;

  auto common = [&](CLI::App* sub) {
    add_model_options(sub, model_name, alpha, pmf);
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--workers", cfg.workers, "'deterministic' or a worker count");
    sub->add_option("--config", cfg.config_file, "JSON run config; flags override it");
  };

  auto* sample = app.add_subcommand("sample", "draw conditioned trees");
  common(sample);
  sample->add_option("--n", cfg.n, "edges per tree")->required();
  sample->add_option("--count", cfg.count, "number of trees");
  sample->add_option("--out", cfg.out_dir, "parent directory for the run directory");
  sample->add_flag("--traces", cfg.traces, "write one fragmentation trace CSV per tree");
  sample->add_option("--distances", cfg.distances, "write cut-tree distances among K sampled leaves");

  auto* experiment = app.add_subcommand("experiment", "run a Monte Carlo experiment");
  common(experiment);
  experiment->add_option("kind", cfg.kind, "theorem1 | theorem2 | moddist | tails")
      ->required()
      ->check(CLI::IsMember({"theorem1", "theorem2", "moddist", "tails"}));
  experiment->add_option("--ns", cfg.ns, "tree sizes, comma separated")->delimiter(',');
  experiment->add_option("--reps", cfg.reps, "replicates per n");
  experiment->add_option("--k", cfg.k, "sampled points per replicate");
  experiment->add_option("--levels", cfg.levels, "largest level exponent for tails");
  experiment->add_option("--tail-threshold", cfg.tail_threshold, "bound at the largest level for tails");
  experiment->add_option("--permutations", cfg.permutations, "permutations for the calibration test");
  experiment->add_option("--out", cfg.out_dir, "parent directory for the run directory");
  experiment->add_option("--report", cfg.report, "write the JSON report to this file");
  experiment->add_flag("--raw", cfg.raw, "also write raw samples as CSV");

  auto* verify = app.add_subcommand("verify", "run the exact-oracle suite");
  verify->add_option("--seed", seed, "master seed");
  verify->add_option("--only", cfg.only, "checks to run")->delimiter(',');
  verify->add_option("--m", cfg.verify.emn_max_m, "largest m for the E_{m,n} check");
  verify->add_option("--oracle-trees", cfg.verify.oracle_trees);
  verify->add_option("--coupling-runs", cfg.verify.coupling_runs);
  verify->add_option("--symmetrization-trees", cfg.verify.symmetrization_trees);
  verify->add_option("--report", cfg.report, "write a JSON summary to this file");

  std::string command_line = "cuttree-lab";
  for (const auto& a : args) command_line += " " + a;

  std::vector<const char*> argv{"cuttree-lab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    auto given = [sub](const std::string& flag) {
      const CLI::Option* opt = sub->get_option_no_throw(flag);
      return opt != nullptr && opt->count() > 0;
    };
    if (!cfg.config_file.empty()) {
      // Explicit flags win over the file.
      RunConfig from_file = cfg;
      apply_config_file(from_file, cfg.config_file);
      if (!given("--ns")) cfg.ns = from_file.ns;
      if (!given("--reps")) cfg.reps = from_file.reps;
      if (!given("--k")) cfg.k = from_file.k;
      if (!given("--levels")) cfg.levels = from_file.levels;
      if (!given("--workers")) cfg.workers = from_file.workers;
      if (!given("--seed")) cfg.seed = from_file.seed;
      if (!given("--model")) cfg.model = from_file.model;
    }
    if (given("--seed")) cfg.seed = seed;
    if (given("--model")) {
      cfg.model = nlohmann::json{{"model", model_name}};
      if (model_name == "power_tail") cfg.model["alpha"] = alpha;
      if (model_name == "explicit") cfg.model["pmf"] = pmf;
    }
    if (cfg.command == "sample") return cmd_sample(cfg, command_line, out);
    if (cfg.command == "experiment") return cmd_experiment(cfg, command_line, out);
    return cmd_verify(cfg, command_line, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const GuardError& e) {
    err << "guard error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
}

}  // namespace cuttree
