#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cuttree/cut_tree.hpp"
#include "cuttree/modified_distance.hpp"
#include "cuttree/offspring.hpp"
#include "cuttree/plane_tree.hpp"
#include "cuttree/rng.hpp"

namespace cuttree {

enum class ObservableSource { tree, cut_tree };

// Distances among the distinguished point (root / root block) and k points
// drawn uniformly with replacement from v_1..v_n or leaves 1..n.
struct DistanceObservables {
  ObservableSource source = ObservableSource::tree;
  int k = 0;
  double scaling = 1.0;
  std::vector<int> points;                  // points[0] = 0
  std::vector<std::vector<double>> matrix;  // (k+1) x (k+1)

  // Upper-triangle entries in row order: (0,1), (0,2), ..., (k-1,k).
  std::vector<double> flattened() const;
};

DistanceObservables sample_distance_observables(const PlaneTree& tree, int k, Rng& rng, double scaling);
DistanceObservables sample_distance_observables(const CutTree& ct, int k, Rng& rng, double scaling);

// Two-sample Kolmogorov-Smirnov statistic; ties handled exactly.
double ks_two_sample(std::span<const double> xs, std::span<const double> ys);
// Asymptotic Kolmogorov tail with the small-sample correction of Stephens.
double ks_asymptotic_pvalue(double d, std::size_t m, std::size_t n);
// (1 + #{perm stat >= observed}) / (1 + permutations).
double ks_permutation_pvalue(std::span<const double> xs, std::span<const double> ys, int permutations, Rng& rng);

// 2 E|X - Y| - E|X - X'| - E|Y - Y'| over the empirical laws (V-statistics).
double energy_distance(const std::vector<std::vector<double>>& xs, const std::vector<std::vector<double>>& ys);

// Exact identity checks on enumerable ranges.
struct EmnPoint {
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double difference = 0.0;
};

constexpr int kMaxEmnEdges = 8;
constexpr int kMaxPointedVertices = 8;

std::vector<EmnPoint> check_emn_formula(const OffspringModel& model, int m, int n, std::span<const double> t_values,
                                        double a_n);

struct GwstarCheck {
  double total_variation = 0.0;
  double product_form_error = 0.0;  // max relative deviation from c(A) P(B)
  std::int64_t pointed_trees = 0;
};

GwstarCheck check_gwstar_transform(const OffspringModel& model, int max_vertices);

// Max |forest_size_pmf(k, n) - P(Y_k = n)| with the right side from a direct
// recursion on the GW total-size law.
double check_cyclic_lemma(const OffspringModel& model, int k_max, int n_max);

// Theorem-level experiments.

// One raw observable, kept when an experiment runs with keep_raw.
struct RawValue {
  int n = 0;
  std::int64_t replicate = 0;
  std::string source;
  std::string observable;
  double value = 0.0;
};

struct Theorem1Config {
  std::vector<int> ns;
  std::int64_t replicates = 0;
  int k = 2;
  std::uint64_t seed = 0;
  int workers = 0;
  double ks_threshold = 0.05;
  double ks_slack = 0.01;
  double calibration_level = 0.01;
  int permutations = 999;
  bool keep_raw = false;
};

struct Theorem1Row {
  int n = 0;
  double a_n = 0.0;
  std::int64_t replicates = 0;
  double ks = 0.0;
  double ks_pvalue = 0.0;       // asymptotic
  double energy = 0.0;          // joint distance vectors, scaled by a_n/n
  Estimate tree_distance;       // (a_n/n) d(rho, xi)
  Estimate cut_distance;        // (a_n/n) delta(0, xi)
};

struct Theorem1Report {
  std::string model;
  Theorem1Config config;
  std::vector<Theorem1Row> rows;
  double calibration_ks = 0.0;
  double calibration_pvalue = 0.0;
  bool ks_non_increasing = false;
  bool final_below_threshold = false;
  bool calibration_passed = false;
  double runtime_seconds = 0.0;
  std::vector<RawValue> raw;

  bool passed() const { return ks_non_increasing && final_below_threshold && calibration_passed; }
};

// ConfigError unless the model has infinite variance and the config is sane.
Theorem1Report run_theorem1_experiment(const OffspringModel& model, const Theorem1Config& config);

struct Theorem2Config {
  std::vector<int> ns;
  std::int64_t replicates = 0;
  std::uint64_t seed = 0;
  int workers = 0;
  double tolerance = 0.05;
  bool keep_raw = false;
};

struct Theorem2Row {
  int n = 0;
  std::int64_t replicates = 0;
  // Per-tree averages over all points, rescaled.
  Estimate tree_mean;    // (sigma/sqrt n) d(rho, .)
  Estimate vertex_mean;  // (sigma + 1/sigma)/sqrt n delta_vertex(0, .)
  Estimate edge_mean;    // 1/(sigma sqrt n) delta_edge(0, .)
  double ratio_vertex_tree = 0.0;
  double ratio_vertex_edge = 0.0;
  // Single uniform point per replicate.
  double ks_vertex_tree = 0.0;
  double ks_edge_tree = 0.0;
  bool within_tolerance = false;
};

struct Theorem2Report {
  std::string model;
  Theorem2Config config;
  double sigma = 0.0;
  double reference_mean = 0.0;  // sqrt(pi/2), informational
  std::vector<Theorem2Row> rows;
  double runtime_seconds = 0.0;
  std::vector<RawValue> raw;

  bool passed() const;
};

Theorem2Report run_theorem2_experiment(const OffspringModel& model, const Theorem2Config& config);

}  // namespace cuttree
