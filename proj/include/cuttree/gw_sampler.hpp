#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cuttree/offspring.hpp"
#include "cuttree/plane_tree.hpp"
#include "cuttree/rng.hpp"

namespace cuttree {

// Galton-Watson tree with its unconditioned probability prod_v nu(deg v).
struct WeightedTree {
  PlaneTree tree;
  double probability = 0.0;
};

constexpr int kMaxEnumerationEdges = 10;

// All plane trees with exactly m edges and positive GW weight.
std::vector<WeightedTree> enumerate_plane_trees(const OffspringModel& model, int m);

// Exact draws of a GW tree conditioned to have n edges: i.i.d. offspring
// counts conditioned on summing to n (by rejection), cyclically rotated into
// an excursion. The inverse-CDF table is built once per (model, n).
// For the geometric law the conditioned counts are a uniform weak composition
// of n into n+1 parts, drawn directly instead of by rejection.
class ConditionedSampler {
 public:
  ConditionedSampler(const OffspringModel& model, int n, std::int64_t max_attempts = 100'000'000);

  int n_edges() const { return n_; }
  PlaneTree draw(Rng& rng) const;
  // Same as draw, reporting the number of rejection attempts used.
  PlaneTree draw_counted(Rng& rng, std::int64_t& attempts) const;

 private:
  std::int64_t offspring(Rng& rng) const;

  void uniform_composition(Rng& rng, std::vector<int>& z) const;

  int n_;
  std::int64_t max_attempts_;
  bool uniform_composition_ = false;
  std::vector<double> cdf_;   // cdf_[k] = P(Z <= k), k <= n; cdf_[n+1] = 1 (overflow)
  std::vector<int> guide_;    // guide_[g] = min{k : cdf_[k] > g / guide_.size()}
};

PlaneTree sample_conditioned(const OffspringModel& model, int n, Rng& rng);

// (T_n, v) with v uniform on the n+1 vertices: GW* conditioned on n+1 vertices.
std::pair<PlaneTree, int> sample_pointed_gwstar(const ConditionedSampler& sampler, Rng& rng);
std::pair<PlaneTree, int> sample_pointed_gwstar(const OffspringModel& model, int n, Rng& rng);

// Rotates an increment-sum -1 offspring vector into the unique excursion.
std::vector<int> cyclic_rotation_to_excursion(std::vector<int> offspring);

constexpr int kMaxWalkSteps = 64;

// Law of W_n = sum_{i<=n} (Z_i - 1). Entries are exact for every level up to
// `exact_up_to` (the whole support when nu has finite support).
struct WalkPmf {
  int n = 0;
  long min_level = 0;          // = -n
  long exact_up_to = 0;
  bool complete = false;       // finite support: no mass above exact_up_to
  std::vector<double> values;  // values[k - min_level] = P(W_n = k)

  double at(long level) const;
  double total() const;
};

// Guards: n <= 64; for unbounded support `level_cap` must be given.
WalkPmf exact_walk_pmf(const OffspringModel& model, int n, std::optional<long> level_cap = std::nullopt);

// P(Y_k = n) = (k/n) P(W_n = -k), Y_k the total size of k independent GW trees.
double forest_size_pmf(const OffspringModel& model, int k, int n);

// P(|E(T)| = m) for the unconditioned GW tree.
double edge_count_pmf(const OffspringModel& model, int m);

}  // namespace cuttree
