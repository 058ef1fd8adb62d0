#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "cuttree/fragmentation.hpp"
#include "cuttree/offspring.hpp"

namespace cuttree {

// Integral of mu over [0, inf).
double delta_prime_root(const MassTrajectory& mu);

// Integral of mu_i + mu_j over [t_sep, inf).
double delta_prime_pair(const MassTrajectory& mu_i, const MassTrajectory& mu_j, double t_sep);

// Integral of mu over [from, inf).
double tail_integral(const MassTrajectory& mu, double from);

// delta'(i, j) with j = 0 for the root, looked up in trajectories computed
// for `tracked` and `pairs`. InputError when i or (i, j) was not tracked.
double delta_prime(const ComponentTrajectories& traj, std::span<const int> tracked,
                   std::span<const std::pair<int, int>> pairs, int i, int j);

// Sample mean with its standard error.
struct Estimate {
  double mean = 0.0;
  double se = 0.0;
  std::int64_t count = 0;
};

Estimate estimate(std::span<const double> xs);

struct ModdistReport {
  int n = 0;
  double a_n = 0.0;
  std::int64_t replicates = 0;
  Estimate lhs;  // E|(a_n/n) delta(0, xi) - delta'(0, xi)|^2
  Estimate rhs;  // (a_n/n) E delta'(0, xi)
  double difference = 0.0;
  double combined_se = 0.0;  // sqrt(se_L^2 + se_R^2)
  double paired_se = 0.0;    // s.e. of the per-replicate difference
  // Pair version of the bound: E|(a_n/n) delta(i,j) - delta'(i,j)|^2 <=
  // (a_n/n) E[delta'(0,i) + delta'(0,j)], over replicates with i != j.
  Estimate pair_lhs;
  Estimate pair_rhs;
  bool identity_holds(double z = 3.0) const { return std::abs(difference) <= z * combined_se; }
};

// Workers: 0 runs in the calling thread. Replicate r uses substream(seed, {tag, r}).
ModdistReport moddist_identity_stats(const OffspringModel& model, int n, double a_n, std::int64_t replicates,
                                     std::uint64_t seed, int workers = 0);

// Exact expectations for a single edge with clock mean a_n: both sides equal a_n^2.
struct SingleEdgeModdist {
  double lhs = 0.0;
  double rhs = 0.0;
};
SingleEdgeModdist single_edge_moddist(double a_n);

struct TailMassReport {
  int n = 0;
  double a_n = 0.0;
  std::int64_t replicates = 0;
  std::vector<Estimate> levels;  // levels[l] estimates E int_{2^l}^inf mu_{n,xi}(t) dt
};

TailMassReport tail_mass_integral(const OffspringModel& model, int n, double a_n, int max_level,
                                  std::int64_t replicates, std::uint64_t seed, int workers = 0);

}  // namespace cuttree
