#include "cuttree/modified_distance.hpp"

#include <algorithm>
#include <cmath>

#include "cuttree/cut_tree.hpp"
#include "cuttree/errors.hpp"
#include "cuttree/gw_sampler.hpp"
#include "cuttree/parallel.hpp"

namespace cuttree {

namespace {

constexpr std::uint64_t kModdistTag = 0x6d6f64;
constexpr std::uint64_t kTailTag = 0x7461696c;

}  // namespace

double tail_integral(const MassTrajectory& mu, double from) {
  double acc = 0.0;
  const auto& bp = mu.breakpoints;
  for (std::size_t k = 0; k + 1 < bp.size(); ++k) {
    const double lo = std::max(bp[k].first, from);
    const double hi = bp[k + 1].first;
    if (hi > lo) acc += (hi - lo) * bp[k].second;
  }
  return acc / mu.n;
}

double delta_prime_root(const MassTrajectory& mu) { return tail_integral(mu, 0.0); }

double delta_prime_pair(const MassTrajectory& mu_i, const MassTrajectory& mu_j, double t_sep) {
  return tail_integral(mu_i, t_sep) + tail_integral(mu_j, t_sep);
}

double delta_prime(const ComponentTrajectories& traj, std::span<const int> tracked,
                   std::span<const std::pair<int, int>> pairs, int i, int j) {
  auto find_edge = [&](int e) -> const MassTrajectory& {
    const auto it = std::find(tracked.begin(), tracked.end(), e);
    if (it == tracked.end()) throw InputError("edge has no tracked trajectory");
    return traj.trajectories[static_cast<std::size_t>(it - tracked.begin())];
  };
  if (j == 0) return delta_prime_root(find_edge(i));
  if (i == 0) return delta_prime_root(find_edge(j));
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (pairs[p] == std::pair{i, j} || pairs[p] == std::pair{j, i}) {
      return delta_prime_pair(find_edge(i), find_edge(j), traj.separation_times[p]);
    }
  }
  throw InputError("pair has no tracked separation time");
}

Estimate estimate(std::span<const double> xs) {
  Estimate e;
  e.count = static_cast<std::int64_t>(xs.size());
  if (xs.empty()) return e;
  double sum = 0.0;
  for (double x : xs) sum += x;
  e.mean = sum / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - e.mean) * (x - e.mean);
    e.se = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  }
  return e;
}

namespace {

struct ModdistSample {
  double lhs = 0.0;
  double rhs = 0.0;
  bool has_pair = false;
  double pair_lhs = 0.0;
  double pair_rhs = 0.0;
};

}  // namespace

ModdistReport moddist_identity_stats(const OffspringModel& model, int n, double a_n, std::int64_t replicates,
                                     std::uint64_t seed, int workers) {
  if (replicates < 100) throw InputError("moddist statistics need at least 100 replicates");
  if (!(a_n > 0.0)) throw InputError("a_n must be positive");
  const ConditionedSampler sampler(model, n);
  const double scale = a_n / n;

  auto samples = run_replicates<ModdistSample>(replicates, workers, [&](std::int64_t r) {
    Rng rng = substream(seed, {kModdistTag, static_cast<std::uint64_t>(r)});
    const PlaneTree tree = sampler.draw(rng);
    const int xi = static_cast<int>(uniform_int(rng, 1, n));
    const int zeta = static_cast<int>(uniform_int(rng, 1, n));
    const FragmentationTrace trace = run_vertex_continuous(tree, a_n, rng);

    std::vector<int> tracked{xi};
    std::vector<std::pair<int, int>> pairs;
    if (zeta != xi) {
      tracked.push_back(zeta);
      pairs.emplace_back(xi, zeta);
    }
    const auto traj = component_trajectories(tree, trace, tracked, pairs);
    ModdistSample s;
    const double dp = delta_prime_root(traj.trajectories[0]);
    const double x = scale * static_cast<double>(traj.cut_counts[0]) - dp;
    s.lhs = x * x;
    s.rhs = scale * dp;
    if (!pairs.empty()) {
      const CutTree ct = build_cut_tree(tree, trace);
      const double dpp = delta_prime_pair(traj.trajectories[0], traj.trajectories[1], traj.separation_times[0]);
      const double y = scale * cut_distance(ct, xi, zeta) - dpp;
      s.has_pair = true;
      s.pair_lhs = y * y;
      s.pair_rhs = scale * (dp + delta_prime_root(traj.trajectories[1]));
    }
    return s;
  });

  std::vector<double> lhs, rhs, diff, pl, pr;
  lhs.reserve(samples.size());
  rhs.reserve(samples.size());
  diff.reserve(samples.size());
  for (const auto& s : samples) {
    lhs.push_back(s.lhs);
    rhs.push_back(s.rhs);
    diff.push_back(s.lhs - s.rhs);
    if (s.has_pair) {
      pl.push_back(s.pair_lhs);
      pr.push_back(s.pair_rhs);
    }
  }
  ModdistReport rep;
  rep.n = n;
  rep.a_n = a_n;
  rep.replicates = replicates;
  rep.lhs = estimate(lhs);
  rep.rhs = estimate(rhs);
  rep.difference = rep.lhs.mean - rep.rhs.mean;
  rep.combined_se = std::hypot(rep.lhs.se, rep.rhs.se);
  rep.paired_se = estimate(diff).se;
  rep.pair_lhs = estimate(pl);
  rep.pair_rhs = estimate(pr);
  return rep;
}

SingleEdgeModdist single_edge_moddist(double a_n) {
  // delta = 1 and delta' = T with E T = a_n, E T^2 = 2 a_n^2.
  const double mean = a_n;
  const double second = 2.0 * a_n * a_n;
  return {a_n * a_n - 2.0 * a_n * mean + second, a_n * mean};
}

TailMassReport tail_mass_integral(const OffspringModel& model, int n, double a_n, int max_level,
                                  std::int64_t replicates, std::uint64_t seed, int workers) {
  if (max_level < 0) throw InputError("level exponent must be non-negative");
  if (replicates < 2) throw InputError("tail mass estimate needs at least 2 replicates");
  if (!(a_n > 0.0)) throw InputError("a_n must be positive");
  const ConditionedSampler sampler(model, n);

  auto samples = run_replicates<std::vector<double>>(replicates, workers, [&](std::int64_t r) {
    Rng rng = substream(seed, {kTailTag, static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(r)});
    const PlaneTree tree = sampler.draw(rng);
    const int xi = static_cast<int>(uniform_int(rng, 1, n));
    const FragmentationTrace trace = run_vertex_continuous(tree, a_n, rng);
    const std::vector<int> tracked{xi};
    const auto traj = component_trajectories(tree, trace, tracked);
    std::vector<double> tails(max_level + 1);
    for (int l = 0; l <= max_level; ++l) tails[l] = tail_integral(traj.trajectories[0], std::ldexp(1.0, l));
    return tails;
  });

  TailMassReport rep;
  rep.n = n;
  rep.a_n = a_n;
  rep.replicates = replicates;
  std::vector<double> column(samples.size());
  for (int l = 0; l <= max_level; ++l) {
    for (std::size_t r = 0; r < samples.size(); ++r) column[r] = samples[r][l];
    rep.levels.push_back(estimate(column));
  }
  return rep;
}

}  // namespace cuttree
