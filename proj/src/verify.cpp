#include "cuttree/verify.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "cuttree/cut_tree.hpp"
#include "cuttree/errors.hpp"
#include "cuttree/fragmentation.hpp"
#include "cuttree/gw_sampler.hpp"
#include "cuttree/statistics.hpp"

namespace cuttree {

namespace {

constexpr std::uint64_t kOracleTag = 0x6f72;
constexpr std::uint64_t kCouplingTag = 0x6370;
constexpr std::uint64_t kSymTag = 0x7379;

// Alternates the two reference models; samplers are cached per n.
class TreeSource {
 public:
  explicit TreeSource(int max_n)
      : models_{OffspringModel::geometric_critical(), OffspringModel::power_tail_critical(1.5)} {
    for (auto& per_model : samplers_) per_model.resize(max_n + 1);
  }

  PlaneTree draw(int which, int n, Rng& rng) {
    auto& slot = samplers_[which][n];
    if (!slot) slot = std::make_unique<ConditionedSampler>(models_[which], n);
    return slot->draw(rng);
  }

 private:
  std::vector<OffspringModel> models_;
  std::vector<std::unique_ptr<ConditionedSampler>> samplers_[2];
};

bool same_trajectories(const ComponentTrajectories& a, const ComponentTrajectories& b) {
  if (a.cut_counts != b.cut_counts || a.separation_events != b.separation_events ||
      a.separation_times != b.separation_times || a.trajectories.size() != b.trajectories.size()) {
    return false;
  }
  for (std::size_t q = 0; q < a.trajectories.size(); ++q) {
    if (a.trajectories[q].breakpoints != b.trajectories[q].breakpoints ||
        a.trajectories[q].removal_time != b.trajectories[q].removal_time) {
      return false;
    }
  }
  return true;
}

CheckResult check_oracle(const VerifyOptions& o) {
  TreeSource source(o.oracle_max_n);
  long pairs = 0;
  long mismatches = 0;
  long trajectory_mismatches = 0;
  for (int t = 0; t < o.oracle_trees; ++t) {
    Rng rng = substream(o.seed, {kOracleTag, static_cast<std::uint64_t>(t)});
    const int n = static_cast<int>(uniform_int(rng, 1, o.oracle_max_n));
    const PlaneTree tree = source.draw(t % 2, n, rng);
    const FragmentationTrace trace =
        (t / 2) % 2 == 0 ? run_vertex_discrete(tree, rng) : run_vertex_continuous(tree, std::sqrt(n), rng);
    const CutTree ct = build_cut_tree(tree, trace);

    std::vector<int> points{0};
    for (int p = 0; p < o.oracle_points; ++p) points.push_back(static_cast<int>(uniform_int(rng, 1, n)));
    for (std::size_t a = 0; a < points.size(); ++a) {
      for (std::size_t b = a + 1; b < points.size(); ++b) {
        ++pairs;
        if (cut_distance(ct, points[a], points[b]) != naive_cut_distance_oracle(tree, trace, points[a], points[b])) {
          ++mismatches;
        }
      }
    }

    std::vector<int> tracked(points.begin() + 1, points.end());
    std::sort(tracked.begin(), tracked.end());
    tracked.erase(std::unique(tracked.begin(), tracked.end()), tracked.end());
    std::vector<std::pair<int, int>> tracked_pairs;
    for (std::size_t a = 0; a < tracked.size(); ++a) {
      for (std::size_t b = a + 1; b < tracked.size(); ++b) tracked_pairs.emplace_back(tracked[a], tracked[b]);
    }
    const auto fast = component_trajectories(tree, trace, tracked, tracked_pairs);
    const auto slow = component_trajectories_naive(tree, trace, tracked, tracked_pairs);
    bool ok = same_trajectories(fast, slow);
    for (std::size_t q = 0; q < tracked.size(); ++q) ok = ok && fast.cut_counts[q] == ct.leaf_depth(tracked[q]);
    if (!ok) ++trajectory_mismatches;
  }
  CheckResult r;
  r.name = "oracle";
  r.metric = static_cast<double>(mismatches + trajectory_mismatches);
  r.passed = mismatches == 0 && trajectory_mismatches == 0;
  std::ostringstream d;
  d << o.oracle_trees << " trees, " << pairs << " pairs, " << mismatches << " distance mismatches, "
    << trajectory_mismatches << " trajectory mismatches";
  r.detail = d.str();
  return r;
}

CheckResult check_coupling(const VerifyOptions& o) {
  TreeSource source(o.coupling_max_n);
  long violations = 0;
  long failing_runs = 0;
  for (int t = 0; t < o.coupling_runs; ++t) {
    Rng rng = substream(o.seed, {kCouplingTag, static_cast<std::uint64_t>(t)});
    const int n = static_cast<int>(uniform_int(rng, 1, o.coupling_max_n));
    const PlaneTree tree = source.draw(t % 2, n, rng);
    const long v = coupling_inclusion_violations(tree, run_coupled_discrete(tree, rng));
    violations += v;
    failing_runs += v > 0 ? 1 : 0;
  }
  CheckResult r;
  r.name = "coupling";
  r.metric = static_cast<double>(violations);
  r.passed = failing_runs == 0;
  std::ostringstream d;
  d << o.coupling_runs << " runs, " << (o.coupling_runs - failing_runs) << " with inclusion at every step";
  r.detail = d.str();
  return r;
}

// Position of every vertex in the depth-first order that visits children
// right to left.
std::vector<int> mirrored_positions(const PlaneTree& tree) {
  std::vector<int> pos(tree.n_vertices());
  std::vector<int> stack{0};
  int next = 0;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    pos[v] = next++;
    for (int c = tree.first_child(v); c != -1; c = tree.next_sibling(c)) stack.push_back(c);
  }
  return pos;
}

CheckResult check_symmetrization(const VerifyOptions& o) {
  TreeSource source(o.symmetrization_max_n);
  long mismatches = 0;
  long vertices = 0;
  for (int which = 0; which < 2; ++which) {
    for (int t = 0; t < o.symmetrization_trees; ++t) {
      Rng rng = substream(o.seed, {kSymTag, static_cast<std::uint64_t>(which), static_cast<std::uint64_t>(t)});
      const int n = static_cast<int>(uniform_int(rng, 1, o.symmetrization_max_n));
      const PlaneTree tree = source.draw(which, n, rng);
      const PlaneTree mirror = symmetrized(tree);
      const auto pos = mirrored_positions(tree);
      for (int j = 0; j <= n; ++j) {
        ++vertices;
        const int tj = symmetric_index(tree, j);
        if (tj != pos[j] || mirror.degree(tj) != tree.degree(j)) ++mismatches;
      }
    }
  }
  CheckResult r;
  r.name = "symmetrization";
  r.metric = static_cast<double>(mismatches);
  r.passed = mismatches == 0;
  std::ostringstream d;
  d << vertices << " vertices, " << mismatches << " mismatches";
  r.detail = d.str();
  return r;
}

CheckResult check_emn(const VerifyOptions& o) {
  const auto model = OffspringModel::geometric_critical();
  const std::vector<double> ts{0.5, 1.0, 2.0};
  double worst = 0.0;
  for (int m = 1; m <= o.emn_max_m; ++m) {
    for (const auto& p : check_emn_formula(model, m, o.emn_max_m, ts, 1.0)) worst = std::max(worst, p.difference);
  }
  CheckResult r;
  r.name = "emn";
  r.metric = worst;
  r.passed = worst < 1e-10;
  std::ostringstream d;
  d << "m <= " << o.emn_max_m << ", t in {0.5, 1, 2}, max |lhs - rhs| = " << worst;
  r.detail = d.str();
  return r;
}

CheckResult check_cyclic(const VerifyOptions& o) {
  const double geo = check_cyclic_lemma(OffspringModel::geometric_critical(), o.cyclic_k_max, o.cyclic_n_max);
  const double pt = check_cyclic_lemma(OffspringModel::power_tail_critical(1.5), o.cyclic_k_max, o.cyclic_n_max);
  CheckResult r;
  r.name = "cyclic";
  r.metric = std::max(geo, pt);
  r.passed = r.metric < 1e-12;
  std::ostringstream d;
  d << "k <= " << o.cyclic_k_max << ", n <= " << o.cyclic_n_max << ", geometric " << geo << ", power_tail " << pt;
  r.detail = d.str();
  return r;
}

CheckResult check_gwstar(const VerifyOptions& o) {
  const auto geo = check_gwstar_transform(OffspringModel::geometric_critical(), o.gwstar_max_vertices);
  const auto bin = check_gwstar_transform(OffspringModel::from_pmf({0.5, 0.0, 0.5}, "binary"), o.gwstar_max_vertices);
  CheckResult r;
  r.name = "gwstar";
  r.metric = std::max(geo.total_variation, bin.total_variation);
  const double product = std::max(geo.product_form_error, bin.product_form_error);
  r.passed = r.metric < 1e-12 && product < 1e-12;
  std::ostringstream d;
  d << "max_vertices " << o.gwstar_max_vertices << ", TV " << r.metric << ", product-form rel. error " << product
    << ", pointed trees " << geo.pointed_trees + bin.pointed_trees;
  r.detail = d.str();
  return r;
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names{"emn", "cyclic", "gwstar", "coupling", "oracle", "symmetrization"};
  return names;
}

CheckResult run_check(const std::string& name, const VerifyOptions& options) {
  if (name == "oracle") return check_oracle(options);
  if (name == "coupling") return check_coupling(options);
  if (name == "symmetrization") return check_symmetrization(options);
  if (name == "emn") return check_emn(options);
  if (name == "cyclic") return check_cyclic(options);
  if (name == "gwstar") return check_gwstar(options);
  throw InputError("unknown check: " + name);
}

}  // namespace cuttree
