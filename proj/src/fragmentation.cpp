#include "cuttree/fragmentation.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "cuttree/errors.hpp"
#include "cuttree/union_find.hpp"

namespace cuttree {

int FragmentationTrace::effective_steps() const {
  int count = 0;
  for (int r = 0; r < event_count(); ++r) count += neutral(r) ? 0 : 1;
  return count;
}

void FragmentationTrace::write_csv(std::ostream& os) const {
  os << "event_index,time,marked_vertex,deleted_edges,neutral\n";
  for (int r = 0; r < event_count(); ++r) {
    os << r << ',' << times[r] << ',' << marked_vertex[r] << ',';
    const auto del = deleted_edges(r);
    for (std::size_t k = 0; k < del.size(); ++k) os << (k ? ";" : "") << del[k];
    os << ',' << (neutral(r) ? 1 : 0) << '\n';
  }
}

std::vector<int> random_edge_order(int n, Rng& rng) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 1);
  // Fisher-Yates with our own index draws keeps the stream platform independent.
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(uniform_int(rng, 0, i));
    std::swap(order[i], order[j]);
  }
  return order;
}

namespace {

void check_permutation(std::span<const int> order, int n) {
  if (static_cast<int>(order.size()) != n) throw InputError("edge order must list every edge exactly once");
  std::vector<char> seen(n + 1, 0);
  for (int e : order) {
    if (e < 1 || e > n || seen[e]) throw InputError("edge order is not a permutation of 1..n");
    seen[e] = 1;
  }
}

FragmentationTrace run_ordered(const PlaneTree& tree, std::span<const int> order, std::span<const double> times,
                               FragmentationMode mode) {
  const int n = tree.n_edges();
  FragmentationTrace trace;
  trace.mode = mode;
  trace.times.assign(times.begin(), times.end());
  trace.marked_edge.assign(order.begin(), order.end());
  trace.marked_vertex.resize(n);
  trace.offsets.reserve(n + 1);
  trace.deleted.reserve(n);
  trace.removal_event.assign(n + 1, -1);
  for (int r = 0; r < n; ++r) {
    const int e = order[r];
    const int v = tree.parent(e);
    trace.marked_vertex[r] = v;
    if (trace.removal_event[e] == -1) {
      if (mode == FragmentationMode::vertex) {
        for (int c = tree.first_child(v); c != -1; c = tree.next_sibling(c)) {
          trace.deleted.push_back(c);
          trace.removal_event[c] = r;
        }
      } else {
        trace.deleted.push_back(e);
        trace.removal_event[e] = r;
      }
    }
    trace.offsets.push_back(static_cast<int>(trace.deleted.size()));
  }
  return trace;
}

std::vector<double> step_times(int n) {
  std::vector<double> t(n);
  std::iota(t.begin(), t.end(), 1.0);
  return t;
}

// Exponential clocks of mean a_n, sorted; ties broken by edge index.
std::pair<std::vector<int>, std::vector<double>> clock_order(int n, double a_n, Rng& rng) {
  if (!(a_n > 0.0)) throw InputError("clock parameter a_n must be positive");
  std::vector<std::pair<double, int>> clocks(n);
  for (int i = 1; i <= n; ++i) clocks[i - 1] = {exponential(rng, a_n), i};
  std::sort(clocks.begin(), clocks.end());
  std::vector<int> order(n);
  std::vector<double> times(n);
  for (int r = 0; r < n; ++r) {
    times[r] = clocks[r].first;
    order[r] = clocks[r].second;
  }
  return {std::move(order), std::move(times)};
}

FragmentationTrace run_continuous(const PlaneTree& tree, double a_n, Rng& rng, FragmentationMode mode) {
  auto [order, times] = clock_order(tree.n_edges(), a_n, rng);
  auto trace = run_ordered(tree, order, times, mode);
  trace.continuous = true;
  trace.a_n = a_n;
  return trace;
}

}  // namespace

FragmentationTrace run_vertex_discrete(const PlaneTree& tree, std::span<const int> order) {
  check_permutation(order, tree.n_edges());
  return run_ordered(tree, order, step_times(tree.n_edges()), FragmentationMode::vertex);
}

FragmentationTrace run_vertex_discrete(const PlaneTree& tree, Rng& rng) {
  const auto order = random_edge_order(tree.n_edges(), rng);
  return run_ordered(tree, order, step_times(tree.n_edges()), FragmentationMode::vertex);
}

FragmentationTrace run_vertex_continuous(const PlaneTree& tree, double a_n, Rng& rng) {
  return run_continuous(tree, a_n, rng, FragmentationMode::vertex);
}

FragmentationTrace run_edge_discrete(const PlaneTree& tree, std::span<const int> order) {
  check_permutation(order, tree.n_edges());
  return run_ordered(tree, order, step_times(tree.n_edges()), FragmentationMode::edge);
}

FragmentationTrace run_edge_discrete(const PlaneTree& tree, Rng& rng) {
  const auto order = random_edge_order(tree.n_edges(), rng);
  return run_ordered(tree, order, step_times(tree.n_edges()), FragmentationMode::edge);
}

FragmentationTrace run_edge_continuous(const PlaneTree& tree, double a_n, Rng& rng) {
  return run_continuous(tree, a_n, rng, FragmentationMode::edge);
}

CoupledTraces run_coupled_discrete(const PlaneTree& tree, std::span<const int> order) {
  check_permutation(order, tree.n_edges());
  const auto times = step_times(tree.n_edges());
  return {std::vector<int>(order.begin(), order.end()), run_ordered(tree, order, times, FragmentationMode::vertex),
          run_ordered(tree, order, times, FragmentationMode::edge)};
}

CoupledTraces run_coupled_discrete(const PlaneTree& tree, Rng& rng) {
  const auto order = random_edge_order(tree.n_edges(), rng);
  return run_coupled_discrete(tree, order);
}

double MassTrajectory::mass_at(double t) const {
  // Last breakpoint with time <= t.
  auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), t,
                             [](double x, const std::pair<double, int>& b) { return x < b.first; });
  if (it == breakpoints.begin()) return 1.0;
  return static_cast<double>(std::prev(it)->second) / n;
}

namespace {

void check_trace(const PlaneTree& tree, const FragmentationTrace& trace) {
  if (trace.n_edges() != tree.n_edges()) throw InputError("trace does not belong to this tree");
  for (int i = 1; i <= tree.n_edges(); ++i) {
    if (trace.removal_event[i] < 0) throw InputError("trace is incomplete: some edge is never deleted");
  }
}

void check_tracked(const PlaneTree& tree, std::span<const int> tracked, std::span<const std::pair<int, int>> pairs) {
  const int n = tree.n_edges();
  for (int i : tracked) {
    if (i < 1 || i > n) throw InputError("tracked edge not in tree");
  }
  for (auto [i, j] : pairs) {
    if (i < 1 || i > n || j < 1 || j > n) throw InputError("tracked pair not in tree");
  }
}

double state_start_time(const FragmentationTrace& trace, int r) { return r == 0 ? 0.0 : trace.times[r - 1]; }

// Builds forward breakpoints from per-state edge counts counts[r] (r = 0..removal).
MassTrajectory make_trajectory(const FragmentationTrace& trace, int edge, int n, const std::vector<int>& counts) {
  MassTrajectory traj;
  traj.edge = edge;
  traj.n = n;
  const int removal = trace.removal_event[edge];
  for (int r = 0; r <= removal; ++r) {
    if (traj.breakpoints.empty() || traj.breakpoints.back().second != counts[r]) {
      traj.breakpoints.emplace_back(state_start_time(trace, r), counts[r]);
    }
  }
  traj.removal_time = trace.times[removal];
  traj.breakpoints.emplace_back(traj.removal_time, 0);
  return traj;
}

}  // namespace

ComponentTrajectories component_trajectories(const PlaneTree& tree, const FragmentationTrace& trace,
                                             std::span<const int> tracked,
                                             std::span<const std::pair<int, int>> pairs) {
  check_trace(tree, trace);
  check_tracked(tree, tracked, pairs);
  const int n = tree.n_edges();
  const int events = trace.event_count();

  // State r = forest after events 0..r-1. Walk r from `events` down to 0,
  // re-inserting the edges deleted by event r before inspecting state r.
  UnionFind uf(n + 1);
  std::vector<std::vector<int>> counts(tracked.size());
  for (std::size_t q = 0; q < tracked.size(); ++q) counts[q].assign(trace.removal_event[tracked[q]] + 1, 0);
  ComponentTrajectories out;
  out.cut_counts.assign(tracked.size(), 0);
  out.separation_events.assign(pairs.size(), -1);
  out.separation_times.assign(pairs.size(), 0.0);

  for (int r = events - 1; r >= 0; --r) {
    for (int c : trace.deleted_edges(r)) uf.unite(c, tree.parent(c));
    const bool cut = !trace.neutral(r);
    const int marked_root = cut ? uf.find(trace.marked_vertex[r]) : -1;
    for (std::size_t q = 0; q < tracked.size(); ++q) {
      const int i = tracked[q];
      if (trace.removal_event[i] < r) continue;
      const int root = uf.find(i);
      counts[q][r] = uf.size_of(root) - 1;
      if (cut && root == marked_root) ++out.cut_counts[q];
    }
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      if (out.separation_events[p] != -1) continue;
      const auto [i, j] = pairs[p];
      if (trace.removal_event[i] >= r && trace.removal_event[j] >= r && uf.find(i) == uf.find(j)) {
        out.separation_events[p] = r;
        out.separation_times[p] = trace.times[r];
      }
    }
  }
  out.trajectories.reserve(tracked.size());
  for (std::size_t q = 0; q < tracked.size(); ++q) out.trajectories.push_back(make_trajectory(trace, tracked[q], n, counts[q]));
  return out;
}

namespace {

// Component label of every vertex for the forest of surviving edges; parents
// precede children in depth-first order, so one pass suffices.
void label_components(const PlaneTree& tree, const std::vector<char>& alive, std::vector<int>& label) {
  label[0] = 0;
  for (int v = 1; v <= tree.n_edges(); ++v) label[v] = alive[v] ? label[tree.parent(v)] : v;
}

}  // namespace

ComponentTrajectories component_trajectories_naive(const PlaneTree& tree, const FragmentationTrace& trace,
                                                   std::span<const int> tracked,
                                                   std::span<const std::pair<int, int>> pairs) {
  check_trace(tree, trace);
  check_tracked(tree, tracked, pairs);
  const int n = tree.n_edges();
  const int events = trace.event_count();
  std::vector<char> alive(n + 1, 1);
  std::vector<int> label(n + 1);
  std::vector<int> edges_in(n + 1);

  std::vector<std::vector<int>> counts(tracked.size());
  ComponentTrajectories out;
  out.cut_counts.assign(tracked.size(), 0);
  out.separation_events.assign(pairs.size(), -1);
  out.separation_times.assign(pairs.size(), 0.0);

  for (int r = 0; r <= events; ++r) {
    label_components(tree, alive, label);
    std::fill(edges_in.begin(), edges_in.end(), 0);
    for (int v = 1; v <= n; ++v) {
      if (alive[v]) ++edges_in[label[v]];
    }
    for (std::size_t q = 0; q < tracked.size(); ++q) {
      const int i = tracked[q];
      if (!alive[i]) continue;
      counts[q].push_back(edges_in[label[i]]);
      if (r < events && !trace.neutral(r) && label[trace.marked_vertex[r]] == label[i]) ++out.cut_counts[q];
    }
    if (r == events) break;
    for (int c : trace.deleted_edges(r)) alive[c] = 0;
    label_components(tree, alive, label);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      if (out.separation_events[p] != -1) continue;
      const auto [i, j] = pairs[p];
      if (!alive[i] || !alive[j] || label[i] != label[j]) {
        out.separation_events[p] = r;
        out.separation_times[p] = trace.times[r];
      }
    }
  }
  out.trajectories.reserve(tracked.size());
  for (std::size_t q = 0; q < tracked.size(); ++q) out.trajectories.push_back(make_trajectory(trace, tracked[q], n, counts[q]));
  return out;
}

long coupling_inclusion_violations(const PlaneTree& tree, const CoupledTraces& coupled) {
  const int n = tree.n_edges();
  std::vector<char> alive_v(n + 1, 1);
  std::vector<char> alive_e(n + 1, 1);
  std::vector<int> label_v(n + 1);
  std::vector<int> label_e(n + 1);
  std::vector<int> image(n + 1);
  long violations = 0;
  const int events = coupled.vertex.event_count();
  for (int k = 0; k <= events; ++k) {
    if (k > 0) {
      for (int c : coupled.vertex.deleted_edges(k - 1)) alive_v[c] = 0;
      for (int c : coupled.edge.deleted_edges(k - 1)) alive_e[c] = 0;
    }
    label_components(tree, alive_v, label_v);
    label_components(tree, alive_e, label_e);
    std::fill(image.begin(), image.end(), -1);
    for (int i = 1; i <= n; ++i) {
      if (!alive_v[i]) continue;  // empty vertex-mode component: trivially included
      if (!alive_e[i]) {
        ++violations;
        continue;
      }
      int& img = image[label_v[i]];
      if (img == -1) img = label_e[i];
      if (img != label_e[i]) ++violations;
    }
  }
  return violations;
}

}  // namespace cuttree
