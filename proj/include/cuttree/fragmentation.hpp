#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "cuttree/plane_tree.hpp"
#include "cuttree/rng.hpp"

namespace cuttree {

enum class FragmentationMode { vertex, edge };

// Ordered log of one fragmentation run. Event r marks edge marked_edge[r]
// (and its lower endpoint marked_vertex[r]) at times[r] and deletes the edges
// listed in deleted_edges(r). Neutral events delete nothing.
class FragmentationTrace {
 public:
  FragmentationMode mode = FragmentationMode::vertex;
  bool continuous = false;
  double a_n = 0.0;  // clock rate parameter when continuous; each edge rings at rate 1/a_n

  std::vector<double> times;
  std::vector<int> marked_edge;
  std::vector<int> marked_vertex;
  std::vector<int> offsets{0};
  std::vector<int> deleted;
  std::vector<int> removal_event;  // removal_event[i] for edge i in 1..n; entry 0 unused

  int n_edges() const { return static_cast<int>(removal_event.size()) - 1; }
  int event_count() const { return static_cast<int>(times.size()); }
  std::span<const int> deleted_edges(int r) const {
    return {deleted.data() + offsets[r], static_cast<std::size_t>(offsets[r + 1] - offsets[r])};
  }
  bool neutral(int r) const { return offsets[r + 1] == offsets[r]; }
  int effective_steps() const;

  // Debug dump: event_index,time,marked_vertex,deleted_edges,neutral
  void write_csv(std::ostream& os) const;
};

// Uniform random permutation of the edge indices 1..n.
std::vector<int> random_edge_order(int n, Rng& rng);

// Vertex fragmentation driven by an explicit edge order (a permutation of
// 1..n): at step r the edge order[r] rings; if it survives, its lower endpoint
// is marked and all its surviving child edges are deleted. Time = step index.
FragmentationTrace run_vertex_discrete(const PlaneTree& tree, std::span<const int> order);
FragmentationTrace run_vertex_discrete(const PlaneTree& tree, Rng& rng);

// Each edge carries an Exp(rate 1/a_n) clock; ties broken by edge index.
FragmentationTrace run_vertex_continuous(const PlaneTree& tree, double a_n, Rng& rng);

// Edge fragmentation: each event deletes the marked edge only.
FragmentationTrace run_edge_discrete(const PlaneTree& tree, std::span<const int> order);
FragmentationTrace run_edge_discrete(const PlaneTree& tree, Rng& rng);
FragmentationTrace run_edge_continuous(const PlaneTree& tree, double a_n, Rng& rng);

struct CoupledTraces {
  std::vector<int> order;
  FragmentationTrace vertex;
  FragmentationTrace edge;
};

// Both modes driven by one shared uniform permutation.
CoupledTraces run_coupled_discrete(const PlaneTree& tree, Rng& rng);
CoupledTraces run_coupled_discrete(const PlaneTree& tree, std::span<const int> order);

// Mass of the component containing one edge: right-continuous step function.
// breakpoints hold (time, edge count of the component); mass = count / n.
struct MassTrajectory {
  int edge = 0;
  int n = 0;
  std::vector<std::pair<double, int>> breakpoints;
  double removal_time = 0.0;

  double mass_at(double t) const;
  double mass(std::size_t k) const { return static_cast<double>(breakpoints[k].second) / n; }
};

struct ComponentTrajectories {
  std::vector<MassTrajectory> trajectories;  // one per tracked edge
  std::vector<long> cut_counts;              // N_i(infinity) per tracked edge
  std::vector<double> separation_times;      // t_n(i,j) per pair
  std::vector<int> separation_events;        // event index realizing t_n(i,j)
};

// Exact trajectories by replaying deletions backward as unions.
ComponentTrajectories component_trajectories(const PlaneTree& tree, const FragmentationTrace& trace,
                                             std::span<const int> tracked,
                                             std::span<const std::pair<int, int>> pairs = {});

// Naive forward recomputation with explicit component labels, O(n) per event.
ComponentTrajectories component_trajectories_naive(const PlaneTree& tree, const FragmentationTrace& trace,
                                                   std::span<const int> tracked,
                                                   std::span<const std::pair<int, int>> pairs = {});

// Number of (edge e, step k) pairs where the vertex-mode component of e is
// not contained in its edge-mode component.
long coupling_inclusion_violations(const PlaneTree& tree, const CoupledTraces& coupled);

}  // namespace cuttree
