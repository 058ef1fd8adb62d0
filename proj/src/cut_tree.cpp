#include "cuttree/cut_tree.hpp"

#include <utility>

#include "cuttree/errors.hpp"
#include "cuttree/union_find.hpp"

namespace cuttree {

int CutTree::mrca(int a, int b) const {
  while (a != b) {
    if (block_depth_[a] < block_depth_[b]) std::swap(a, b);
    a = block_parent_[a];
  }
  return a;
}

CutTree build_cut_tree(const PlaneTree& tree, const FragmentationTrace& trace) {
  const int n = tree.n_edges();
  if (trace.n_edges() != n) throw InputError("trace does not belong to this tree");
  for (int i = 1; i <= n; ++i) {
    if (trace.removal_event[i] < 0) throw InputError("trace is incomplete: some edge is never deleted");
  }

  CutTree ct;
  ct.leaf_parent_.assign(n + 1, -1);
  UnionFind uf(n + 1);
  std::vector<int> block_of(n + 1, -1);  // block of a union-find root; -1 for a lone vertex
  auto adopt = [&](int vertex, int block) {
    const int child = block_of[uf.find(vertex)];
    if (child != -1 && ct.block_parent_[child] == -1) ct.block_parent_[child] = block;
  };

  // Replaying events backward, each cut merges the components it had split
  // into the block it acted on.
  for (int r = trace.event_count() - 1; r >= 0; --r) {
    if (trace.neutral(r)) continue;
    const int block = ct.n_blocks();
    ct.block_parent_.push_back(-1);
    ct.block_event_.push_back(r);
    const int v = trace.marked_vertex[r];
    adopt(v, block);
    for (int c : trace.deleted_edges(r)) {
      adopt(c, block);
      ct.leaf_parent_[c] = block;
    }
    int root = uf.find(v);
    for (int c : trace.deleted_edges(r)) root = uf.unite(root, c);
    block_of[root] = block;
  }

  const int blocks = ct.n_blocks();
  ct.block_depth_.assign(blocks, 0);
  for (int b = blocks - 2; b >= 0; --b) ct.block_depth_[b] = ct.block_depth_[ct.block_parent_[b]] + 1;
  return ct;
}

int cut_distance(const CutTree& ct, int i, int j) {
  const int n = ct.n_leaves();
  if (i < 0 || i > n || j < 0 || j > n) throw InputError("cut-tree index out of range");
  if (i == j) return 0;
  if (i == 0) return ct.leaf_depth(j);
  if (j == 0) return ct.leaf_depth(i);
  const int m = ct.mrca(ct.leaf_parent(i), ct.leaf_parent(j));
  return ct.leaf_depth(i) + ct.leaf_depth(j) - 2 * ct.block_depth(m);
}

int naive_cut_distance_oracle(const PlaneTree& tree, const FragmentationTrace& trace, int i, int j) {
  const int n = tree.n_edges();
  if (i < 0 || i > n || j < 0 || j > n) throw InputError("cut-tree index out of range");
  if (i == j) return 0;

  std::vector<char> alive(n + 1, 1);
  std::vector<int> label(n + 1);
  auto relabel = [&] {
    label[0] = 0;
    for (int v = 1; v <= n; ++v) label[v] = alive[v] ? label[tree.parent(v)] : v;
  };
  // A cut hits edge e's component when e survives and the marked vertex
  // shares its label.
  auto hits = [&](int e, int marked) { return alive[e] && label[marked] == label[e]; };

  int cuts_i = 0;
  int cuts_j = 0;
  int shared = 0;  // cuts hitting the joint component that leave i and j together
  bool together = i != 0 && j != 0;
  relabel();
  for (int r = 0; r < trace.event_count(); ++r) {
    if (trace.neutral(r)) continue;
    const int marked = trace.marked_vertex[r];
    const bool hi = i != 0 && hits(i, marked);
    const bool hj = j != 0 && hits(j, marked);
    cuts_i += hi ? 1 : 0;
    cuts_j += hj ? 1 : 0;
    for (int c : trace.deleted_edges(r)) alive[c] = 0;
    relabel();
    if (together) {
      together = alive[i] && alive[j] && label[i] == label[j];
      if (together && hi) ++shared;
    }
  }
  return (cuts_i - shared) + (cuts_j - shared);
}

}  // namespace cuttree
