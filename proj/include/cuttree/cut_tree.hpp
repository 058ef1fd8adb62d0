#pragma once

#include <vector>

#include "cuttree/fragmentation.hpp"
#include "cuttree/plane_tree.hpp"

namespace cuttree {

// Genealogy of the blocks produced by a fragmentation. Block b is created by
// event block_event[b]; its parent block has a larger id and the root is the
// last block. Leaf i (edge i) hangs below leaf_parent[i].
class CutTree {
 public:
  int n_leaves() const { return static_cast<int>(leaf_parent_.size()) - 1; }
  int n_blocks() const { return static_cast<int>(block_parent_.size()); }
  int root_block() const { return n_blocks() - 1; }

  int block_parent(int b) const { return block_parent_[b]; }
  int block_depth(int b) const { return block_depth_[b]; }
  int block_event(int b) const { return block_event_[b]; }
  int leaf_parent(int i) const { return leaf_parent_[i]; }
  // delta(0, i).
  int leaf_depth(int i) const { return block_depth_[leaf_parent_[i]] + 1; }

  // Deepest common ancestor of two blocks.
  int mrca(int a, int b) const;

  friend CutTree build_cut_tree(const PlaneTree& tree, const FragmentationTrace& trace);

 private:
  std::vector<int> block_parent_;  // -1 at the root
  std::vector<int> block_depth_;
  std::vector<int> block_event_;
  std::vector<int> leaf_parent_;   // entry 0 unused
};

// Throws InputError when the trace is incomplete or belongs to another tree.
// Works for both modes; the edge-mode tree is the edge cut-tree.
CutTree build_cut_tree(const PlaneTree& tree, const FragmentationTrace& trace);

// Graph distance between i and j in {0, 1..n}; 0 is the root block.
int cut_distance(const CutTree& ct, int i, int j);

// Same quantity from a forward replay with explicit component labels.
int naive_cut_distance_oracle(const PlaneTree& tree, const FragmentationTrace& trace, int i, int j);

}  // namespace cuttree
