#pragma once

#include <numeric>
#include <utility>
#include <vector>

namespace cuttree {

// Union by size with path compression.
class UnionFind {
 public:
  explicit UnionFind(int n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

  int find(int x) {
    int root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) {
      const int next = parent_[x];
      parent_[x] = root;
      x = next;
    }
    return root;
  }

  // Returns the representative of the merged set.
  int unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return a;
  }

  int size_of(int x) { return size_[find(x)]; }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

}  // namespace cuttree
