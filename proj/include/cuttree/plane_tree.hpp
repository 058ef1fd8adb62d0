#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cuttree {

// Rooted plane tree stored as flat arrays in depth-first order. Vertex j is
// v_j (v_0 is the root); edge i (1 <= i <= n) is the edge between v_i and its
// parent, so e_i^+ = v_i and e_i^- = parent(i).
class PlaneTree {
 public:
  // The single-vertex tree.
  PlaneTree();

  // Builds the tree whose depth-first degree sequence is `degrees`. Throws
  // InputError if the sequence is not the degree sequence of a plane tree.
  static PlaneTree from_degrees(std::vector<int> degrees);

  int n_edges() const { return static_cast<int>(degree_.size()) - 1; }
  int n_vertices() const { return static_cast<int>(degree_.size()); }

  int degree(int v) const { return degree_[v]; }
  int parent(int v) const { return parent_[v]; }
  int height(int v) const { return height_[v]; }
  // Number of strict descendants; the subtree of v is [v, v + descendants(v)].
  int descendants(int v) const { return desc_[v]; }
  int first_child(int v) const { return degree_[v] > 0 ? v + 1 : -1; }
  int next_sibling(int v) const { return next_sibling_[v]; }
  std::vector<int> children(int v) const;

  std::span<const int> degrees() const { return degree_; }
  std::span<const int> parents() const { return parent_; }
  std::span<const int> heights() const { return height_; }

  // Lowest common ancestor and graph distance.
  int lca(int u, int v) const;
  int distance(int u, int v) const { return height_[u] + height_[v] - 2 * height_[lca(u, v)]; }

  friend bool operator==(const PlaneTree& a, const PlaneTree& b) { return a.degree_ == b.degree_; }

 private:
  std::vector<int> degree_;
  std::vector<int> parent_;
  std::vector<int> height_;
  std::vector<int> desc_;
  std::vector<int> next_sibling_;
};

struct TreeCodings {
  std::vector<long> lukasiewicz;       // W_0 .. W_{n+1}
  std::vector<long> height;            // H_0 .. H_{n+1}
  std::vector<long> contour;           // C_0 .. C_{2n+2}, empty unless requested
  std::vector<long> descendant_counts; // D_0 .. D_n
};

// Inverse of the Lukasiewicz coding. Throws InputError on a malformed path.
PlaneTree decode_lukasiewicz(std::span<const long> walk);

TreeCodings encode_codings(const PlaneTree& tree, bool with_contour = false);

// Contour function at integer times 0 .. 2n+2 (zero on [2n, 2n+2]).
std::vector<long> contour_function(const PlaneTree& tree);

// Children order reversed at every vertex.
PlaneTree symmetrized(const PlaneTree& tree);

// Index of v_j in the symmetrized tree: n - j + H_j - D_j.
int symmetric_index(const PlaneTree& tree, int j);

// The pointed decomposition of (T, v) for v != root.
struct PointedDecomposition {
  PlaneTree subtree;   // T_v: v and its descendants
  PlaneTree pruned;    // T^v: strict descendants of v removed
  PlaneTree rerooted;  // hat T^{hat v}
  // Host vertex u -> index in `rerooted` (-1 for v and its descendants).
  std::vector<int> rerooted_index;
  int hat_vertex = -1;  // index of the new leaf hat v in `rerooted`
};

PointedDecomposition point_decompose(const PlaneTree& tree, int v);

// Reduced tree spanned by the root and a set of marked vertices, with chains
// of single-child vertices contracted into weighted edges.
struct Shape {
  PlaneTree tree;
  // edge_lengths[s] = host distance between shape vertex s and its parent
  // (entry 0 unused).
  std::vector<int> edge_lengths;
  std::vector<int> host_vertex;
};

// Retained vertices: the root, every mark, and every branch point of the
// spanned subtree.
Shape reduced_shape(const PlaneTree& tree, std::span<const int> marks);

// Sum of (deg v - 1) over strict ancestors v != root of v_j.
long ancestral_degree_sum(const PlaneTree& tree, int j);

// Canonical one-line text form: the Lukasiewicz increments deg(v_j) - 1,
// comma separated.
std::string to_text(const PlaneTree& tree);
PlaneTree from_text(std::string_view line);

}  // namespace cuttree
