#include "cuttree/plane_tree.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "cuttree/errors.hpp"

namespace cuttree {

PlaneTree::PlaneTree() : degree_{0}, parent_{-1}, height_{0}, desc_{0}, next_sibling_{-1} {}

PlaneTree PlaneTree::from_degrees(std::vector<int> degrees) {
  if (degrees.empty()) throw InputError("degree sequence is empty");
  const auto size = static_cast<int>(degrees.size());
  long walk = 0;
  for (int j = 0; j < size; ++j) {
    if (degrees[j] < 0) throw InputError("negative degree in degree sequence");
    walk += degrees[j] - 1;
    if (j + 1 < size && walk < 0) throw InputError("degree sequence exits the excursion before its end");
  }
  if (walk != -1) throw InputError("degree sequence does not end its excursion at -1");

  PlaneTree t;
  t.degree_ = std::move(degrees);
  t.parent_.assign(size, -1);
  t.height_.assign(size, 0);
  t.desc_.assign(size, 0);
  t.next_sibling_.assign(size, -1);

  // Stack of vertices that still have unassigned child slots.
  std::vector<int> open;
  std::vector<int> remaining(t.degree_);
  if (t.degree_[0] > 0) open.push_back(0);
  for (int v = 1; v < size; ++v) {
    const int p = open.back();
    t.parent_[v] = p;
    t.height_[v] = t.height_[p] + 1;
    if (--remaining[p] == 0) open.pop_back();
    if (t.degree_[v] > 0) open.push_back(v);
  }
  for (int v = size - 1; v >= 1; --v) t.desc_[t.parent_[v]] += t.desc_[v] + 1;
  for (int v = 0; v < size; ++v) {
    int c = t.first_child(v);
    for (int k = 1; k < t.degree_[v]; ++k) {
      const int next = c + t.desc_[c] + 1;
      t.next_sibling_[c] = next;
      c = next;
    }
  }
  return t;
}

std::vector<int> PlaneTree::children(int v) const {
  std::vector<int> out;
  out.reserve(degree_[v]);
  for (int c = first_child(v); c != -1; c = next_sibling_[c]) out.push_back(c);
  return out;
}

int PlaneTree::lca(int u, int v) const {
  while (height_[u] > height_[v]) u = parent_[u];
  while (height_[v] > height_[u]) v = parent_[v];
  while (u != v) {
    u = parent_[u];
    v = parent_[v];
  }
  return u;
}

PlaneTree decode_lukasiewicz(std::span<const long> walk) {
  if (walk.size() < 2) throw InputError("Lukasiewicz path needs at least two points");
  if (walk.front() != 0) throw InputError("Lukasiewicz path must start at 0");
  if (walk.back() != -1) throw InputError("Lukasiewicz path must end at -1");
  std::vector<int> degrees(walk.size() - 1);
  for (std::size_t j = 0; j + 1 < walk.size(); ++j) {
    if (walk[j] < 0) throw InputError("Lukasiewicz path goes negative before its last step");
    const long step = walk[j + 1] - walk[j];
    if (step < -1) throw InputError("Lukasiewicz path has an increment below -1");
    degrees[j] = static_cast<int>(step + 1);
  }
  return PlaneTree::from_degrees(std::move(degrees));
}

std::vector<long> contour_function(const PlaneTree& tree) {
  const int n = tree.n_edges();
  std::vector<long> c;
  c.reserve(2 * n + 3);
  c.push_back(0);
  for (int j = 1; j <= n; ++j) {
    for (long h = tree.height(j - 1) - 1; h >= tree.height(j) - 1; --h) c.push_back(h);
    c.push_back(tree.height(j));
  }
  for (long h = tree.height(n) - 1; h >= 0; --h) c.push_back(h);
  c.push_back(0);
  c.push_back(0);
  return c;
}

TreeCodings encode_codings(const PlaneTree& tree, bool with_contour) {
  const int n = tree.n_edges();
  TreeCodings out;
  out.lukasiewicz.resize(n + 2);
  out.height.resize(n + 2);
  out.descendant_counts.resize(n + 1);
  out.lukasiewicz[0] = 0;
  for (int j = 0; j <= n; ++j) {
    out.lukasiewicz[j + 1] = out.lukasiewicz[j] + tree.degree(j) - 1;
    out.height[j] = tree.height(j);
    out.descendant_counts[j] = tree.descendants(j);
  }
  out.height[n + 1] = 0;
  if (with_contour) out.contour = contour_function(tree);
  return out;
}

PlaneTree symmetrized(const PlaneTree& tree) {
  std::vector<int> degrees;
  degrees.reserve(tree.n_vertices());
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    degrees.push_back(tree.degree(v));
    // Pushing children left to right pops them right to left.
    for (int c = tree.first_child(v); c != -1; c = tree.next_sibling(c)) stack.push_back(c);
  }
  return PlaneTree::from_degrees(std::move(degrees));
}

int symmetric_index(const PlaneTree& tree, int j) {
  if (j < 0 || j > tree.n_edges()) throw InputError("vertex index out of range");
  return tree.n_edges() - j + tree.height(j) - tree.descendants(j);
}

namespace {

constexpr int kSlot = -2;

// Plane tree read off cyclic neighbour lists: the root's children start right
// after position `root_start` of its list; every other vertex lists its
// children cyclically after its parent. Slot entries are skipped.
PlaneTree rooted_from_cyclic(const std::vector<std::vector<int>>& nbrs, int root, std::size_t root_start,
                             std::vector<int>& order) {
  std::vector<int> degrees;
  order.clear();
  struct Frame {
    int vertex;
    int parent;
  };
  std::vector<Frame> stack{{root, -1}};
  std::vector<int> kids;
  while (!stack.empty()) {
    const auto [u, p] = stack.back();
    stack.pop_back();
    const auto& list = nbrs[u];
    std::size_t start = root_start;
    if (p != -1) start = static_cast<std::size_t>(std::find(list.begin(), list.end(), p) - list.begin());
    kids.clear();
    for (std::size_t k = 1; k <= list.size(); ++k) {
      const int w = list[(start + k) % list.size()];
      if (w == kSlot || w == p) continue;
      kids.push_back(w);
    }
    degrees.push_back(static_cast<int>(kids.size()));
    order.push_back(u);
    for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back({*it, u});
  }
  return PlaneTree::from_degrees(std::move(degrees));
}

}  // namespace

PointedDecomposition point_decompose(const PlaneTree& tree, int v) {
  const int n = tree.n_edges();
  if (v == 0) throw DomainError("pointed decomposition is undefined at the root");
  if (v < 0 || v > n) throw InputError("vertex index out of range");

  const int last = v + tree.descendants(v);
  std::vector<int> sub(tree.degrees().begin() + v, tree.degrees().begin() + last + 1);

  std::vector<int> pruned;
  pruned.reserve(n + 1 - tree.descendants(v));
  for (int u = 0; u <= n; ++u) {
    if (u > v && u <= last) continue;
    pruned.push_back(u == v ? 0 : tree.degree(u));
  }

  // Cyclic neighbour lists of T^v with v removed and hat v at the root's base.
  const int hat = n + 1;
  std::vector<std::vector<int>> nbrs(n + 2);
  for (int u = 0; u <= n; ++u) {
    if (u >= v && u <= last) continue;
    auto& list = nbrs[u];
    list.push_back(u == 0 ? hat : tree.parent(u));
    for (int c = tree.first_child(u); c != -1; c = tree.next_sibling(c)) list.push_back(c == v ? kSlot : c);
  }
  nbrs[hat] = {0};
  const int new_root = tree.parent(v);
  const auto& root_list = nbrs[new_root];
  const auto slot_pos = static_cast<std::size_t>(std::find(root_list.begin(), root_list.end(), kSlot) - root_list.begin());

  std::vector<int> order;
  PointedDecomposition out{PlaneTree::from_degrees(std::move(sub)), PlaneTree::from_degrees(std::move(pruned)),
                           rooted_from_cyclic(nbrs, new_root, slot_pos, order), {}, -1};
  out.rerooted_index.assign(n + 1, -1);
  for (int idx = 0; idx < static_cast<int>(order.size()); ++idx) {
    if (order[idx] == hat) {
      out.hat_vertex = idx;
    } else {
      out.rerooted_index[order[idx]] = idx;
    }
  }
  return out;
}

Shape reduced_shape(const PlaneTree& tree, std::span<const int> marks) {
  const int n = tree.n_edges();
  if (std::find(marks.begin(), marks.end(), 0) == marks.end()) throw InputError("marks must contain the root");
  std::vector<char> marked(n + 1, 0);
  std::vector<char> spanned(n + 1, 0);
  for (int m : marks) {
    if (m < 0 || m > n) throw InputError("marked vertex out of range");
    marked[m] = 1;
    for (int u = m; u != -1 && !spanned[u]; u = tree.parent(u)) spanned[u] = 1;
  }
  std::vector<int> span_children(n + 1, 0);
  for (int u = 1; u <= n; ++u) {
    if (spanned[u]) ++span_children[tree.parent(u)];
  }

  Shape shape;
  std::vector<int> shape_index(n + 1, -1);
  std::vector<int> shape_parent;
  for (int u = 0; u <= n; ++u) {
    if (!spanned[u] || !(u == 0 || marked[u] || span_children[u] >= 2)) continue;
    int anc = u == 0 ? -1 : tree.parent(u);
    while (anc != -1 && shape_index[anc] == -1) anc = tree.parent(anc);
    shape_index[u] = static_cast<int>(shape.host_vertex.size());
    shape.host_vertex.push_back(u);
    shape_parent.push_back(anc == -1 ? -1 : shape_index[anc]);
    shape.edge_lengths.push_back(anc == -1 ? 0 : tree.height(u) - tree.height(anc));
  }
  std::vector<int> degrees(shape.host_vertex.size(), 0);
  for (std::size_t s = 1; s < shape_parent.size(); ++s) ++degrees[shape_parent[s]];
  shape.tree = PlaneTree::from_degrees(std::move(degrees));
  return shape;
}

long ancestral_degree_sum(const PlaneTree& tree, int j) {
  if (j < 0 || j > tree.n_edges()) throw InputError("vertex index out of range");
  long sum = 0;
  for (int u = tree.parent(j); u > 0; u = tree.parent(u)) sum += tree.degree(u) - 1;
  return sum;
}

std::string to_text(const PlaneTree& tree) {
  std::string out;
  out.reserve(3 * tree.n_vertices());
  for (int j = 0; j <= tree.n_edges(); ++j) {
    if (j > 0) out.push_back(',');
    out += std::to_string(tree.degree(j) - 1);
  }
  return out;
}

PlaneTree from_text(std::string_view line) {
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
  std::vector<int> degrees;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    const std::size_t end = std::min(line.find(',', pos), line.size());
    int inc = 0;
    const auto field = line.substr(pos, end - pos);
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), inc);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
      throw InputError("malformed tree line: '" + std::string(line) + "'");
    }
    degrees.push_back(inc + 1);
    pos = end + 1;
  }
  return PlaneTree::from_degrees(std::move(degrees));
}

}  // namespace cuttree
