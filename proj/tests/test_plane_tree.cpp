#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "cuttree/errors.hpp"
#include "cuttree/gw_sampler.hpp"
#include "cuttree/plane_tree.hpp"

using namespace cuttree;

namespace {

PlaneTree path(int n) {
  std::vector<int> deg(n + 1, 1);
  deg[n] = 0;
  return PlaneTree::from_degrees(deg);
}

PlaneTree star(int n) {
  std::vector<int> deg(n + 1, 0);
  deg[0] = n;
  return PlaneTree::from_degrees(deg);
}

std::vector<PlaneTree> random_trees(int count, int max_n, std::uint64_t seed) {
  std::vector<PlaneTree> out;
  const auto geo = OffspringModel::geometric_critical();
  const auto pt = OffspringModel::power_tail_critical(1.5);
  for (int t = 0; t < count; ++t) {
    Rng rng = substream(seed, {static_cast<std::uint64_t>(t)});
    const int n = static_cast<int>(uniform_int(rng, 1, max_n));
    out.push_back(sample_conditioned(t % 2 == 0 ? geo : pt, n, rng));
  }
  return out;
}

// Parent pointers from the degree sequence with an explicit stack of open slots.
std::vector<int> parents_oracle(const std::vector<int>& deg) {
  std::vector<int> parent(deg.size(), -1);
  std::vector<std::pair<int, int>> open;  // (vertex, children still to attach)
  for (int v = 0; v < static_cast<int>(deg.size()); ++v) {
    if (!open.empty()) {
      parent[v] = open.back().first;
      if (--open.back().second == 0) open.pop_back();
    }
    if (deg[v] > 0) open.emplace_back(v, deg[v]);
  }
  return parent;
}

}  // namespace

TEST(Decode, SpecExamples) {
  const std::vector<long> single{0, -1};
  EXPECT_EQ(decode_lukasiewicz(single), PlaneTree());
  EXPECT_EQ(decode_lukasiewicz(single).n_edges(), 0);

  const std::vector<long> w{0, 1, 1, 0, -1};
  const auto t = decode_lukasiewicz(w);
  ASSERT_EQ(t.n_edges(), 3);
  EXPECT_EQ(t.children(0), (std::vector<int>{1, 3}));
  EXPECT_EQ(t.children(1), (std::vector<int>{2}));
  EXPECT_EQ(t.parent(2), 1);

  const std::vector<long> p{0, 0, -1};
  EXPECT_EQ(decode_lukasiewicz(p), path(1));
}

TEST(Decode, RejectsMalformedWalks) {
  EXPECT_THROW(decode_lukasiewicz(std::vector<long>{0, 0}), InputError);         // does not end at -1
  EXPECT_THROW(decode_lukasiewicz(std::vector<long>{0, -1, -2}), InputError);    // exits early
  EXPECT_THROW(decode_lukasiewicz(std::vector<long>{0, 2, 0, -1}), InputError);  // jump below -1
  EXPECT_THROW(decode_lukasiewicz(std::vector<long>{1, 0, -1}), InputError);     // W_0 != 0
  EXPECT_THROW(decode_lukasiewicz(std::vector<long>{}), InputError);
}

TEST(FromDegrees, RejectsNonTrees) {
  EXPECT_THROW(PlaneTree::from_degrees({1, 1}), InputError);
  EXPECT_THROW(PlaneTree::from_degrees({0, 0}), InputError);
  EXPECT_THROW(PlaneTree::from_degrees({2, -1, 0}), InputError);
}

TEST(Encode, SpecExamples) {
  EXPECT_EQ(encode_codings(path(2)).height, (std::vector<long>{0, 1, 2, 0}));
  EXPECT_EQ(encode_codings(star(2)).lukasiewicz, (std::vector<long>{0, 1, 0, -1}));
  const auto c = contour_function(path(1));
  ASSERT_GE(c.size(), 4u);
  EXPECT_EQ(std::vector<long>(c.begin(), c.begin() + 4), (std::vector<long>{0, 1, 0, 0}));
}

TEST(Encode, DescendantCounts) {
  const std::vector<long> w{0, 1, 1, 0, -1};
  const auto c = encode_codings(decode_lukasiewicz(w));
  EXPECT_EQ(c.descendant_counts, (std::vector<long>{3, 1, 0, 0}));
}

TEST(Encode, ContourVisitsEveryVertexAndHasUnitSteps) {
  for (const auto& t : random_trees(200, 60, 11)) {
    const auto c = contour_function(t);
    const int n = t.n_edges();
    ASSERT_EQ(static_cast<int>(c.size()), 2 * n + 3);
    EXPECT_EQ(c[0], 0);
    for (int s = 0; s < 2 * n; ++s) EXPECT_EQ(std::abs(c[s + 1] - c[s]), 1);
    for (int s = 2 * n; s <= 2 * n + 2; ++s) EXPECT_EQ(c[s], 0);
    const auto h = encode_codings(t).height;
    EXPECT_EQ(*std::max_element(c.begin(), c.end()), *std::max_element(h.begin(), h.end()));
  }
}

TEST(Encode, RoundTripAndTreeArraysAgree) {
  for (const auto& t : random_trees(300, 80, 12)) {
    const auto codes = encode_codings(t);
    EXPECT_EQ(decode_lukasiewicz(codes.lukasiewicz), t);
    EXPECT_EQ(from_text(to_text(t)), t);
    const std::vector<int> deg(t.degrees().begin(), t.degrees().end());
    const auto parent = parents_oracle(deg);
    for (int v = 0; v <= t.n_edges(); ++v) {
      EXPECT_EQ(t.parent(v), parent[v]);
      EXPECT_EQ(codes.height[v], t.height(v));
      EXPECT_EQ(codes.descendant_counts[v], t.descendants(v));
      if (v > 0) { EXPECT_EQ(t.height(v), t.height(parent[v]) + 1); }
    }
    EXPECT_EQ(codes.height[t.n_edges() + 1], 0);
  }
}

TEST(Text, Format) {
  EXPECT_EQ(to_text(star(2)), "1,-1,-1");
  EXPECT_EQ(from_text("0,-1"), path(1));
  EXPECT_THROW(from_text("1,x"), InputError);
  EXPECT_THROW(from_text("1,-1"), InputError);
}

TEST(Lca, AgreesWithAncestorWalk) {
  for (const auto& t : random_trees(50, 40, 13)) {
    const int n = t.n_edges();
    for (int u = 0; u <= n; ++u) {
      std::set<int> anc;
      for (int x = u; x != -1; x = t.parent(x)) anc.insert(x);
      for (int v = 0; v <= n; ++v) {
        int w = v;
        while (!anc.count(w)) w = t.parent(w);
        ASSERT_EQ(t.lca(u, v), w);
      }
    }
  }
}

TEST(Symmetric, SpecExamples) {
  EXPECT_EQ(symmetric_index(path(2), 1), 1);
  EXPECT_EQ(symmetric_index(star(2), 1), 2);
  EXPECT_EQ(symmetric_index(star(2), 2), 1);
  for (const auto& t : random_trees(20, 30, 14)) EXPECT_EQ(symmetric_index(t, 0), 0);
}

TEST(Symmetric, InvolutionAndDegreeTransport) {
  for (const auto& t : random_trees(200, 100, 15)) {
    const auto s = symmetrized(t);
    EXPECT_EQ(symmetrized(s), t);
    std::vector<int> seen(t.n_vertices(), 0);
    for (int j = 0; j <= t.n_edges(); ++j) {
      const int k = symmetric_index(t, j);
      ASSERT_GE(k, 0);
      ASSERT_LE(k, t.n_edges());
      ++seen[k];
      EXPECT_EQ(s.degree(k), t.degree(j));
      EXPECT_EQ(symmetric_index(s, k), j);
    }
    EXPECT_TRUE(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
  }
}

TEST(PointDecompose, SpecExamples) {
  const auto p = point_decompose(path(2), 1);
  EXPECT_EQ(p.subtree, path(1));
  EXPECT_EQ(p.pruned, path(1));
  EXPECT_EQ(p.rerooted, path(1));
  EXPECT_EQ(p.hat_vertex, 1);

  const auto s = point_decompose(star(2), 1);
  EXPECT_EQ(s.subtree, PlaneTree());
  EXPECT_EQ(s.rerooted.n_edges(), 2);
  EXPECT_EQ(s.rerooted.degree(0), 2);

  EXPECT_THROW(point_decompose(star(2), 0), DomainError);
  EXPECT_THROW(point_decompose(star(2), 3), InputError);
}

TEST(PointDecompose, Properties) {
  for (const auto& t : random_trees(300, 50, 16)) {
    const int n = t.n_edges();
    for (int v = 1; v <= n; ++v) {
      const auto d = point_decompose(t, v);
      EXPECT_EQ(d.subtree.n_edges(), t.descendants(v));
      EXPECT_EQ(d.pruned.n_edges(), n - t.descendants(v));
      EXPECT_EQ(d.rerooted.n_edges(), d.pruned.n_edges());
      if (t.degree(v) == 0) { EXPECT_EQ(d.subtree, PlaneTree()); }
      // hat v is a leaf at the height of v, and every kept host vertex keeps its degree.
      EXPECT_EQ(d.rerooted.degree(d.hat_vertex), 0);
      EXPECT_EQ(d.rerooted.height(d.hat_vertex), t.height(v));
      long deg_host = 0;
      long deg_hat = 0;
      for (int u = 0; u <= n; ++u) {
        const int k = d.rerooted_index[u];
        if (u == v || (u > v && u <= v + t.descendants(v))) {
          EXPECT_EQ(k, -1);
          continue;
        }
        ASSERT_GE(k, 0);
        EXPECT_EQ(d.rerooted.degree(k), t.degree(u));
        deg_host += t.degree(u);
        deg_hat += d.rerooted.degree(k);
      }
      EXPECT_EQ(deg_host, deg_hat);
    }
  }
}

TEST(ReducedShape, SpecExamples) {
  {
    const std::vector<int> marks{0, 3};
    const auto s = reduced_shape(path(3), marks);
    EXPECT_EQ(s.tree, path(1));
    EXPECT_EQ(s.edge_lengths[1], 3);
  }
  {
    const std::vector<int> marks{0, 1, 2};
    const auto s = reduced_shape(star(2), marks);
    EXPECT_EQ(s.tree, star(2));
    EXPECT_EQ(s.edge_lengths[1], 1);
    EXPECT_EQ(s.edge_lengths[2], 1);
  }
  {
    const auto t = PlaneTree::from_degrees({2, 1, 0, 1, 0});
    const std::vector<int> marks{0, 2, 4};
    const auto s = reduced_shape(t, marks);
    EXPECT_EQ(s.tree, star(2));
    EXPECT_EQ(s.edge_lengths[1], 2);
    EXPECT_EQ(s.edge_lengths[2], 2);
    EXPECT_EQ(s.host_vertex, (std::vector<int>{0, 2, 4}));
  }
}

TEST(ReducedShape, LengthsSumToSpannedEdges) {
  int tree_index = 0;
  for (const auto& t : random_trees(200, 80, 17)) {
    Rng rng(1000 + tree_index++);
    std::vector<int> marks{0};
    for (int k = 0; k < 4; ++k) marks.push_back(static_cast<int>(uniform_int(rng, 0, t.n_edges())));
    const auto s = reduced_shape(t, marks);
    std::set<int> spanned;
    for (int m : marks) {
      for (int x = m; x > 0; x = t.parent(x)) spanned.insert(x);
    }
    long total = 0;
    for (int e = 1; e <= s.tree.n_edges(); ++e) {
      total += s.edge_lengths[e];
      EXPECT_EQ(s.edge_lengths[e], t.distance(s.host_vertex[e], s.host_vertex[s.tree.parent(e)]));
    }
    EXPECT_EQ(total, static_cast<long>(spanned.size()));
    for (int m : marks) EXPECT_TRUE(std::count(s.host_vertex.begin(), s.host_vertex.end(), m) == 1);
  }
}

TEST(AncestralDegreeSum, SpecExamples) {
  EXPECT_EQ(ancestral_degree_sum(star(3), 2), 0);
  EXPECT_EQ(ancestral_degree_sum(path(2), 2), 0);
  EXPECT_EQ(ancestral_degree_sum(PlaneTree::from_degrees({1, 2, 0, 0}), 2), 1);
  EXPECT_EQ(ancestral_degree_sum(path(2), 0), 0);
}
