#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "cuttree/errors.hpp"
#include "cuttree/gw_sampler.hpp"

using namespace cuttree;

namespace {

OffspringModel binary() { return OffspringModel::from_pmf({0.5, 0.0, 0.5}, "binary"); }

double tree_weight(const OffspringModel& m, const PlaneTree& t) {
  double w = 1.0;
  for (int d : t.degrees()) w *= m.pmf(d);
  return w;
}

// Catalan numbers count plane trees with m edges.
long catalan(int m) {
  long c = 1;
  for (int k = 0; k < m; ++k) c = c * 2 * (2 * k + 1) / (k + 2);
  return c;
}

// Pearson chi-square of observed counts against enumerated conditional weights.
double chi_square(const std::map<std::string, int>& counts, const std::vector<WeightedTree>& trees, int draws) {
  double total_w = 0.0;
  for (const auto& wt : trees) total_w += wt.probability;
  double chi = 0.0;
  for (const auto& wt : trees) {
    const double expected = draws * wt.probability / total_w;
    const auto it = counts.find(to_text(wt.tree));
    const double obs = it == counts.end() ? 0.0 : it->second;
    chi += (obs - expected) * (obs - expected) / expected;
  }
  return chi;
}

}  // namespace

TEST(Enumerate, SpecExamples) {
  const auto geo = OffspringModel::geometric_critical();
  const auto one = enumerate_plane_trees(geo, 1);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_DOUBLE_EQ(one[0].probability, geo.pmf(1) * geo.pmf(0));

  const auto two = enumerate_plane_trees(geo, 2);
  ASSERT_EQ(two.size(), 2u);
  for (const auto& wt : two) EXPECT_DOUBLE_EQ(wt.probability, 1.0 / 32.0);

  const auto bin = enumerate_plane_trees(binary(), 2);
  ASSERT_EQ(bin.size(), 1u);
  EXPECT_EQ(bin[0].tree, PlaneTree::from_degrees({2, 0, 0}));
  EXPECT_DOUBLE_EQ(bin[0].probability, 1.0 / 8.0);
}

TEST(Enumerate, CatalanCountAndEdgeCountLaw) {
  const auto geo = OffspringModel::geometric_critical();
  for (int m = 0; m <= 8; ++m) {
    const auto all = enumerate_plane_trees(geo, m);
    EXPECT_EQ(static_cast<long>(all.size()), catalan(m));
    double total = 0.0;
    for (const auto& wt : all) {
      EXPECT_EQ(wt.tree.n_edges(), m);
      EXPECT_DOUBLE_EQ(wt.probability, tree_weight(geo, wt.tree));
      total += wt.probability;
    }
    // Geometric GW: every tree with m edges has weight 2^-(2m+1).
    EXPECT_NEAR(total, catalan(m) * std::ldexp(1.0, -(2 * m + 1)), 1e-15);
    EXPECT_NEAR(edge_count_pmf(geo, m), total, 1e-14);
  }
  EXPECT_THROW(enumerate_plane_trees(geo, kMaxEnumerationEdges + 1), GuardError);
}

TEST(Sampler, TrivialSizes) {
  Rng rng(1);
  for (const auto& m : {OffspringModel::geometric_critical(), OffspringModel::power_tail_critical(1.5), binary()}) {
    EXPECT_THROW(sample_conditioned(m, 0, rng), InputError);
    if (m.label() != "binary") { EXPECT_EQ(sample_conditioned(m, 1, rng), PlaneTree::from_degrees({1, 0})); }
  }
  for (int i = 0; i < 200; ++i) EXPECT_EQ(sample_conditioned(binary(), 2, rng), PlaneTree::from_degrees({2, 0, 0}));
}

TEST(Sampler, GeometricTwoEdgesIsFair) {
  const auto geo = OffspringModel::geometric_critical();
  ConditionedSampler s(geo, 2);
  Rng rng(2);
  int paths = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) paths += s.draw(rng).degree(0) == 1 ? 1 : 0;
  EXPECT_NEAR(paths / static_cast<double>(draws), 0.5, 0.015);
}

// Chi-square against exact enumeration for both the direct composition path
// (geometric) and the rejection path (power tail, binary). Critical values at
// the 0.999 level for the degrees of freedom used (41, 13, 4).
TEST(Sampler, MatchesEnumeratedLaw) {
  struct Case {
    OffspringModel model;
    int m;
    double critical;
  };
  const std::vector<Case> cases{{OffspringModel::geometric_critical(), 5, 74.7},
                                {OffspringModel::power_tail_critical(1.5), 4, 34.5},
                                {binary(), 6, 18.5}};
  std::uint64_t seed = 3;
  for (const auto& c : cases) {
    const auto trees = enumerate_plane_trees(c.model, c.m);
    ConditionedSampler s(c.model, c.m);
    Rng rng(seed++);
    const int draws = 60000;
    std::map<std::string, int> counts;
    for (int i = 0; i < draws; ++i) ++counts[to_text(s.draw(rng))];
    EXPECT_EQ(counts.size(), trees.size()) << c.model.label();
    EXPECT_LT(chi_square(counts, trees, draws), c.critical) << c.model.label();
  }
}

TEST(Sampler, PeriodicModelRejectsUnreachableSizes) {
  EXPECT_THROW(ConditionedSampler(binary(), 3), DomainError);
}

TEST(Sampler, RetryBudget) {
  const auto pt = OffspringModel::power_tail_critical(1.5);
  ConditionedSampler s(pt, 200, 1);
  Rng rng(4);
  bool exhausted = false;
  for (int i = 0; i < 50 && !exhausted; ++i) {
    try {
      s.draw(rng);
    } catch (const RetryExhausted&) {
      exhausted = true;
    }
  }
  EXPECT_TRUE(exhausted);
}

TEST(Sampler, GeometricUsesOneAttempt) {
  ConditionedSampler s(OffspringModel::geometric_critical(), 500);
  Rng rng(5);
  std::int64_t attempts = 0;
  const auto t = s.draw_counted(rng, attempts);
  EXPECT_EQ(attempts, 1);
  EXPECT_EQ(t.n_edges(), 500);
}

TEST(CyclicRotation, ProducesTheUniqueExcursion) {
  const auto t = PlaneTree::from_degrees(cyclic_rotation_to_excursion({0, 0, 2}));
  EXPECT_EQ(t, PlaneTree::from_degrees({2, 0, 0}));
  Rng rng(6);
  for (int trial = 0; trial < 500; ++trial) {
    const auto tree = sample_conditioned(OffspringModel::power_tail_critical(1.5), 30, rng);
    std::vector<int> deg(tree.degrees().begin(), tree.degrees().end());
    const int shift = static_cast<int>(uniform_int(rng, 0, 30));
    std::rotate(deg.begin(), deg.begin() + shift, deg.end());
    EXPECT_EQ(PlaneTree::from_degrees(cyclic_rotation_to_excursion(deg)), tree);
  }
}

TEST(WalkPmf, SpecExamples) {
  EXPECT_DOUBLE_EQ(exact_walk_pmf(binary(), 3).at(-1), 3.0 / 8.0);
  EXPECT_DOUBLE_EQ(exact_walk_pmf(OffspringModel::geometric_critical(), 1, 10).at(-1), 0.5);
  const auto zero = exact_walk_pmf(OffspringModel::geometric_critical(), 0, 10);
  EXPECT_DOUBLE_EQ(zero.at(0), 1.0);
  EXPECT_DOUBLE_EQ(zero.total(), 1.0);
}

TEST(WalkPmf, Guards) {
  EXPECT_THROW(exact_walk_pmf(binary(), kMaxWalkSteps + 1), GuardError);
  EXPECT_THROW(exact_walk_pmf(OffspringModel::geometric_critical(), 3), GuardError);
}

TEST(WalkPmf, BinaryIsBinomial) {
  const auto w = exact_walk_pmf(binary(), 10);
  EXPECT_TRUE(w.complete);
  EXPECT_NEAR(w.total(), 1.0, 1e-15);
  for (int up = 0; up <= 10; ++up) {
    double binom = 1.0;
    for (int i = 0; i < up; ++i) binom = binom * (10 - i) / (i + 1);
    EXPECT_NEAR(w.at(2 * up - 10), binom / 1024.0, 1e-15);
  }
}

TEST(ForestSize, SpecExamples) {
  EXPECT_DOUBLE_EQ(forest_size_pmf(binary(), 1, 1), 0.5);
  EXPECT_DOUBLE_EQ(forest_size_pmf(binary(), 1, 3), 1.0 / 8.0);
  EXPECT_DOUBLE_EQ(forest_size_pmf(OffspringModel::geometric_critical(), 1, 0), 0.0);
  EXPECT_DOUBLE_EQ(forest_size_pmf(binary(), 3, 2), 0.0);
}

TEST(ForestSize, SingleTreeMatchesEnumeration) {
  for (const auto& m : {OffspringModel::geometric_critical(), OffspringModel::power_tail_critical(1.5), binary()}) {
    for (int e = 0; e <= 7; ++e) {
      double enumerated = 0.0;
      for (const auto& wt : enumerate_plane_trees(m, e)) enumerated += wt.probability;
      EXPECT_NEAR(forest_size_pmf(m, 1, e + 1), enumerated, 1e-14) << m.label() << " e=" << e;
    }
  }
}

TEST(PointedGwstar, SingleEdgeIsUniform) {
  Rng rng(7);
  int root = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) root += sample_pointed_gwstar(OffspringModel::geometric_critical(), 1, rng).second == 0;
  EXPECT_NEAR(root / static_cast<double>(draws), 0.5, 0.015);
}

TEST(PointedGwstar, TwoEdgeGeometricPairsHaveMassOneSixth) {
  ConditionedSampler s(OffspringModel::geometric_critical(), 2);
  Rng rng(8);
  std::map<std::pair<int, int>, int> counts;  // (root degree, vertex)
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) {
    const auto [t, v] = sample_pointed_gwstar(s, rng);
    ++counts[{t.degree(0), v}];
  }
  ASSERT_EQ(counts.size(), 6u);
  const double p = 1.0 / 6.0;
  const double se = std::sqrt(p * (1 - p) / draws);
  for (const auto& [key, c] : counts) EXPECT_NEAR(c / static_cast<double>(draws), p, 4 * se);
}

TEST(PointedGwstar, RootFrequency) {
  const int n = 20;
  ConditionedSampler s(OffspringModel::power_tail_critical(1.5), n);
  Rng rng(9);
  int root = 0;
  const int draws = 20000;
  for (int i = 0; i < draws; ++i) root += sample_pointed_gwstar(s, rng).second == 0;
  const double p = 1.0 / (n + 1);
  EXPECT_NEAR(root / static_cast<double>(draws), p, 3 * std::sqrt(p * (1 - p) / draws));
}
