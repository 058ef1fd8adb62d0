#include "cuttree/statistics.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <utility>

#include "cuttree/errors.hpp"
#include "cuttree/gw_sampler.hpp"
#include "cuttree/parallel.hpp"

namespace cuttree {

namespace {

constexpr std::uint64_t kTheorem1Tag = 0x74683100;
constexpr std::uint64_t kTheorem2Tag = 0x74683200;

template <class Distance>
DistanceObservables sample_points(ObservableSource source, int n, int k, Rng& rng, double scaling, Distance dist) {
  if (k < 1) throw InputError("need at least one sampled point");
  if (n < 1) throw InputError("cannot sample points from a structure without edges");
  DistanceObservables obs;
  obs.source = source;
  obs.k = k;
  obs.scaling = scaling;
  obs.points.assign(k + 1, 0);
  for (int a = 1; a <= k; ++a) obs.points[a] = static_cast<int>(uniform_int(rng, 1, n));
  obs.matrix.assign(k + 1, std::vector<double>(k + 1, 0.0));
  for (int a = 0; a <= k; ++a) {
    for (int b = a + 1; b <= k; ++b) {
      const double d = scaling * dist(obs.points[a], obs.points[b]);
      obs.matrix[a][b] = d;
      obs.matrix[b][a] = d;
    }
  }
  return obs;
}

}  // namespace

std::vector<double> DistanceObservables::flattened() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(k) * (k + 1) / 2);
  for (int a = 0; a <= k; ++a) {
    for (int b = a + 1; b <= k; ++b) out.push_back(matrix[a][b]);
  }
  return out;
}

DistanceObservables sample_distance_observables(const PlaneTree& tree, int k, Rng& rng, double scaling) {
  return sample_points(ObservableSource::tree, tree.n_edges(), k, rng, scaling,
                       [&](int u, int v) { return tree.distance(u, v); });
}

DistanceObservables sample_distance_observables(const CutTree& ct, int k, Rng& rng, double scaling) {
  return sample_points(ObservableSource::cut_tree, ct.n_leaves(), k, rng, scaling,
                       [&](int i, int j) { return cut_distance(ct, i, j); });
}

namespace {

double ks_sorted(std::span<const double> xs, std::span<const double> ys) {
  const double m = static_cast<double>(xs.size());
  const double n = static_cast<double>(ys.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double best = 0.0;
  while (i < xs.size() && j < ys.size()) {
    const double x = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] <= x) ++i;
    while (j < ys.size() && ys[j] <= x) ++j;
    best = std::max(best, std::abs(static_cast<double>(i) / m - static_cast<double>(j) / n));
  }
  return best;
}

}  // namespace

double ks_two_sample(std::span<const double> xs, std::span<const double> ys) {
  if (xs.empty() || ys.empty()) throw InputError("KS statistic needs two nonempty samples");
  std::vector<double> a(xs.begin(), xs.end());
  std::vector<double> b(ys.begin(), ys.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return ks_sorted(a, b);
}

double ks_asymptotic_pvalue(double d, std::size_t m, std::size_t n) {
  const double ne = static_cast<double>(m) * static_cast<double>(n) / static_cast<double>(m + n);
  const double root = std::sqrt(ne);
  const double lambda = (root + 0.12 + 0.11 / root) * d;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 200; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_permutation_pvalue(std::span<const double> xs, std::span<const double> ys, int permutations, Rng& rng) {
  if (permutations < 1) throw InputError("permutation count must be positive");
  const double observed = ks_two_sample(xs, ys);
  std::vector<double> pool(xs.begin(), xs.end());
  pool.insert(pool.end(), ys.begin(), ys.end());
  std::vector<double> a(xs.size());
  std::vector<double> b(ys.size());
  int exceed = 0;
  for (int p = 0; p < permutations; ++p) {
    for (std::size_t i = pool.size() - 1; i > 0; --i) {
      std::swap(pool[i], pool[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(i)))]);
    }
    std::copy(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(xs.size()), a.begin());
    std::copy(pool.begin() + static_cast<std::ptrdiff_t>(xs.size()), pool.end(), b.begin());
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    // Relative tolerance absorbs rounding in i/m - j/n.
    if (ks_sorted(a, b) >= observed - 1e-12) ++exceed;
  }
  return (1.0 + exceed) / (1.0 + permutations);
}

namespace {

double mean_pairwise(const std::vector<std::vector<double>>& xs, const std::vector<std::vector<double>>& ys) {
  double total = 0.0;
  for (const auto& x : xs) {
    for (const auto& y : ys) {
      double ss = 0.0;
      for (std::size_t c = 0; c < x.size(); ++c) ss += (x[c] - y[c]) * (x[c] - y[c]);
      total += std::sqrt(ss);
    }
  }
  return total / (static_cast<double>(xs.size()) * static_cast<double>(ys.size()));
}

}  // namespace

double energy_distance(const std::vector<std::vector<double>>& xs, const std::vector<std::vector<double>>& ys) {
  if (xs.empty() || ys.empty()) throw InputError("energy distance needs two nonempty samples");
  const std::size_t dim = xs.front().size();
  for (const auto& v : xs) {
    if (v.size() != dim) throw InputError("energy distance: dimension mismatch");
  }
  for (const auto& v : ys) {
    if (v.size() != dim) throw InputError("energy distance: dimension mismatch");
  }
  const double value = 2.0 * mean_pairwise(xs, ys) - mean_pairwise(xs, xs) - mean_pairwise(ys, ys);
  return std::max(0.0, value);
}

std::vector<EmnPoint> check_emn_formula(const OffspringModel& model, int m, int n, std::span<const double> t_values,
                                        double a_n) {
  if (m > kMaxEmnEdges) {
    throw GuardError("E_{m,n} enumeration guard: m=" + std::to_string(m) + " exceeds " +
                     std::to_string(kMaxEmnEdges));
  }
  if (m < 1 || m > n) throw InputError("E_{m,n} needs 1 <= m <= n");
  if (!(a_n > 0.0)) throw InputError("a_n must be positive");

  // Left side: conditional expectation over all trees with m edges.
  const auto trees = enumerate_plane_trees(model, m);
  double total_weight = 0.0;
  for (const auto& wt : trees) total_weight += wt.probability;
  std::vector<std::vector<long>> path_degrees;  // per tree, per edge: sum of deg over [rho, e^-]
  path_degrees.reserve(trees.size());
  for (const auto& wt : trees) {
    const PlaneTree& t = wt.tree;
    std::vector<long> acc(t.n_vertices());
    acc[0] = t.degree(0);
    for (int v = 1; v < t.n_vertices(); ++v) acc[v] = acc[t.parent(v)] + t.degree(v);
    std::vector<long> per_edge(m + 1, 0);
    for (int e = 1; e <= m; ++e) per_edge[e] = acc[t.parent(e)];
    path_degrees.push_back(std::move(per_edge));
  }

  // Right side: spine sums Shat_h of the size-biased law, forest sizes Y.
  std::vector<double> nu_hat(m + 1, 0.0);
  for (int r = 1; r <= m; ++r) nu_hat[r] = size_biased_pmf(model, r);
  std::vector<std::vector<double>> spine(m + 1, std::vector<double>(m + 1, 0.0));
  spine[0][0] = 1.0;
  for (int h = 1; h <= m; ++h) {
    for (int k = h; k <= m; ++k) {
      double s = 0.0;
      for (int r = 1; r <= k - h + 1; ++r) s += nu_hat[r] * spine[h - 1][k - r];
      spine[h][k] = s;
    }
  }
  const double p_size = edge_count_pmf(model, m);
  std::vector<std::vector<double>> forest(m + 1, std::vector<double>(m + 1, 0.0));
  for (int h = 1; h <= m; ++h) {
    for (int k = h; k <= m; ++k) forest[h][k] = forest_size_pmf(model, k - h + 1, m - h + 1);
  }

  std::vector<EmnPoint> out;
  for (double t : t_values) {
    EmnPoint p;
    p.t = t;
    double lhs = 0.0;
    for (std::size_t q = 0; q < trees.size(); ++q) {
      double s = 0.0;
      for (int e = 1; e <= m; ++e) s += std::exp(-static_cast<double>(path_degrees[q][e]) * t / a_n);
      lhs += trees[q].probability / total_weight * s;
    }
    p.lhs = lhs / m;
    double rhs = 0.0;
    for (int h = 1; h <= m; ++h) {
      for (int k = h; k <= m; ++k) rhs += std::exp(-k * t / a_n) * spine[h][k] * forest[h][k];
    }
    p.rhs = rhs / (m * p_size);
    p.difference = std::abs(p.lhs - p.rhs);
    out.push_back(p);
  }
  return out;
}

GwstarCheck check_gwstar_transform(const OffspringModel& model, int max_vertices) {
  if (max_vertices > kMaxPointedVertices) {
    throw GuardError("pointed enumeration guard: max_vertices=" + std::to_string(max_vertices) + " exceeds " +
                     std::to_string(kMaxPointedVertices));
  }
  if (max_vertices < 2) throw InputError("pointed enumeration needs at least 2 vertices");

  // Every GW tree that can appear as T_v, with its probability and size.
  std::map<std::string, double> gw_law;
  std::vector<std::vector<std::string>> by_edges(max_vertices);
  using Key = std::pair<std::string, std::string>;
  std::map<Key, double> hat_law;
  std::map<Key, double> pruned_law;
  std::map<std::string, int> pointed_size;  // pointed tree key -> vertex count
  GwstarCheck out;

  for (int m = 0; m < max_vertices; ++m) {
    for (const auto& wt : enumerate_plane_trees(model, m)) {
      const std::string code = to_text(wt.tree);
      gw_law[code] = wt.probability;
      by_edges[m].push_back(code);
      for (int v = 1; v <= m; ++v) {
        const auto dec = point_decompose(wt.tree, v);
        const std::string sub = to_text(dec.subtree);
        const std::string hat = to_text(dec.rerooted) + "@" + std::to_string(dec.hat_vertex);
        const std::string pruned = to_text(dec.pruned) + "@" + std::to_string(v);
        hat_law[{hat, sub}] += wt.probability;
        pruned_law[{pruned, sub}] += wt.probability;
        pointed_size[pruned] = dec.pruned.n_vertices();
        ++out.pointed_trees;
      }
    }
  }

  std::set<Key> keys;
  for (const auto& [k, w] : hat_law) keys.insert(k);
  for (const auto& [k, w] : pruned_law) keys.insert(k);
  double tv = 0.0;
  for (const auto& key : keys) {
    const auto a = hat_law.find(key);
    const auto b = pruned_law.find(key);
    tv += std::abs((a == hat_law.end() ? 0.0 : a->second) - (b == pruned_law.end() ? 0.0 : b->second));
  }
  out.total_variation = tv / 2.0;

  // Product form: for each pointed tree A with a vertices, joint(A, B) =
  // c(A) P(B) over every B with at most max_vertices - a + 1 vertices.
  for (const auto& [pointed, a] : pointed_size) {
    double joint_sum = 0.0;
    double law_sum = 0.0;
    for (int m = 0; m <= max_vertices - a; ++m) {
      for (const auto& code : by_edges[m]) {
        const auto it = pruned_law.find({pointed, code});
        joint_sum += it == pruned_law.end() ? 0.0 : it->second;
        law_sum += gw_law[code];
      }
    }
    const double c = joint_sum / law_sum;
    for (int m = 0; m <= max_vertices - a; ++m) {
      for (const auto& code : by_edges[m]) {
        const auto it = pruned_law.find({pointed, code});
        const double joint = it == pruned_law.end() ? 0.0 : it->second;
        const double expected = c * gw_law[code];
        const double scale = std::max(joint, expected);
        if (scale > 0.0) out.product_form_error = std::max(out.product_form_error, std::abs(joint - expected) / scale);
      }
    }
  }
  return out;
}

double check_cyclic_lemma(const OffspringModel& model, int k_max, int n_max) {
  if (n_max > kMaxWalkSteps) {
    throw GuardError("cyclic lemma guard: n_max=" + std::to_string(n_max) + " exceeds " +
                     std::to_string(kMaxWalkSteps));
  }
  if (k_max < 1 || n_max < 1) throw InputError("cyclic lemma check needs k_max, n_max >= 1");

  // conv[d][s] = P(d independent GW trees have s vertices in total), built
  // from f(s) = nu(0) [s = 1] + sum_{d >= 1} nu(d) conv[d][s - 1].
  const int dmax = std::max(k_max, n_max);
  std::vector<std::vector<double>> conv(dmax + 1, std::vector<double>(n_max + 1, 0.0));
  conv[0][0] = 1.0;
  std::vector<double> nu(n_max + 1);
  for (int d = 0; d <= n_max; ++d) nu[d] = model.pmf(d);
  for (int s = 1; s <= n_max; ++s) {
    double f = s == 1 ? nu[0] : 0.0;
    for (int d = 1; d <= s - 1; ++d) f += nu[d] * conv[d][s - 1];
    conv[1][s] = f;
    for (int d = 2; d <= dmax; ++d) {
      double c = 0.0;
      for (int u = 1; u < s; ++u) c += conv[1][u] * conv[d - 1][s - u];
      conv[d][s] = c;
    }
  }

  double worst = 0.0;
  for (int k = 1; k <= k_max; ++k) {
    for (int n = 1; n <= n_max; ++n) worst = std::max(worst, std::abs(forest_size_pmf(model, k, n) - conv[k][n]));
  }
  return worst;
}

namespace {

void check_ns(const std::vector<int>& ns) {
  if (ns.empty()) throw ConfigError("experiment needs at least one n");
  for (std::size_t q = 0; q < ns.size(); ++q) {
    if (ns[q] < 1) throw ConfigError("every n must be >= 1");
    if (q > 0 && ns[q] <= ns[q - 1]) throw ConfigError("ns must be strictly increasing");
  }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

struct Theorem1Sample {
  double tree_root = 0.0;
  double cut_root = 0.0;
  std::vector<double> tree_vector;
  std::vector<double> cut_vector;
  double calibration_root = 0.0;
};

}  // namespace

Theorem1Report run_theorem1_experiment(const OffspringModel& model, const Theorem1Config& config) {
  if (model.has_finite_variance()) throw ConfigError("theorem1 needs a heavy-tailed (infinite variance) model");
  check_ns(config.ns);
  if (config.replicates < 2) throw ConfigError("theorem1 needs at least 2 replicates");
  if (config.k < 1) throw ConfigError("theorem1 needs k >= 1");
  const auto start = std::chrono::steady_clock::now();
  const ScalingSequence a(model);

  Theorem1Report rep;
  rep.model = model.label();
  rep.config = config;
  for (std::size_t q = 0; q < config.ns.size(); ++q) {
    const int n = config.ns[q];
    const bool calibrate = q + 1 == config.ns.size();
    const double scale = a(n) / n;
    const ConditionedSampler sampler(model, n);
    auto samples = run_replicates<Theorem1Sample>(config.replicates, config.workers, [&](std::int64_t r) {
      Rng rng = substream(config.seed, {kTheorem1Tag, q, static_cast<std::uint64_t>(r)});
      const PlaneTree tree = sampler.draw(rng);
      const FragmentationTrace trace = run_vertex_discrete(tree, rng);
      const CutTree ct = build_cut_tree(tree, trace);
      const auto tree_obs = sample_distance_observables(tree, config.k, rng, scale);
      const auto cut_obs = sample_distance_observables(ct, config.k, rng, scale);
      Theorem1Sample s;
      s.tree_root = tree_obs.matrix[0][1];
      s.cut_root = cut_obs.matrix[0][1];
      s.tree_vector = tree_obs.flattened();
      s.cut_vector = cut_obs.flattened();
      if (calibrate) {
        Rng other = substream(config.seed, {kTheorem1Tag, q, static_cast<std::uint64_t>(r), 1});
        const PlaneTree twin = sampler.draw(other);
        s.calibration_root = sample_distance_observables(twin, 1, other, scale).matrix[0][1];
      }
      return s;
    });

    std::vector<double> xs, ys, cal;
    std::vector<std::vector<double>> xv, yv;
    for (auto& s : samples) {
      xs.push_back(s.tree_root);
      ys.push_back(s.cut_root);
      cal.push_back(s.calibration_root);
      xv.push_back(std::move(s.tree_vector));
      yv.push_back(std::move(s.cut_vector));
    }
    if (config.keep_raw) {
      for (std::size_t r = 0; r < xs.size(); ++r) {
        const auto rep_index = static_cast<std::int64_t>(r);
        rep.raw.push_back({n, rep_index, "tree", "root_distance", xs[r]});
        rep.raw.push_back({n, rep_index, "cut_tree", "root_distance", ys[r]});
      }
    }
    Theorem1Row row;
    row.n = n;
    row.a_n = a(n);
    row.replicates = config.replicates;
    row.ks = ks_two_sample(xs, ys);
    row.ks_pvalue = ks_asymptotic_pvalue(row.ks, xs.size(), ys.size());
    row.energy = energy_distance(xv, yv);
    row.tree_distance = estimate(xs);
    row.cut_distance = estimate(ys);
    rep.rows.push_back(row);
    if (calibrate) {
      Rng perm = substream(config.seed, {kTheorem1Tag, q, 0xca1});
      rep.calibration_ks = ks_two_sample(xs, cal);
      rep.calibration_pvalue = ks_permutation_pvalue(xs, cal, config.permutations, perm);
    }
  }

  rep.ks_non_increasing = true;
  for (std::size_t q = 1; q < rep.rows.size(); ++q) {
    if (rep.rows[q].ks > rep.rows[q - 1].ks + config.ks_slack) rep.ks_non_increasing = false;
  }
  rep.final_below_threshold = rep.rows.back().ks < config.ks_threshold;
  rep.calibration_passed = rep.calibration_pvalue > config.calibration_level;
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

bool Theorem2Report::passed() const {
  return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const Theorem2Row& r) { return r.within_tolerance; });
}

namespace {

struct Theorem2Sample {
  double tree_mean = 0.0;
  double vertex_mean = 0.0;
  double edge_mean = 0.0;
  double tree_point = 0.0;
  double vertex_point = 0.0;
  double edge_point = 0.0;
};

}  // namespace

Theorem2Report run_theorem2_experiment(const OffspringModel& model, const Theorem2Config& config) {
  if (!model.has_finite_variance()) throw ConfigError("theorem2 needs a finite-variance model");
  check_ns(config.ns);
  if (config.replicates < 2) throw ConfigError("theorem2 needs at least 2 replicates");
  const auto start = std::chrono::steady_clock::now();
  const double sigma = std::sqrt(model.moments().variance);
  if (!(sigma > 0.0)) throw ConfigError("theorem2 needs a non-degenerate offspring law");

  Theorem2Report rep;
  rep.model = model.label();
  rep.config = config;
  rep.sigma = sigma;
  rep.reference_mean = std::sqrt(std::numbers::pi / 2.0);
  for (std::size_t q = 0; q < config.ns.size(); ++q) {
    const int n = config.ns[q];
    const double root_n = std::sqrt(static_cast<double>(n));
    const double tree_scale = sigma / root_n;
    const double vertex_scale = (sigma + 1.0 / sigma) / root_n;
    const double edge_scale = 1.0 / (sigma * root_n);
    const ConditionedSampler sampler(model, n);
    auto samples = run_replicates<Theorem2Sample>(config.replicates, config.workers, [&](std::int64_t r) {
      Rng rng = substream(config.seed, {kTheorem2Tag, q, static_cast<std::uint64_t>(r)});
      const PlaneTree tree = sampler.draw(rng);
      const CoupledTraces coupled = run_coupled_discrete(tree, rng);
      const CutTree vertex_ct = build_cut_tree(tree, coupled.vertex);
      const CutTree edge_ct = build_cut_tree(tree, coupled.edge);
      long heights = 0;
      long vertex_depths = 0;
      long edge_depths = 0;
      for (int i = 1; i <= n; ++i) {
        heights += tree.height(i);
        vertex_depths += vertex_ct.leaf_depth(i);
        edge_depths += edge_ct.leaf_depth(i);
      }
      Theorem2Sample s;
      s.tree_mean = tree_scale * static_cast<double>(heights) / n;
      s.vertex_mean = vertex_scale * static_cast<double>(vertex_depths) / n;
      s.edge_mean = edge_scale * static_cast<double>(edge_depths) / n;
      s.tree_point = tree_scale * tree.height(static_cast<int>(uniform_int(rng, 1, n)));
      s.vertex_point = vertex_scale * vertex_ct.leaf_depth(static_cast<int>(uniform_int(rng, 1, n)));
      s.edge_point = edge_scale * edge_ct.leaf_depth(static_cast<int>(uniform_int(rng, 1, n)));
      return s;
    });

    std::vector<double> tm, vm, em, tp, vp, ep;
    for (const auto& s : samples) {
      tm.push_back(s.tree_mean);
      vm.push_back(s.vertex_mean);
      em.push_back(s.edge_mean);
      tp.push_back(s.tree_point);
      vp.push_back(s.vertex_point);
      ep.push_back(s.edge_point);
    }
    if (config.keep_raw) {
      for (std::size_t r = 0; r < samples.size(); ++r) {
        const auto rep_index = static_cast<std::int64_t>(r);
        rep.raw.push_back({n, rep_index, "tree", "mean_height", tm[r]});
        rep.raw.push_back({n, rep_index, "cut_tree", "mean_leaf_depth", vm[r]});
        rep.raw.push_back({n, rep_index, "edge_cut_tree", "mean_leaf_depth", em[r]});
      }
    }
    Theorem2Row row;
    row.n = n;
    row.replicates = config.replicates;
    row.tree_mean = estimate(tm);
    row.vertex_mean = estimate(vm);
    row.edge_mean = estimate(em);
    row.ratio_vertex_tree = row.vertex_mean.mean / row.tree_mean.mean;
    row.ratio_vertex_edge = row.vertex_mean.mean / row.edge_mean.mean;
    row.ks_vertex_tree = ks_two_sample(vp, tp);
    row.ks_edge_tree = ks_two_sample(ep, tp);
    row.within_tolerance = std::abs(row.ratio_vertex_tree - 1.0) <= config.tolerance &&
                           std::abs(row.ratio_vertex_edge - 1.0) <= config.tolerance;
    rep.rows.push_back(row);
  }
  rep.runtime_seconds = seconds_since(start);
  return rep;
}

}  // namespace cuttree
