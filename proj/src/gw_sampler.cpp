#include "cuttree/gw_sampler.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <sstream>

#include "cuttree/errors.hpp"

namespace cuttree {

namespace {

void enumerate_rec(const OffspringModel& model, int m, std::vector<int>& degrees, long walk, int remaining,
                   double weight, std::vector<WeightedTree>& out) {
  const int j = static_cast<int>(degrees.size());
  if (j == m) {
    const double w = weight * model.pmf(remaining);
    if (w > 0.0) {
      degrees.push_back(remaining);
      out.push_back({PlaneTree::from_degrees(degrees), w});
      degrees.pop_back();
    }
    return;
  }
  for (int d = 0; d <= remaining; ++d) {
    if (walk + d - 1 < 0) continue;
    const double p = model.pmf(d);
    if (!(p > 0.0)) continue;
    degrees.push_back(d);
    enumerate_rec(model, m, degrees, walk + d - 1, remaining - d, weight * p, out);
    degrees.pop_back();
  }
}

}  // namespace

std::vector<WeightedTree> enumerate_plane_trees(const OffspringModel& model, int m) {
  if (m < 0) throw InputError("edge count must be non-negative");
  if (m > kMaxEnumerationEdges) {
    std::ostringstream msg;
    msg << "plane-tree enumeration guard: m=" << m << " exceeds " << kMaxEnumerationEdges;
    throw GuardError(msg.str());
  }
  std::vector<WeightedTree> out;
  std::vector<int> degrees;
  degrees.reserve(m + 1);
  enumerate_rec(model, m, degrees, 0, m, 1.0, out);
  return out;
}

ConditionedSampler::ConditionedSampler(const OffspringModel& model, int n, std::int64_t max_attempts)
    : n_(n), max_attempts_(max_attempts) {
  if (n < 1) throw InputError("conditioned sampling needs n >= 1 edges");
  if (n % model.period() != 0) {
    std::ostringstream msg;
    msg << "model " << model.label() << " has period " << model.period() << ": no tree with " << n
        << " edges has positive probability";
    throw DomainError(msg.str());
  }
  uniform_composition_ = model.family() == OffspringModel::Family::geometric;
  cdf_.resize(n + 2);
  for (int k = 0; k <= n; ++k) cdf_[k] = model.cdf(k);
  cdf_[n + 1] = 1.0;
  guide_.resize(n + 2);
  const double g_size = static_cast<double>(guide_.size());
  int k = 0;
  for (std::size_t g = 0; g < guide_.size(); ++g) {
    const double level = static_cast<double>(g) / g_size;
    while (cdf_[k] <= level) ++k;
    guide_[g] = k;
  }
}

std::int64_t ConditionedSampler::offspring(Rng& rng) const {
  const double u = uniform01(rng);
  int k = guide_[static_cast<std::size_t>(u * static_cast<double>(guide_.size()))];
  while (cdf_[k] <= u) ++k;
  return k;
}

PlaneTree ConditionedSampler::draw(Rng& rng) const {
  std::int64_t attempts = 0;
  return draw_counted(rng, attempts);
}

PlaneTree ConditionedSampler::draw_counted(Rng& rng, std::int64_t& attempts) const {
  std::vector<int> z(n_ + 1);
  if (uniform_composition_) {
    attempts = 1;
    uniform_composition(rng, z);
    return PlaneTree::from_degrees(cyclic_rotation_to_excursion(z));
  }
  for (attempts = 1; attempts <= max_attempts_; ++attempts) {
    std::int64_t sum = 0;
    int i = 0;
    for (; i <= n_; ++i) {
      const std::int64_t k = offspring(rng);
      sum += k;
      if (sum > n_) break;
      z[i] = static_cast<int>(k);
    }
    if (i == n_ + 1 && sum == n_) return PlaneTree::from_degrees(cyclic_rotation_to_excursion(z));
  }
  std::ostringstream msg;
  msg << "conditioned sampler exhausted " << max_attempts_ << " attempts for n=" << n_;
  throw RetryExhausted(msg.str());
}

void ConditionedSampler::uniform_composition(Rng& rng, std::vector<int>& z) const {
  // n stars and n bars in uniformly random order; z[i] counts stars before bar i.
  std::vector<char> bar(2 * static_cast<std::size_t>(n_), 0);
  std::fill(bar.begin() + n_, bar.end(), 1);
  for (std::size_t i = bar.size() - 1; i > 0; --i) {
    std::swap(bar[i], bar[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(i)))]);
  }
  std::fill(z.begin(), z.end(), 0);
  std::size_t part = 0;
  for (char b : bar) {
    if (b) {
      ++part;
    } else {
      ++z[part];
    }
  }
}

std::vector<int> cyclic_rotation_to_excursion(std::vector<int> offspring) {
  // Start right after the first time the walk reaches its overall minimum.
  long walk = 0;
  long best = 0;
  std::size_t first_min = 0;
  for (std::size_t j = 0; j < offspring.size(); ++j) {
    walk += offspring[j] - 1;
    if (walk < best) {
      best = walk;
      first_min = j + 1;
    }
  }
  if (walk != -1) throw InputError("offspring vector must have increment sum -1");
  std::rotate(offspring.begin(), offspring.begin() + static_cast<std::ptrdiff_t>(first_min % offspring.size()),
              offspring.end());
#ifndef NDEBUG
  long w = 0;
  for (std::size_t j = 0; j + 1 < offspring.size(); ++j) {
    w += offspring[j] - 1;
    assert(w >= 0);
  }
#endif
  return offspring;
}

PlaneTree sample_conditioned(const OffspringModel& model, int n, Rng& rng) {
  return ConditionedSampler(model, n).draw(rng);
}

std::pair<PlaneTree, int> sample_pointed_gwstar(const ConditionedSampler& sampler, Rng& rng) {
  PlaneTree tree = sampler.draw(rng);
  const int v = static_cast<int>(uniform_int(rng, 0, tree.n_edges()));
  return {std::move(tree), v};
}

std::pair<PlaneTree, int> sample_pointed_gwstar(const OffspringModel& model, int n, Rng& rng) {
  return sample_pointed_gwstar(ConditionedSampler(model, n), rng);
}

double WalkPmf::at(long level) const {
  if (level < min_level) return 0.0;
  if (level > exact_up_to) {
    if (complete) return 0.0;
    throw GuardError("walk pmf requested above its exact range");
  }
  return values[static_cast<std::size_t>(level - min_level)];
}

double WalkPmf::total() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

WalkPmf exact_walk_pmf(const OffspringModel& model, int n, std::optional<long> level_cap) {
  if (n < 0) throw InputError("step count must be non-negative");
  if (n > kMaxWalkSteps) {
    std::ostringstream msg;
    msg << "exact convolution guard: n=" << n << " exceeds " << kMaxWalkSteps;
    throw GuardError(msg.str());
  }
  const auto cap = model.support_cap();
  if (!cap && !level_cap) throw GuardError("exact walk pmf needs a support cap or a level cap");

  WalkPmf out;
  out.n = n;
  out.min_level = -n;
  long top = 0;       // highest level kept during the convolution
  long max_z = 0;     // largest offspring value used
  if (cap) {
    out.complete = true;
    max_z = *cap;
    top = static_cast<long>(n) * std::max<long>(*cap - 1, 0);
    out.exact_up_to = top;
  } else {
    // Mass above L + n never returns to <= L within n steps of size >= -1.
    out.exact_up_to = std::max<long>(*level_cap, -n);
    top = out.exact_up_to + n;
    max_z = top + n + 1;
  }
  std::vector<double> step(static_cast<std::size_t>(max_z + 1));
  for (long z = 0; z <= max_z; ++z) step[z] = model.pmf(z);

  const long width = top + n + 1;  // levels [-n, top]
  std::vector<double> cur(width, 0.0);
  std::vector<double> next(width, 0.0);
  cur[n] = 1.0;  // level 0
  for (int s = 0; s < n; ++s) {
    std::fill(next.begin(), next.end(), 0.0);
    for (long idx = 0; idx < width; ++idx) {
      const double p = cur[idx];
      if (p == 0.0) continue;
      for (long z = 0; z <= max_z; ++z) {
        const long to = idx + z - 1;
        if (to >= width) break;
        if (to >= 0) next[to] += p * step[z];
      }
    }
    std::swap(cur, next);
  }
  out.values.assign(cur.begin(), cur.begin() + (out.exact_up_to + n + 1));
  return out;
}

double forest_size_pmf(const OffspringModel& model, int k, int n) {
  if (k < 1) throw DomainError("forest size law needs k >= 1 trees");
  if (n < k) return 0.0;
  const WalkPmf walk = exact_walk_pmf(model, n, -static_cast<long>(k));
  return static_cast<double>(k) / static_cast<double>(n) * walk.at(-k);
}

double edge_count_pmf(const OffspringModel& model, int m) { return forest_size_pmf(model, 1, m + 1); }

}  // namespace cuttree
