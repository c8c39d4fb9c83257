#pragma once

// Seeded instance generators: the star metric, the adversarial tree, random
// Euclidean facility-location instances, and random probing instances. All
// are pure functions of their parameters and seed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "subnorm/common.hpp"
#include "subnorm/metric.hpp"
#include "subnorm/norms.hpp"
#include "subnorm/ofl.hpp"
#include "subnorm/probing.hpp"

namespace subnorm {

// Star with a center and n unit-length spokes; requests are the n leaves in
// index order, every point openable at uniform cost f.
inline OflInstance gen_star(int n, double f, NormOracle norm) {
  if (n < 1) throw ValidationError("gen_star: need n >= 1");
  if (norm.dim() != n) throw ValidationError("gen_star: norm dimension must be n");
  const int P = n + 1;  // point 0 = center, 1..n = leaves
  std::vector<std::vector<double>> d(static_cast<std::size_t>(P),
                                     std::vector<double>(static_cast<std::size_t>(P), 2.0));
  for (int i = 0; i < P; ++i) {
    d[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 0.0;
    if (i > 0) {
      d[0][static_cast<std::size_t>(i)] = 1.0;
      d[static_cast<std::size_t>(i)][0] = 1.0;
    }
  }
  OflInstance inst;
  inst.metric = MetricSpace::from_matrix(std::move(d));
  for (int i = 1; i <= n; ++i) inst.requests.push_back(i);
  for (int i = 0; i < P; ++i) inst.openable.push_back(i);
  inst.uniform_cost = true;
  inst.uniform_f = f;
  inst.norm = std::move(norm);
  inst.validate();
  return inst;
}

// Adversarial complete N-ary tree of height k (k the largest integer with
// k^k <= sigma): edges from depth j have length k^-j, uniform opening cost k,
// and demands walk a random root-to-leaf path with multiplicities m_j - m_{j-1},
// where m_j is the least prefix size whose indicator norm reaches k^j.
struct TreeLowerBoundInstance {
  OflInstance instance;
  int k = 0;
  int arity = 0;
  std::vector<int> path;    // node ids v_0 ... v_k
  std::vector<int> m;       // m_0 ... m_k
  double sigma = 0.0;
};

struct TreePlan {
  int k = 0;            // tree height: largest k with k^k <= sigma
  std::vector<int> m;   // m_j: least prefix whose indicator value reaches k^j
  double sigma = 0.0;
  int demand_count() const { return m.back(); }
};

inline TreePlan tree_plan(const NormOracle& norm) {
  const int n = norm.dim();
  TreePlan plan;
  plan.sigma = sigma_ratio(norm);
  if (plan.sigma < 4.0)
    throw ValidationError("tree plan: sigma < 4, tree height would be < 2");
  int k = 2;
  while (std::pow(static_cast<double>(k + 1), k + 1) <= plan.sigma * (1.0 + 1e-12)) ++k;
  plan.k = k;

  Vec buf(static_cast<std::size_t>(n), 0.0);
  double max_unit = 0.0;
  for (int i = 0; i < n; ++i) {
    buf[static_cast<std::size_t>(i)] = 1.0;
    max_unit = std::max(max_unit, norm.value_raw(buf));
    buf[static_cast<std::size_t>(i)] = 0.0;
  }
  auto indicator_value = [&](int mcount) {
    for (int i = 0; i < n; ++i) buf[static_cast<std::size_t>(i)] = i < mcount ? 1.0 : 0.0;
    return norm.value_raw(buf);
  };

  plan.m.assign(static_cast<std::size_t>(k) + 1, 0);
  for (int j = 0; j <= k; ++j) {
    double threshold = std::pow(static_cast<double>(k), j) * max_unit;
    int lo = 1, hi = n;
    while (lo < hi) {
      int mid = lo + (hi - lo) / 2;
      if (indicator_value(mid) >= threshold * (1.0 - 1e-12))
        hi = mid;
      else
        lo = mid + 1;
    }
    if (indicator_value(lo) < threshold * (1.0 - 1e-12))
      throw ValidationError("tree plan: norm never reaches level " + std::to_string(j));
    plan.m[static_cast<std::size_t>(j)] = lo;
  }
  return plan;
}

inline TreeLowerBoundInstance gen_lower_bound_tree(const NormOracle& norm, int arity,
                                                   std::uint64_t seed) {
  if (arity < 2) throw ValidationError("gen_lower_bound_tree: arity must be >= 2");
  TreePlan plan = tree_plan(norm);
  const int k = plan.k;
  const std::vector<int>& m = plan.m;

  // materialize the complete tree, breadth-first ids
  std::vector<int> parent{-1};
  std::vector<double> edge{0.0};
  std::vector<int> level_start{0};
  int first = 0, count = 1;
  for (int depth = 0; depth < k; ++depth) {
    int next_first = static_cast<int>(parent.size());
    for (int v = first; v < first + count; ++v)
      for (int c = 0; c < arity; ++c) {
        parent.push_back(v);
        edge.push_back(std::pow(static_cast<double>(k), -depth));
      }
    level_start.push_back(next_first);
    first = next_first;
    count *= arity;
  }

  // random root-to-leaf path
  Rng rng(seed);
  std::vector<int> path{0};
  int node = 0;
  for (int depth = 0; depth < k; ++depth) {
    int child_block = level_start[static_cast<std::size_t>(depth) + 1];
    int offset_in_level = node - level_start[static_cast<std::size_t>(depth)];
    node = child_block + offset_in_level * arity + rng.below(arity);
    path.push_back(node);
  }

  TreeLowerBoundInstance out;
  out.k = k;
  out.arity = arity;
  out.path = path;
  out.m = m;
  out.sigma = plan.sigma;
  out.instance.metric = MetricSpace::from_tree(std::move(parent), std::move(edge));
  for (int j = 0; j <= k; ++j) {
    int copies = j == 0 ? m[0] : m[static_cast<std::size_t>(j)] - m[static_cast<std::size_t>(j) - 1];
    for (int c = 0; c < copies; ++c) out.instance.requests.push_back(path[static_cast<std::size_t>(j)]);
  }
  const int total = m[static_cast<std::size_t>(k)];
  if (static_cast<int>(out.instance.requests.size()) != total)
    throw ValidationError("gen_lower_bound_tree: multiplicity bookkeeping is off");
  if (total != norm.dim())
    throw ValidationError(
        "gen_lower_bound_tree: norm dimension " + std::to_string(norm.dim()) +
        " does not match demand count " + std::to_string(total) +
        "; re-dimension the norm to the demand count");
  for (int v = 0; v < out.instance.metric.size(); ++v) out.instance.openable.push_back(v);
  out.instance.uniform_cost = true;
  out.instance.uniform_f = static_cast<double>(k);
  out.instance.norm = norm;
  out.instance.validate();
  return out;
}

// nPoints uniform points in the unit cube, nRequests requests drawn from them
// with replacement, uniform opening cost f.
inline OflInstance gen_random_euclidean(int nRequests, int nPoints, int dim, double f,
                                        std::uint64_t seed) {
  if (nRequests < 1 || nPoints < 1 || dim < 1)
    throw ValidationError("gen_random_euclidean: bad shape");
  Rng rng(seed);
  std::vector<Vec> pts(static_cast<std::size_t>(nPoints), Vec(static_cast<std::size_t>(dim)));
  for (auto& p : pts)
    for (double& c : p) c = rng.uniform();
  OflInstance inst;
  inst.metric = MetricSpace::from_points(std::move(pts));
  for (int i = 0; i < nRequests; ++i) inst.requests.push_back(rng.below(nPoints));
  for (int q = 0; q < nPoints; ++q) inst.openable.push_back(q);
  inst.uniform_cost = true;
  inst.uniform_f = f;
  inst.norm = lp_norm(1.0, nRequests);  // placeholder; callers set their norm
  inst.validate();
  return inst;
}

// Random probing instance: two- or three-point supports in [0, 1], a random
// downward-closed family (closure of a random antichain).
inline ProbingInstance gen_random_probing(int n, int supportSize, std::uint64_t seed,
                                          NormOracle objective) {
  if (n < 1 || n > 16) throw ValidationError("gen_random_probing: need 1 <= n <= 16");
  if (supportSize < 2 || supportSize > 3)
    throw ValidationError("gen_random_probing: support size must be 2 or 3");
  if (objective.dim() != n)
    throw ValidationError("gen_random_probing: objective dimension mismatch");
  Rng rng(seed);
  ProbingInstance inst;
  for (int i = 0; i < n; ++i) {
    DiscreteDistribution d;
    for (int k = 0; k < supportSize; ++k) d.support.push_back(rng.uniform());
    std::sort(d.support.begin(), d.support.end());
    double total = 0.0;
    for (int k = 0; k < supportSize; ++k) {
      d.probs.push_back(0.05 + rng.uniform());
      total += d.probs.back();
    }
    for (double& p : d.probs) p /= total;
    // renormalization residue goes to the last outcome
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < d.probs.size(); ++k) s += d.probs[k];
    d.probs.back() = 1.0 - s;
    inst.dists.push_back(std::move(d));
  }
  std::vector<std::uint32_t> sets{0};
  int generators = 1 + rng.below(n);
  for (int g = 0; g < generators; ++g) {
    std::uint32_t s = 0;
    while (s == 0)  // at least one element probe-able per generator set
      s = static_cast<std::uint32_t>(rng.bits()) & ((1u << n) - 1u);
    for (std::uint32_t sub = s;; sub = (sub - 1) & s) {
      sets.push_back(sub);
      if (sub == 0) break;
    }
  }
  inst.family = FeasibleFamily::explicit_sets(n, std::move(sets));
  inst.objective = std::move(objective);
  inst.validate();
  return inst;
}

}  // namespace subnorm
