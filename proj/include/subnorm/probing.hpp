#pragma once

// Exact adaptive and non-adaptive optima for stochastic probing on desk-scale
// instances. The adaptive optimum is a memoized DP over (probed set, realized
// outcomes); the non-adaptive optimum scans feasible sets and enumerates the
// product distribution. Both are exact, so adaptivity gaps are measured, not
// estimated.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "subnorm/common.hpp"
#include "subnorm/norms.hpp"

namespace subnorm {

struct DiscreteDistribution {
  Vec support;   // non-negative values
  Vec probs;     // same length, sums to 1

  void validate() const {
    if (support.empty() || support.size() != probs.size())
      throw ValidationError("distribution: support/probs size mismatch");
    check_nonneg(support, "distribution support");
    double s = 0.0;
    for (double p : probs) {
      if (!(p >= 0.0)) throw ValidationError("distribution: negative probability");
      s += p;
    }
    if (std::fabs(s - 1.0) > 1e-12)
      throw ValidationError("distribution: probabilities must sum to 1");
  }

  double mean() const {
    double s = 0.0;
    for (std::size_t k = 0; k < support.size(); ++k) s += support[k] * probs[k];
    return s;
  }
};

class FeasibleFamily {
 public:
  enum class Kind { Explicit, Cardinality, Matroid };

  static FeasibleFamily explicit_sets(int n, std::vector<std::uint32_t> sets) {
    FeasibleFamily f;
    f.kind_ = Kind::Explicit;
    f.n_ = n;
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
    f.sets_ = std::move(sets);
    f.validate();
    return f;
  }

  static FeasibleFamily cardinality(int n, int k) {
    FeasibleFamily f;
    f.kind_ = Kind::Cardinality;
    f.n_ = n;
    f.k_ = k;
    f.validate();
    return f;
  }

  static FeasibleFamily matroid(Matroid m) {
    FeasibleFamily f;
    f.kind_ = Kind::Matroid;
    f.n_ = m.n;
    f.matroid_ = std::move(m);
    f.validate();
    return f;
  }

  Kind kind() const { return kind_; }
  int ground_size() const { return n_; }
  int cardinality_k() const { return k_; }
  const std::vector<std::uint32_t>& sets() const { return sets_; }

  bool member(std::uint32_t s) const {
    switch (kind_) {
      case Kind::Explicit:
        return std::binary_search(sets_.begin(), sets_.end(), s);
      case Kind::Cardinality:
        return std::popcount(s) <= k_;
      case Kind::Matroid:
        return matroid_.indep(s);
    }
    return false;
  }

  // every feasible mask, ascending
  std::vector<std::uint32_t> members() const {
    if (kind_ == Kind::Explicit) return sets_;
    std::vector<std::uint32_t> out;
    const std::uint32_t lim = 1u << n_;
    for (std::uint32_t s = 0; s < lim; ++s)
      if (member(s)) out.push_back(s);
    return out;
  }

  void validate() const {
    if (n_ < 1 || n_ > kMaxMaskDim) throw ValidationError("family: bad ground size");
    switch (kind_) {
      case Kind::Explicit: {
        // exhaustive downward-closure check: removing any element of a member
        // must stay a member
        if (sets_.empty() || sets_[0] != 0)
          throw ValidationError("family: must contain the empty set");
        for (std::uint32_t s : sets_) {
          if (s >= (1u << n_)) throw ValidationError("family: set out of range");
          for (int i = 0; i < n_; ++i)
            if ((s & (1u << i)) && !member(s & ~(1u << i)))
              throw ValidationError("family: not downward closed");
        }
        break;
      }
      case Kind::Cardinality:
        if (k_ < 0 || k_ > n_) throw ValidationError("family: bad cardinality bound");
        break;
      case Kind::Matroid:
        if (!matroid_.indep || !matroid_.indep(0))
          throw ValidationError("family: matroid must accept the empty set");
        break;
    }
  }

 private:
  Kind kind_ = Kind::Cardinality;
  int n_ = 0;
  int k_ = 0;
  std::vector<std::uint32_t> sets_;
  Matroid matroid_;
};

struct ProbingInstance {
  std::vector<DiscreteDistribution> dists;
  FeasibleFamily family;
  NormOracle objective;

  int n() const { return static_cast<int>(dists.size()); }

  void validate() const {
    if (dists.empty()) throw ValidationError("probing: no variables");
    for (const auto& d : dists) d.validate();
    if (family.ground_size() != n())
      throw ValidationError("probing: family ground size mismatch");
    if (!objective.valid() || objective.dim() != n())
      throw ValidationError("probing: objective dimension mismatch");
  }

  // DP/product-state count used for the budget guard
  double state_count() const {
    double prod = 1.0;
    for (const auto& d : dists) prod *= static_cast<double>(d.support.size());
    return prod * std::ldexp(1.0, n());
  }
};

constexpr double kProbingBudget = 8e6;

// Decision tree: internal nodes probe an element and branch per support
// outcome; probe = -1 marks a stop leaf.
struct PolicyNode {
  int probe = -1;
  std::vector<int> children;
};

struct Policy {
  std::vector<PolicyNode> nodes;  // nodes[0] is the root
  double value = 0.0;
};

struct AdaptiveResult {
  Policy policy;
  double value = 0.0;
};

namespace detail {

struct ProbingDp {
  const ProbingInstance& inst;
  int n;
  std::vector<std::uint64_t> stride;
  std::vector<double> memo;  // NaN = unset
  Vec realized;

  explicit ProbingDp(const ProbingInstance& inst_) : inst(inst_), n(inst_.n()) {
    double states = inst.state_count();
    if (states > kProbingBudget)
      throw BudgetError("probing: state space exceeds budget (" +
                        std::to_string(states) + " states)");
    stride.assign(static_cast<std::size_t>(n) + 1, 1);
    for (int i = 0; i < n; ++i)
      stride[static_cast<std::size_t>(i) + 1] =
          stride[static_cast<std::size_t>(i)] * inst.dists[static_cast<std::size_t>(i)].support.size();
    std::uint64_t total = stride[static_cast<std::size_t>(n)] << n;
    memo.assign(total, std::numeric_limits<double>::quiet_NaN());
    realized.assign(static_cast<std::size_t>(n), 0.0);
  }

  std::uint64_t key(std::uint32_t mask, std::uint64_t code) const {
    return (static_cast<std::uint64_t>(mask) * stride[static_cast<std::size_t>(n)]) + code;
  }

  double solve(std::uint32_t mask, std::uint64_t code) {
    double& slot = memo[key(mask, code)];
    if (!std::isnan(slot)) return slot;
    double best = inst.objective.value_raw(realized);  // stopping is always allowed
    for (int i = 0; i < n; ++i) {
      std::uint32_t bit = 1u << i;
      if (mask & bit) continue;
      if (!inst.family.member(mask | bit)) continue;
      const auto& di = inst.dists[static_cast<std::size_t>(i)];
      KahanSum expect;
      for (std::size_t k = 0; k < di.support.size(); ++k) {
        if (di.probs[k] == 0.0) continue;
        realized[static_cast<std::size_t>(i)] = di.support[k];
        expect.add(di.probs[k] *
                   solve(mask | bit, code + k * stride[static_cast<std::size_t>(i)]));
      }
      realized[static_cast<std::size_t>(i)] = 0.0;
      best = std::max(best, expect.value());
    }
    slot = best;
    return best;
  }

  // Re-walks the solved DP and materializes the argmax decision tree.
  // Stop is preferred on exact ties, then the lowest-index probe.
  int extract(std::uint32_t mask, std::uint64_t code, Policy& out, std::size_t node_budget) {
    if (out.nodes.size() >= node_budget)
      throw BudgetError("probing: policy tree exceeds node budget");
    double best = memo[key(mask, code)];
    double stop = inst.objective.value_raw(realized);
    int id = static_cast<int>(out.nodes.size());
    out.nodes.emplace_back();
    if (best <= stop) return id;  // leaf
    for (int i = 0; i < n; ++i) {
      std::uint32_t bit = 1u << i;
      if (mask & bit) continue;
      if (!inst.family.member(mask | bit)) continue;
      const auto& di = inst.dists[static_cast<std::size_t>(i)];
      KahanSum expect;
      for (std::size_t k = 0; k < di.support.size(); ++k) {
        if (di.probs[k] == 0.0) continue;
        realized[static_cast<std::size_t>(i)] = di.support[k];
        expect.add(di.probs[k] *
                   solve(mask | bit, code + k * stride[static_cast<std::size_t>(i)]));
      }
      realized[static_cast<std::size_t>(i)] = 0.0;
      if (expect.value() == best) {
        out.nodes[static_cast<std::size_t>(id)].probe = i;
        out.nodes[static_cast<std::size_t>(id)].children.assign(di.support.size(), -1);
        for (std::size_t k = 0; k < di.support.size(); ++k) {
          realized[static_cast<std::size_t>(i)] = di.support[k];
          // recursion reallocates out.nodes: index after the call returns
          int child = extract(mask | bit, code + k * stride[static_cast<std::size_t>(i)],
                              out, node_budget);
          out.nodes[static_cast<std::size_t>(id)].children[k] = child;
          realized[static_cast<std::size_t>(i)] = 0.0;
        }
        return id;
      }
    }
    return id;  // numerical corner: nothing matched best, stop
  }
};

}  // namespace detail

inline AdaptiveResult adaptive_opt(const ProbingInstance& inst, bool extract_policy = true,
                                   std::size_t node_budget = 1u << 20) {
  inst.validate();
  detail::ProbingDp dp(inst);
  AdaptiveResult out;
  out.value = dp.solve(0, 0);
  out.policy.value = out.value;
  if (extract_policy) dp.extract(0, 0, out.policy, node_budget);
  return out;
}

struct NonAdaptiveResult {
  std::uint32_t set = 0;
  double value = 0.0;
};

// E[f(X_S)] by enumerating the product distribution over S.
inline double expected_value_on_set(const ProbingInstance& inst, std::uint32_t s) {
  std::vector<int> elems;
  double prod = 1.0;
  for (int i = 0; i < inst.n(); ++i)
    if (s & (1u << i)) {
      elems.push_back(i);
      prod *= static_cast<double>(inst.dists[static_cast<std::size_t>(i)].support.size());
    }
  if (prod > kProbingBudget)
    throw BudgetError("probing: product enumeration exceeds budget");
  Vec x(static_cast<std::size_t>(inst.n()), 0.0);
  KahanSum total;
  std::vector<std::size_t> digit(elems.size(), 0);
  while (true) {
    double p = 1.0;
    for (std::size_t t = 0; t < elems.size(); ++t) {
      const auto& d = inst.dists[static_cast<std::size_t>(elems[t])];
      p *= d.probs[digit[t]];
      x[static_cast<std::size_t>(elems[t])] = d.support[digit[t]];
    }
    if (p > 0.0) total.add(p * inst.objective.value_raw(x));
    std::size_t t = 0;
    for (; t < elems.size(); ++t) {
      if (++digit[t] < inst.dists[static_cast<std::size_t>(elems[t])].support.size()) break;
      digit[t] = 0;
    }
    if (t == elems.size()) break;
  }
  return total.value();
}

inline NonAdaptiveResult nonadaptive_opt(const ProbingInstance& inst) {
  inst.validate();
  NonAdaptiveResult best;
  best.value = -1.0;
  for (std::uint32_t s : inst.family.members()) {
    double v = expected_value_on_set(inst, s);
    if (v > best.value) {
      best.value = v;
      best.set = s;
    }
  }
  if (best.value < 0.0) throw ValidationError("probing: family has no feasible set");
  return best;
}

struct GapResult {
  double adaptive = 0.0;
  double nonadaptive = 0.0;
  double ratio = 1.0;
};

inline GapResult adaptivity_gap(const ProbingInstance& inst) {
  GapResult g;
  g.adaptive = adaptive_opt(inst, /*extract_policy=*/false).value;
  g.nonadaptive = nonadaptive_opt(inst).value;
  if (g.adaptive < g.nonadaptive - kAbsTol - kRelTol * g.nonadaptive)
    throw ValidationError("probing: adaptive optimum below non-adaptive (impossible)");
  if (g.nonadaptive <= 0.0) {
    if (g.adaptive > kAbsTol)
      throw ValidationError("probing: NA = 0 with Adap > 0 (impossible for monotone f)");
    g.ratio = 1.0;
  } else {
    g.ratio = g.adaptive / g.nonadaptive;
  }
  return g;
}

struct PathSample {
  std::uint32_t set = 0;
  double value = 0.0;
};

// Runs the policy on one fresh sample to pick the probe set, then scores an
// independent sample restricted to that set; averaging over seeds lower-bounds
// the non-adaptive value of the policy's set distribution.
inline PathSample sample_path_strategy(const Policy& policy, const ProbingInstance& inst,
                                       std::uint64_t seed) {
  CounterRng rng(seed);
  PathSample out;
  std::uint64_t ctr = 0;
  int node = 0;
  while (policy.nodes[static_cast<std::size_t>(node)].probe >= 0) {
    const auto& nd = policy.nodes[static_cast<std::size_t>(node)];
    const auto& d = inst.dists[static_cast<std::size_t>(nd.probe)];
    double u = rng.uniform(1, ctr++);
    std::size_t k = 0;
    double acc = 0.0;
    for (; k + 1 < d.probs.size(); ++k) {
      acc += d.probs[k];
      if (u < acc) break;
    }
    out.set |= (1u << nd.probe);
    node = nd.children[k];
  }
  Vec x(static_cast<std::size_t>(inst.n()), 0.0);
  for (int i = 0; i < inst.n(); ++i) {
    if (!(out.set & (1u << i))) continue;
    const auto& d = inst.dists[static_cast<std::size_t>(i)];
    double u = rng.uniform(2, static_cast<std::uint64_t>(i));
    std::size_t k = 0;
    double acc = 0.0;
    for (; k + 1 < d.probs.size(); ++k) {
      acc += d.probs[k];
      if (u < acc) break;
    }
    x[static_cast<std::size_t>(i)] = d.support[k];
  }
  out.value = inst.objective.value_raw(x);
  return out;
}

}  // namespace subnorm
