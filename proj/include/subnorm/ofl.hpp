#pragma once

// Online facility location with a monotone-norm connection objective.
// The randomized online rule opens a facility at the current request with
// probability delta_i / f, where delta_i is the marginal increase of the
// norm over *auxiliary* connection distances: the true assignment distance
// capped so that delta_i never exceeds the opening cost. The naive variant
// uses true distances with no cap and is the baseline it is measured
// against.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "subnorm/common.hpp"
#include "subnorm/metric.hpp"
#include "subnorm/norms.hpp"

namespace subnorm {

constexpr int kBisectMaxIter = 200;

struct OflInstance {
  MetricSpace metric;
  std::vector<int> requests;   // point indices, arrival order
  bool uniform_cost = true;
  double uniform_f = 1.0;
  std::vector<double> per_point_cost;  // size = metric.size() when non-uniform
  std::vector<int> openable;           // point indices allowed to host a facility
  NormOracle norm;                     // dimension = |requests|

  int num_requests() const { return static_cast<int>(requests.size()); }

  double cost_at(int point) const {
    return uniform_cost ? uniform_f : per_point_cost[static_cast<std::size_t>(point)];
  }

  bool is_openable(int point) const {
    return std::binary_search(openable.begin(), openable.end(), point);
  }

  void validate() {
    const int P = metric.size();
    if (requests.empty()) throw ValidationError("ofl instance: no requests");
    for (int r : requests)
      if (r < 0 || r >= P) throw ValidationError("ofl instance: request index out of range");
    if (!norm.valid() || norm.dim() != num_requests())
      throw ValidationError("ofl instance: norm dimension must equal request count");
    if (openable.empty()) throw ValidationError("ofl instance: nothing is openable");
    std::sort(openable.begin(), openable.end());
    openable.erase(std::unique(openable.begin(), openable.end()), openable.end());
    for (int q : openable)
      if (q < 0 || q >= P) throw ValidationError("ofl instance: openable index out of range");
    if (uniform_cost) {
      if (!(uniform_f > 0.0)) throw ValidationError("ofl instance: uniform cost must be > 0");
    } else {
      if (static_cast<int>(per_point_cost.size()) != P)
        throw ValidationError("ofl instance: per-point cost size mismatch");
      for (int q : openable)
        if (!(per_point_cost[static_cast<std::size_t>(q)] > 0.0))
          throw ValidationError("ofl instance: openable point with cost <= 0");
    }
  }

  // The online rules may only ever construct at (or assign via) openable
  // locations that include every request point.
  void require_requests_openable() const {
    for (int r : requests)
      if (!is_openable(r))
        throw ValidationError("ofl instance: request point " + std::to_string(r) +
                              " is not openable");
  }
};

struct OflStep {
  int request = -1;
  std::optional<int> opened;      // facility constructed this step
  int level = 0;                  // sampled cost level j (uniform: 1 iff opened)
  double d = 0.0;                 // true connection distance d(x_i, F_i)
  double dhat = 0.0;              // auxiliary distance fed into the marginals
  std::vector<double> delta;      // delta^(j), j = 0..m (uniform: single entry)
  std::vector<double> p;          // p^(0..m)
  bool tau_capped = false;
  double tau = 0.0;               // meaningful only when tau_capped
  int facilities_after = 0;
};

struct OflTrace {
  std::vector<OflStep> steps;
  double opening_cost = 0.0;
  double norm_d = 0.0;
  double norm_dhat = 0.0;
  bool costs_rounded = false;  // non-uniform runs charge power-of-two costs

  double total_cost() const { return opening_cost + norm_d; }
};

namespace detail {

inline std::pair<double, int> dist_to_set(const MetricSpace& metric, int x,
                                          const std::vector<int>& pts) {
  double best = kInf;
  int arg = -1;
  for (int q : pts) {  // kept sorted: ties resolve to the lowest index
    double d = metric.dist(x, q);
    if (d < best) {
      best = d;
      arg = q;
    }
  }
  return {best, arg};
}

inline void insert_sorted(std::vector<int>& v, int x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

}  // namespace detail

// Largest z in [0, upper] whose marginal over the auxiliary prefix stays at
// most f, i.e. min(upper, max{z >= 0 : ||prefix with z at i|| - ||prefix|| <= f}).
// `prefix` must be zero from position i on; `base_value` = ||prefix||.
inline double cap_root(const NormOracle& norm, Vec& prefix, int i, double f,
                       double upper, double base_value) {
  if (!(f > 0.0)) throw ValidationError("cap_root: f must be > 0");
  double marg_upper = std::isinf(upper)
                          ? kInf
                          : marginal_raw(norm, prefix, i, upper, base_value);
  if (marg_upper < -kAbsTol)
    throw ValidationError("cap_root: negative marginal; norm is not monotone");
  if (marg_upper <= f) return upper;  // cap inactive

  double lo = 0.0;
  double hi = std::isinf(upper) ? 1.0 : upper;
  if (std::isinf(upper)) {
    int guard = 0;
    while (marginal_raw(norm, prefix, i, hi, base_value) < f) {
      hi *= 2.0;
      if (++guard > kBisectMaxIter)
        throw ValidationError("cap_root: marginal never reaches f (degenerate norm)");
    }
  }
  for (int it = 0; it < kBisectMaxIter; ++it) {
    if (hi - lo <= kAbsTol + kRelTol * hi) break;
    double mid = 0.5 * (lo + hi);
    double m = marginal_raw(norm, prefix, i, mid, base_value);
    if (m < -kAbsTol)
      throw ValidationError("cap_root: negative marginal; norm is not monotone");
    if (m <= f)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

namespace detail {

// Shared skeleton of the two uniform-cost rules; `capped` selects auxiliary
// (capped) vs true (uncapped) distances for the marginals.
inline OflTrace run_uniform_impl(const OflInstance& inst, std::uint64_t seed, bool capped) {
  const int n = inst.num_requests();
  const double f = inst.uniform_f;
  CounterRng rng(seed);

  OflTrace trace;
  trace.steps.reserve(static_cast<std::size_t>(n));
  Vec aux(static_cast<std::size_t>(n), 0.0);   // capped: dhat prefix; naive: true d prefix
  Vec dvec(static_cast<std::size_t>(n), 0.0);
  double base_val = 0.0;
  std::vector<int> facilities;

  for (int i = 0; i < n; ++i) {
    const int x = inst.requests[i];
    auto [upper, near] = dist_to_set(inst.metric, x, facilities);

    OflStep step;
    step.request = x;

    double aux_i = 0.0, delta = 0.0, prob = 0.0;
    if (upper == 0.0) {
      // request collocated with an open facility: zero marginal, never opens
    } else if (capped) {
      double z = cap_root(inst.norm, aux, i, f, upper, base_val);
      if (z < upper) {  // cap active: delta = f, deterministic construction
        aux_i = z;
        step.tau_capped = true;
        step.tau = z;
        prob = 1.0;
      } else {
        aux_i = upper;
        prob = marginal_raw(inst.norm, aux, i, aux_i, base_val) / f;
      }
    } else {
      aux_i = std::isinf(upper) ? 0.0 : upper;
      double m = std::isinf(upper) ? kInf : marginal_raw(inst.norm, aux, i, upper, base_val);
      prob = std::min(1.0, m / f);
      if (std::isinf(upper)) {
        prob = 1.0;
        aux_i = 0.0;  // placeholder; overwritten with the true distance below
      }
    }
    prob = std::clamp(prob, 0.0, 1.0);

    const bool open = rng.uniform(0, static_cast<std::uint64_t>(i)) < prob;
    if (open) {
      detail::insert_sorted(facilities, x);
      trace.opening_cost += f;
      step.opened = x;
      step.level = 1;
      dvec[i] = 0.0;
    } else {
      if (facilities.empty())
        throw ValidationError("ofl: no facility after first step (prob was not 1)");
      dvec[i] = upper;
    }

    if (!capped) aux_i = dvec[i];  // naive marginals track the true vector
    aux[i] = aux_i;
    double new_base = inst.norm.value_raw(aux);
    delta = new_base - base_val;
    base_val = new_base;

    step.d = dvec[i];
    step.dhat = capped ? aux_i : (open ? 0.0 : upper);
    step.delta = {delta};
    step.p = {1.0 - prob, prob};
    step.facilities_after = static_cast<int>(facilities.size());
    trace.steps.push_back(std::move(step));
  }

  trace.norm_d = inst.norm.value_raw(dvec);
  trace.norm_dhat = inst.norm.value_raw(aux);
  return trace;
}

}  // namespace detail

// Auxiliary-cost rule: marginals over capped distances, construction
// probability delta_i / f (never above 1 by the cap).
inline OflTrace run_uniform(const OflInstance& inst, std::uint64_t seed) {
  if (!inst.uniform_cost)
    throw ValidationError("run_uniform: instance has non-uniform costs");
  inst.require_requests_openable();
  return detail::run_uniform_impl(inst, seed, /*capped=*/true);
}

// Meyerson's rule lifted verbatim: marginals over true distances, probability
// min(1, delta_i / f). Linear-cost behavior on max-like norms.
inline OflTrace run_naive_uniform(const OflInstance& inst, std::uint64_t seed) {
  if (!inst.uniform_cost)
    throw ValidationError("run_naive_uniform: instance has non-uniform costs");
  inst.require_requests_openable();
  return detail::run_uniform_impl(inst, seed, /*capped=*/false);
}

}  // namespace subnorm
