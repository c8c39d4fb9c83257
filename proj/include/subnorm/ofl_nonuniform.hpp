#pragma once

// Non-uniform opening costs. Costs are rounded down to powers of two and
// grouped into levels 0 = f^(0) < f^(1) < ... < f^(m). At each step the rule
// samples a single cost level j from probabilities
//   p^(j) = (delta^(j-1) - delta^(j)) / f^(j),
//   delta^(j) = (dhat^(j) / dhat^(0)) * (||dhat-prefix with dhat^(0)|| - ||dhat-prefix||),
//   dhat^(j) = min(d(x_i, W^(j)), tau),
// where W^(j) is everything open or openable at cost <= f^(j) and tau is the
// largest cap keeping sum_j p^(j) <= 1 (uncapped when the constraint is
// already slack). The request is then assigned to the nearest location of
// W^(j), constructing there if needed.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "subnorm/common.hpp"
#include "subnorm/ofl.hpp"

namespace subnorm {

// Largest power of two <= f (exact for f already a power of two).
inline double round_down_pow2(double f) {
  if (!(f > 0.0)) throw ValidationError("cost rounding: cost must be > 0");
  int e = 0;
  double mant = std::frexp(f, &e);  // f = mant * 2^e, mant in [0.5, 1)
  return mant == 0.5 ? f : std::ldexp(1.0, e - 1);
}

struct CostLevels {
  std::vector<double> level_cost;  // level_cost[0] = 0 < f^(1) < ... < f^(m)
  std::vector<int> point_level;    // per metric point; -1 when not openable
  int m() const { return static_cast<int>(level_cost.size()) - 1; }
};

inline CostLevels cost_levels(const OflInstance& inst) {
  CostLevels out;
  out.level_cost.push_back(0.0);
  std::vector<double> rounded(static_cast<std::size_t>(inst.metric.size()), -1.0);
  std::vector<double> distinct;
  for (int q : inst.openable) {
    double r = round_down_pow2(inst.cost_at(q));
    rounded[static_cast<std::size_t>(q)] = r;
    distinct.push_back(r);
  }
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  out.level_cost.insert(out.level_cost.end(), distinct.begin(), distinct.end());
  out.point_level.assign(static_cast<std::size_t>(inst.metric.size()), -1);
  for (int q : inst.openable) {
    auto it = std::lower_bound(distinct.begin(), distinct.end(),
                               rounded[static_cast<std::size_t>(q)]);
    out.point_level[static_cast<std::size_t>(q)] =
        static_cast<int>(it - distinct.begin()) + 1;
  }
  return out;
}

struct NonUniformStepState {
  const NormOracle* norm = nullptr;
  Vec* prefix = nullptr;        // auxiliary dhat^(0) prefix, zero from position i on
  double base_value = 0.0;      // ||prefix||
  int i = 0;                    // arrival index
  std::vector<double> w;        // w[j] = d(x_i, W^(j)), j = 0..m, non-increasing
  std::vector<double> level_cost;  // f^(0..m)
};

struct TauResult {
  bool capped = false;
  double tau = 0.0;              // meaningful only when capped
  std::vector<double> dhat;      // dhat^(j)
  std::vector<double> delta;     // delta^(j)
  std::vector<double> p;         // p^(0..m), sums to 1
};

namespace detail {

inline double probability_mass(const NonUniformStepState& st, double tau) {
  const int m = static_cast<int>(st.level_cost.size()) - 1;
  double d0 = std::min(st.w[0], tau);
  if (!(d0 > 0.0)) return 0.0;
  double grow = marginal_raw(*st.norm, *st.prefix, st.i, d0, st.base_value);
  double total = 0.0;
  double prev = d0;
  for (int j = 1; j <= m; ++j) {
    double dj = std::min(st.w[j], tau);
    total += (prev - dj) / st.level_cost[j];
    prev = dj;
  }
  return (grow / d0) * total;
}

}  // namespace detail

inline TauResult tau_solve(const NonUniformStepState& st) {
  const int m = static_cast<int>(st.level_cost.size()) - 1;
  TauResult out;
  out.dhat.assign(static_cast<std::size_t>(m) + 1, 0.0);
  out.delta.assign(static_cast<std::size_t>(m) + 1, 0.0);
  out.p.assign(static_cast<std::size_t>(m) + 1, 0.0);

  // degenerate step: request collocated with an open facility
  if (st.w[0] == 0.0) {
    out.p[0] = 1.0;
    return out;
  }

  double tau = kInf;  // uncapped sentinel held as a flag, not used in arithmetic
  bool capped = false;
  if (std::isinf(st.w[0])) {
    // no facility yet: mass grows without bound, the cap must bind
    double hi = 1.0;
    for (int j = 1; j <= m; ++j)
      if (!std::isinf(st.w[j])) hi = std::max(hi, 2.0 * st.w[j]);
    double prev_mass = detail::probability_mass(st, hi);
    int guard = 0;
    while (prev_mass < 1.0) {
      hi *= 2.0;
      double mass = detail::probability_mass(st, hi);
      if (mass < prev_mass - kAbsTol - kRelTol * prev_mass)
        throw ValidationError("tau_solve: probability mass decreased while growing tau");
      prev_mass = mass;
      if (++guard > kBisectMaxIter)
        throw ValidationError("tau_solve: probability mass never reaches 1");
    }
    capped = true;
    double lo = 0.0;
    for (int it = 0; it < kBisectMaxIter; ++it) {
      if (hi - lo <= kAbsTol + kRelTol * hi) break;
      double mid = 0.5 * (lo + hi);
      if (detail::probability_mass(st, mid) <= 1.0)
        lo = mid;
      else
        hi = mid;
    }
    tau = lo;
  } else if (detail::probability_mass(st, st.w[0]) > 1.0) {
    if (detail::probability_mass(st, 0.0) > 1.0)
      throw ValidationError("tau_solve: constraint violated at tau = 0; non-monotone mass");
    capped = true;
    double lo = 0.0, hi = st.w[0];
    for (int it = 0; it < kBisectMaxIter; ++it) {
      if (hi - lo <= kAbsTol + kRelTol * hi) break;
      double mid = 0.5 * (lo + hi);
      if (detail::probability_mass(st, mid) <= 1.0)
        lo = mid;
      else
        hi = mid;
    }
    tau = lo;
  }

  double d0 = capped ? std::min(st.w[0], tau) : st.w[0];
  for (int j = 0; j <= m; ++j)
    out.dhat[j] = capped ? std::min(st.w[j], tau) : st.w[j];
  double grow =
      d0 > 0.0 ? marginal_raw(*st.norm, *st.prefix, st.i, d0, st.base_value) : 0.0;
  for (int j = 0; j <= m; ++j)
    out.delta[j] = d0 > 0.0 ? (out.dhat[j] / d0) * grow : 0.0;

  double mass = 0.0;
  for (int j = 1; j <= m; ++j) {
    out.p[j] = std::max(0.0, (out.delta[j - 1] - out.delta[j]) / st.level_cost[j]);
    mass += out.p[j];
  }
  if (capped && mass == 0.0) {
    // cap collapsed to ~0 (marginal blows up within tolerance of zero):
    // nothing can be opened with sensible probabilities
    if (std::isinf(st.w[0]))
      throw ValidationError("tau_solve: cap collapsed to zero with no open facility");
    out.p[0] = 1.0;  // assign to the existing facilities, zero marginal
    capped = false;
  } else if (capped || mass > 1.0) {
    // the cap solves sum = 1; renormalize away bisection residue and give
    // level 0 exactly zero mass
    for (int j = 1; j <= m; ++j) out.p[j] /= mass;
    out.p[0] = 0.0;
  } else {
    out.p[0] = 1.0 - mass;
  }
  out.capped = capped;
  out.tau = capped ? tau : 0.0;
  return out;
}

inline OflTrace run_nonuniform(const OflInstance& inst, std::uint64_t seed) {
  inst.require_requests_openable();
  const int n = inst.num_requests();
  const CostLevels levels = cost_levels(inst);
  const int m = levels.m();
  CounterRng rng(seed);

  // static per level: nearest openable site of level <= j, per metric point,
  // filled lazily for the points that actually appear as requests
  const int P = inst.metric.size();
  std::vector<std::vector<std::pair<double, int>>> site_near(
      static_cast<std::size_t>(P));
  auto nearest_sites = [&](int x) -> const std::vector<std::pair<double, int>>& {
    auto& row = site_near[static_cast<std::size_t>(x)];
    if (!row.empty()) return row;
    row.assign(static_cast<std::size_t>(m) + 1, {kInf, -1});
    for (int q : inst.openable) {
      int lev = levels.point_level[static_cast<std::size_t>(q)];
      double d = inst.metric.dist(x, q);
      if (d < row[static_cast<std::size_t>(lev)].first)
        row[static_cast<std::size_t>(lev)] = {d, q};
    }
    for (int j = 1; j <= m; ++j) {  // cumulative: level <= j, ties to lower index
      const auto& prev = row[static_cast<std::size_t>(j - 1)];
      auto& cur = row[static_cast<std::size_t>(j)];
      if (prev.first < cur.first || (prev.first == cur.first && prev.second >= 0 &&
                                     (cur.second < 0 || prev.second < cur.second)))
        cur = prev;
    }
    return row;
  };

  OflTrace trace;
  trace.costs_rounded = true;
  trace.steps.reserve(static_cast<std::size_t>(n));
  Vec prefix(static_cast<std::size_t>(n), 0.0);
  Vec dvec(static_cast<std::size_t>(n), 0.0);
  double base_val = 0.0;
  std::vector<int> facilities;

  for (int i = 0; i < n; ++i) {
    const int x = inst.requests[i];
    auto [df, fnear] = detail::dist_to_set(inst.metric, x, facilities);
    const auto& sites = nearest_sites(x);

    NonUniformStepState st;
    st.norm = &inst.norm;
    st.prefix = &prefix;
    st.base_value = base_val;
    st.i = i;
    st.level_cost = levels.level_cost;
    st.w.assign(static_cast<std::size_t>(m) + 1, kInf);
    st.w[0] = df;
    for (int j = 1; j <= m; ++j)
      st.w[j] = std::min(df, sites[static_cast<std::size_t>(j)].first);

    TauResult tr = tau_solve(st);

    double u = rng.uniform(0, static_cast<std::uint64_t>(i));
    int level = 0;
    double acc = 0.0;
    for (int j = 1; j <= m; ++j) {
      acc += tr.p[j];
      if (u < acc) {
        level = j;
        break;
      }
    }

    OflStep step;
    step.request = x;
    step.level = level;
    step.tau_capped = tr.capped;
    step.tau = tr.tau;
    step.delta = tr.delta;
    step.p = tr.p;

    if (level >= 1) {
      // nearest location in W^(j): open facilities vs sites of level <= j,
      // ties to the lower point index
      double site_d = sites[static_cast<std::size_t>(level)].first;
      int site_q = sites[static_cast<std::size_t>(level)].second;
      int target;
      if (df < site_d || (df == site_d && fnear >= 0 && fnear < site_q))
        target = fnear;
      else
        target = site_q;
      if (target < 0)
        throw ValidationError("ofl non-uniform: sampled level has no location");
      if (!std::binary_search(facilities.begin(), facilities.end(), target)) {
        detail::insert_sorted(facilities, target);
        trace.opening_cost += levels.level_cost[static_cast<std::size_t>(
            levels.point_level[static_cast<std::size_t>(target)])];
        step.opened = target;
      }
    }
    if (facilities.empty())
      throw ValidationError("ofl non-uniform: no facility after first step");

    dvec[i] = detail::dist_to_set(inst.metric, x, facilities).first;
    prefix[i] = tr.dhat[0];
    base_val = inst.norm.value_raw(prefix);

    step.d = dvec[i];
    step.dhat = tr.dhat[0];
    step.facilities_after = static_cast<int>(facilities.size());
    trace.steps.push_back(std::move(step));
  }

  trace.norm_d = inst.norm.value_raw(dvec);
  trace.norm_dhat = inst.norm.value_raw(prefix);
  return trace;
}

}  // namespace subnorm
