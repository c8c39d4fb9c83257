#pragma once

// Exact offline comparator: exhaustive search over facility subsets of a
// small candidate site set. Monotonicity of the norm makes nearest
// assignment optimal per facility set, so the search space is subsets only.

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "subnorm/common.hpp"
#include "subnorm/ofl.hpp"

namespace subnorm {

struct OfflineOpt {
  std::vector<int> facilities;   // point indices, sorted
  Vec dstar;                     // nearest-assignment distances, request order
  double cost = 0.0;             // sum of ORIGINAL opening costs + ||dstar||
  double opening_cost = 0.0;
  std::vector<int> assignment;   // request -> facility point index
};

inline OfflineOpt offline_opt(const OflInstance& inst, std::vector<int> candidates) {
  // canonical order: ties (both nearest-assignment and equal-cost facility
  // sets) resolve toward lower point indices independent of input order
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  const int C = static_cast<int>(candidates.size());
  if (C < 1) throw ValidationError("offline_opt: empty candidate set");
  if (C > 20)
    throw BudgetError("offline_opt: candidate set larger than 20 (2^C enumeration)");
  for (int q : candidates)
    if (!inst.is_openable(q))
      throw ValidationError("offline_opt: candidate " + std::to_string(q) +
                            " is not openable");

  const int n = inst.num_requests();
  // distance table: request x candidate
  std::vector<Vec> dist(static_cast<std::size_t>(n), Vec(static_cast<std::size_t>(C)));
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < C; ++c)
      dist[i][c] = inst.metric.dist(inst.requests[i], candidates[c]);

  OfflineOpt best;
  best.cost = kInf;
  Vec d(static_cast<std::size_t>(n));
  std::vector<int> assign(static_cast<std::size_t>(n));
  const std::uint32_t lim = 1u << C;
  for (std::uint32_t mask = 1; mask < lim; ++mask) {
    double open_cost = 0.0;
    for (int c = 0; c < C; ++c)
      if (mask & (1u << c)) open_cost += inst.cost_at(candidates[c]);
    if (open_cost >= best.cost) continue;
    for (int i = 0; i < n; ++i) {
      double bd = kInf;
      int ba = -1;
      for (int c = 0; c < C; ++c)
        if (mask & (1u << c))
          if (dist[i][c] < bd) {
            bd = dist[i][c];
            ba = candidates[c];
          }
      d[i] = bd;
      assign[i] = ba;
    }
    double total = open_cost + inst.norm.value_raw(d);
    if (total < best.cost) {
      best.cost = total;
      best.opening_cost = open_cost;
      best.dstar = d;
      best.assignment = assign;
      best.facilities.clear();
      for (int c = 0; c < C; ++c)
        if (mask & (1u << c)) best.facilities.push_back(candidates[c]);
      std::sort(best.facilities.begin(), best.facilities.end());
    }
  }
  return best;
}

inline OfflineOpt offline_opt(const OflInstance& inst) {
  return offline_opt(inst, inst.openable);
}

}  // namespace subnorm
