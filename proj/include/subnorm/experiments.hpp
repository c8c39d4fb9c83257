#pragma once

// Canned experiments shared by the CLI and the verification suite: the
// exhaustive adaptivity-gap sweep on three-element instances and the
// adversarial-tree competitive-ratio measurement.

#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "subnorm/generators.hpp"
#include "subnorm/ofl.hpp"
#include "subnorm/ofl_offline.hpp"
#include "subnorm/probing.hpp"

namespace subnorm {

// Every downward-closed family over [n] that contains the empty set.
inline std::vector<FeasibleFamily> all_downward_closed_families(int n) {
  if (n < 1 || n > 4) throw BudgetError("family enumeration limited to n <= 4");
  const std::uint32_t masks = 1u << n;
  std::vector<FeasibleFamily> out;
  for (std::uint32_t pick = 0; pick < (1u << masks); ++pick) {
    if (!(pick & 1u)) continue;  // must contain the empty set
    bool closed = true;
    for (std::uint32_t s = 0; s < masks && closed; ++s) {
      if (!(pick & (1u << s))) continue;
      for (int i = 0; i < n && closed; ++i)
        if ((s & (1u << i)) && !(pick & (1u << (s & ~(1u << i))))) closed = false;
    }
    if (!closed) continue;
    std::vector<std::uint32_t> sets;
    for (std::uint32_t s = 0; s < masks; ++s)
      if (pick & (1u << s)) sets.push_back(s);
    out.push_back(FeasibleFamily::explicit_sets(n, std::move(sets)));
  }
  return out;
}

struct GapSweepRow {
  int instance_id = 0;
  std::string norm_kind;
  int family_id = 0;
  double adaptive = 0.0;
  double nonadaptive = 0.0;
  double ratio = 1.0;
};

struct GapSweepResult {
  std::vector<GapSweepRow> rows;
  double max_ratio = 1.0;
  GapSweepRow worst;
  int instances = 0;
};

// Exhaustive sweep over all downward-closed families on three elements and
// two-point distributions with values in {0, 1/2, 1} and success
// probabilities in {1/4, 1/2, 3/4}; objectives: sum, max, top-2, and the
// continuous extensions of two fixed submodular set functions (a coverage
// function and a budget-additive one).
inline GapSweepResult gap_sweep_three_elements(bool keep_rows = false) {
  const int n = 3;
  std::vector<std::pair<std::string, NormOracle>> objectives;
  objectives.emplace_back("l1", lp_norm(1.0, n));
  objectives.emplace_back("linf", linf_norm(n));
  objectives.emplace_back("top2", topk_norm(2, n));
  objectives.emplace_back("lovasz_coverage",
                          lovasz_norm(SetFunction::from_table({0, 1, 1, 2, 2, 2, 2, 2})));
  objectives.emplace_back(
      "lovasz_budget",
      lovasz_norm(SetFunction::from_table({0, 1, 1.5, 2.5, 2, 2.5, 2.5, 2.5})));

  const double lo_hi[][2] = {{0.0, 0.5}, {0.0, 1.0}, {0.5, 1.0}};
  const double phi[] = {0.25, 0.5, 0.75};

  std::vector<FeasibleFamily> families = all_downward_closed_families(n);
  GapSweepResult res;
  int id = 0;
  for (int c0 = 0; c0 < 9; ++c0)
    for (int c1 = 0; c1 < 9; ++c1)
      for (int c2 = 0; c2 < 9; ++c2) {
        ProbingInstance base;
        const int choice[3] = {c0, c1, c2};
        for (int i = 0; i < 3; ++i) {
          DiscreteDistribution d;
          const auto& sv = lo_hi[choice[i] / 3];
          double p = phi[choice[i] % 3];
          d.support = {sv[0], sv[1]};
          d.probs = {1.0 - p, p};
          base.dists.push_back(std::move(d));
        }
        for (std::size_t fi = 0; fi < families.size(); ++fi) {
          base.family = families[fi];
          for (const auto& [name, obj] : objectives) {
            base.objective = obj;
            GapResult g = adaptivity_gap(base);
            ++res.instances;
            GapSweepRow row{id, name, static_cast<int>(fi), g.adaptive, g.nonadaptive,
                            g.ratio};
            if (g.ratio > res.max_ratio) {
              res.max_ratio = g.ratio;
              res.worst = row;
            }
            if (keep_rows) res.rows.push_back(std::move(row));
          }
        }
        ++id;
      }
  return res;
}

inline std::string gap_sweep_csv(const GapSweepResult& res) {
  std::ostringstream out;
  out << "instance,norm,family,adaptive,nonadaptive,ratio\n";
  char buf[160];
  for (const GapSweepRow& r : res.rows) {
    std::snprintf(buf, sizeof(buf), "%d,%s,%d,%.15g,%.15g,%.15g\n", r.instance_id,
                  r.norm_kind.c_str(), r.family_id, r.adaptive, r.nonadaptive, r.ratio);
    out << buf;
  }
  return out.str();
}

struct LowerBoundResult {
  int k = 0;
  int arity = 0;
  int seeds = 0;
  double mean_cost = 0.0;
  double mean_opt = 0.0;
  double mean_ratio = 0.0;
  double stderr_ratio = 0.0;
};

// Competitive ratio of the capped uniform rule on the adversarial tree with
// the sum norm at n = k^k. Offline candidates are the path nodes (any
// off-path facility is dominated by its lowest path ancestor). Finite-arity
// estimate of an asymptotic construction.
inline LowerBoundResult lower_bound_experiment(int k, int arity, int seeds) {
  const int n = static_cast<int>(std::llround(std::pow(static_cast<double>(k), k)));
  NormOracle norm = lp_norm(1.0, n);
  LowerBoundResult res;
  res.k = k;
  res.arity = arity;
  res.seeds = seeds;
  KahanSum cost_sum, opt_sum, ratio_sum, ratio_sq;
  for (int s = 0; s < seeds; ++s) {
    auto tree = gen_lower_bound_tree(norm, arity, static_cast<std::uint64_t>(s));
    OflTrace trace = run_uniform(tree.instance, static_cast<std::uint64_t>(s));
    OfflineOpt opt = offline_opt(tree.instance, tree.path);
    double ratio = trace.total_cost() / opt.cost;
    cost_sum.add(trace.total_cost());
    opt_sum.add(opt.cost);
    ratio_sum.add(ratio);
    ratio_sq.add(ratio * ratio);
  }
  res.mean_cost = cost_sum.value() / seeds;
  res.mean_opt = opt_sum.value() / seeds;
  res.mean_ratio = ratio_sum.value() / seeds;
  double var = std::max(0.0, ratio_sq.value() / seeds - res.mean_ratio * res.mean_ratio);
  res.stderr_ratio = seeds > 1 ? std::sqrt(var / (seeds - 1)) : 0.0;
  return res;
}

}  // namespace subnorm
