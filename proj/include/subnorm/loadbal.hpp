#pragma once

// Generalized load balancing with a sum outer objective: assign each job to
// a machine, each machine scoring its load vector with its own monotone
// inner norm, minimizing the sum of machine loads. Greedy assigns jobs in
// order to the machine with the smallest marginal load increase.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "subnorm/common.hpp"
#include "subnorm/norms.hpp"
#include "subnorm/ordered_approx.hpp"

namespace subnorm {

struct LoadBalInstance {
  std::vector<Vec> p;              // p[machine][job] processing times
  std::vector<NormOracle> inner;   // one norm per machine, dimension = jobs

  int machines() const { return static_cast<int>(p.size()); }
  int jobs() const { return p.empty() ? 0 : static_cast<int>(p[0].size()); }

  void validate() const {
    if (p.empty() || p[0].empty()) throw ValidationError("loadbal: empty instance");
    for (const Vec& row : p) {
      check_dim(row, jobs(), "processing time row");
      check_nonneg(row, "processing times");
    }
    if (static_cast<int>(inner.size()) != machines())
      throw ValidationError("loadbal: one inner norm per machine required");
    for (const NormOracle& psi : inner)
      if (!psi.valid() || psi.dim() != jobs())
        throw ValidationError("loadbal: inner norm dimension must equal job count");
  }
};

struct Assignment {
  std::vector<int> machine_of_job;
  Vec machine_load;    // inner-norm value per machine
  double total_cost = 0.0;
};

inline Assignment evaluate_assignment(const LoadBalInstance& inst,
                                      const std::vector<int>& sigma) {
  const int m = inst.machines(), n = inst.jobs();
  Assignment a;
  a.machine_of_job = sigma;
  a.machine_load.assign(static_cast<std::size_t>(m), 0.0);
  std::vector<Vec> load(static_cast<std::size_t>(m), Vec(static_cast<std::size_t>(n), 0.0));
  for (int j = 0; j < n; ++j) {
    int i = sigma[static_cast<std::size_t>(j)];
    if (i < 0 || i >= m) throw ValidationError("assignment: machine index out of range");
    load[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
        inst.p[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  KahanSum total;
  for (int i = 0; i < m; ++i) {
    a.machine_load[static_cast<std::size_t>(i)] =
        inst.inner[static_cast<std::size_t>(i)].value_raw(load[static_cast<std::size_t>(i)]);
    total.add(a.machine_load[static_cast<std::size_t>(i)]);
  }
  a.total_cost = total.value();
  return a;
}

// Jobs processed in `order`; each goes to the machine with the smallest
// marginal inner-norm increase, ties to the lowest machine index.
inline Assignment greedy_assign(const LoadBalInstance& inst, const std::vector<int>& order) {
  inst.validate();
  const int m = inst.machines(), n = inst.jobs();
  if (static_cast<int>(order.size()) != n)
    throw ValidationError("greedy_assign: order must list every job once");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int j : order) {
    if (j < 0 || j >= n || seen[static_cast<std::size_t>(j)])
      throw ValidationError("greedy_assign: order must list every job once");
    seen[static_cast<std::size_t>(j)] = true;
  }

  std::vector<Vec> load(static_cast<std::size_t>(m), Vec(static_cast<std::size_t>(n), 0.0));
  Vec load_val(static_cast<std::size_t>(m), 0.0);
  std::vector<int> sigma(static_cast<std::size_t>(n), -1);
  for (int j : order) {
    int best_i = 0;
    double best_marg = kInf;
    for (int i = 0; i < m; ++i) {
      Vec& li = load[static_cast<std::size_t>(i)];
      li[static_cast<std::size_t>(j)] = inst.p[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      double marg = inst.inner[static_cast<std::size_t>(i)].value_raw(li) -
                    load_val[static_cast<std::size_t>(i)];
      li[static_cast<std::size_t>(j)] = 0.0;
      if (marg < -kAbsTol)
        throw ValidationError("greedy_assign: negative marginal; inner norm not monotone");
      if (marg < best_marg) {
        best_marg = marg;
        best_i = i;
      }
    }
    sigma[static_cast<std::size_t>(j)] = best_i;
    Vec& lb = load[static_cast<std::size_t>(best_i)];
    lb[static_cast<std::size_t>(j)] = inst.p[static_cast<std::size_t>(best_i)][static_cast<std::size_t>(j)];
    load_val[static_cast<std::size_t>(best_i)] =
        inst.inner[static_cast<std::size_t>(best_i)].value_raw(lb);
  }
  return evaluate_assignment(inst, sigma);
}

inline Assignment greedy_assign(const LoadBalInstance& inst) {
  std::vector<int> order(static_cast<std::size_t>(inst.jobs()));
  for (int j = 0; j < inst.jobs(); ++j) order[static_cast<std::size_t>(j)] = j;
  return greedy_assign(inst, order);
}

// Exact minimizer by enumerating all m^n assignments.
inline Assignment brute_force_assign(const LoadBalInstance& inst) {
  inst.validate();
  const int m = inst.machines(), n = inst.jobs();
  double count = std::pow(static_cast<double>(m), n);
  if (count > 1e6) throw BudgetError("brute_force_assign: m^n exceeds 1e6");

  std::vector<int> sigma(static_cast<std::size_t>(n), 0);
  Assignment best;
  best.total_cost = kInf;
  while (true) {
    Assignment a = evaluate_assignment(inst, sigma);
    if (a.total_cost < best.total_cost) best = std::move(a);
    int j = 0;
    for (; j < n; ++j) {
      if (++sigma[static_cast<std::size_t>(j)] < m) break;
      sigma[static_cast<std::size_t>(j)] = 0;
    }
    if (j == n) break;
  }
  return best;
}

// Replaces each symmetric inner norm by its sandwiching ordered norm; greedy
// on the result carries a per-machine factor 2 (floor(log2 rho_i) + 1).
struct SymmetricReduction {
  LoadBalInstance reduced;
  std::vector<double> machine_factor;
};

inline SymmetricReduction symmetric_reduction(const LoadBalInstance& inst) {
  inst.validate();
  SymmetricReduction out;
  out.reduced.p = inst.p;
  for (const NormOracle& psi : inst.inner) {
    OrderedApprox approx = ordered_approx(psi);  // runs the symmetry check
    out.machine_factor.push_back(approx.factor);
    out.reduced.inner.push_back(approx.approx);
  }
  return out;
}

}  // namespace subnorm
