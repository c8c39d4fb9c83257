// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fails. Every tolerance and threshold is pinned here in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "subnorm/experiments.hpp"
#include "subnorm/generators.hpp"
#include "subnorm/loadbal.hpp"
#include "subnorm/ofl_bounds.hpp"
#include "subnorm/ordered_approx.hpp"
#include "subnorm/submodular_check.hpp"

using namespace subnorm;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

char sbuf[512];

// 1. star separation: naive pays n, capped rule stays near the optimum
Outcome star_separation() {
  const int n = 100;
  OflInstance inst = gen_star(n, 1.0, linf_norm(n));

  OflTrace naive = run_naive_uniform(inst, 1);
  bool naive_ok = naive.total_cost() == 100.0;

  OfflineOpt opt = offline_opt(inst, {0, 1, 2});
  bool opt_ok = opt.cost == 2.0;

  KahanSum sum, sq;
  std::vector<OflTrace> traces;
  for (int s = 0; s < 1000; ++s) {
    traces.push_back(run_uniform(inst, static_cast<std::uint64_t>(s)));
    double c = traces.back().total_cost();
    sum.add(c);
    sq.add(c * c);
  }
  double mean = sum.value() / 1000.0;
  BoundReport rep = verify_bounds(inst, traces, opt);
  bool mean_ok = mean <= 8.0 && rep.pass && std::fabs(rep.bound - 10.0) < 1e-12;

  std::snprintf(sbuf, sizeof(sbuf),
                "naive=%.17g (want 100), opt=%.17g (want 2), capped mean=%.6g "
                "(want <= 8, bound %.3g)",
                naive.total_cost(), opt.cost, mean, rep.bound);
  return {naive_ok && opt_ok && mean_ok, sbuf};
}

// 2. ordered-approximation sandwich across symmetric builtins
Outcome ordered_sandwich() {
  long violations = 0;
  long checked = 0;
  Rng weight_rng(2024);
  for (int n : {4, 16, 64}) {
    std::vector<NormOracle> norms{lp_norm(1.0, n), lp_norm(2.0, n), linf_norm(n),
                                  topk_norm(1, n), topk_norm(std::min(3, n), n),
                                  topk_norm(n, n)};
    std::vector<Vec> vecs;
    for (int a = 0; a < 5; ++a) {
      Vec v(static_cast<std::size_t>(n));
      double cur = 1.0 + weight_rng.uniform();
      for (int i = 0; i < n; ++i) {
        v[static_cast<std::size_t>(i)] = cur;
        cur *= weight_rng.uniform();
      }
      vecs.push_back(std::move(v));
    }
    norms.push_back(symmetric_max_norm(std::move(vecs)));

    VectorSampler sampler;
    for (const NormOracle& norm : norms) {
      OrderedApprox oa = ordered_approx(norm);
      Rng rng(static_cast<std::uint64_t>(n) * 1000 + 7);
      for (int t = 0; t < 10000; ++t) {
        Vec x = sampler(rng, n);
        double v = norm.value_raw(x);
        double va = oa.approx.value_raw(x);
        ++checked;
        if (!(v <= va + 1e-12 + 1e-9 * va)) ++violations;
        if (!(va <= oa.factor * v + 1e-12 + 1e-9 * oa.factor * v)) ++violations;
      }
    }
  }
  std::snprintf(sbuf, sizeof(sbuf), "%ld sandwich checks, %ld violations", checked,
                violations);
  return {violations == 0, sbuf};
}

// 3. exhaustive three-element adaptivity-gap sweep
Outcome gap_sweep() {
  GapSweepResult res = gap_sweep_three_elements(false);
  // adaptivity_gap throws if Adap < NA on any instance, so reaching here
  // certifies dominance on all of them
  bool ok = res.max_ratio <= 2.0 + 1e-9;
  std::snprintf(sbuf, sizeof(sbuf), "%d instances, max Adap/NA = %.12g (worst: %s)",
                res.instances, res.max_ratio, res.worst.norm_kind.c_str());
  return {ok, sbuf};
}

// 4. submodularity engine: clean families clean, block-max caught, DR splits l1/l2
Outcome submod_engine() {
  VectorSampler sampler;
  const int n = 8;
  std::vector<std::pair<std::string, NormOracle>> family;
  family.emplace_back("l1", lp_norm(1.0, n));
  family.emplace_back("l1.5", lp_norm(1.5, n));
  family.emplace_back("l2", lp_norm(2.0, n));
  family.emplace_back("l3", lp_norm(3.0, n));
  family.emplace_back("linf", linf_norm(n));
  family.emplace_back("top4", topk_norm(4, n));
  Vec w{8, 7, 6, 5, 4, 3, 2, 1};
  family.emplace_back("ordered", ordered_norm(w));
  family.emplace_back("lovasz", lovasz_norm(SetFunction::matroid_rank(
                                    Matroid::partition(n, {{0, 1}, {2, 3}, {4, 5}, {6, 7}},
                                                       {1, 1, 1, 2}))));
  family.emplace_back(
      "matroid_rank",
      matroid_rank_norm(Matroid::partition(n, {{0, 1, 2, 3}, {4, 5, 6, 7}}, {2, 3})));
  std::vector<PartialSumNorm::Part> parts;
  parts.emplace_back(std::vector<int>{0, 1, 2, 3}, lp_norm(2.0, 4));
  parts.emplace_back(std::vector<int>{4, 5, 6, 7}, linf_norm(4));
  family.emplace_back("partial_sum", partial_sum_norm(n, std::move(parts)));
  family.emplace_back("conical",
                      conical_norm({{1.0, lp_norm(2.0, n)}, {0.5, topk_norm(3, n)}}));
  Vec s{1, 2, 3, 4, 1, 2, 3, 4};
  family.emplace_back("rescaled", rescaled_norm(s, lp_norm(1.5, n)));

  long clean_viol = 0;
  for (const auto& [name, norm] : family)
    clean_viol += static_cast<long>(
        check_submodular(norm, sampler, 10000, 1e-9, 1, 3).violations.size());

  NormOracle bm = make_gap_fixtures(4).block_max;
  auto bm_rep = check_submodular_exhaustive01(bm, 1e-9, 1);
  bool witness = false;
  for (const auto& v : bm_rep.violations)
    if (v.x == Vec{1, 0, 1, 0} && v.y == Vec{0, 1, 1, 0} && v.lhs == 3.0 && v.rhs == 2.0)
      witness = true;

  bool dr_l1 = check_dr_submodular(lp_norm(1.0, n), sampler, 10000, 1e-9, 5).passed();
  auto dr_l2 = check_dr_submodular(lp_norm(2.0, n), sampler, 10000, 1e-9, 5);
  bool dr_l2_fails = !dr_l2.passed() && !dr_l2.violations.empty();

  std::snprintf(sbuf, sizeof(sbuf),
                "%zu builtins clean (%ld violations), block-max witness %s, DR: l1 "
                "pass / l2 %zu witnesses",
                family.size(), clean_viol, witness ? "found" : "MISSING",
                dr_l2.violations.size());
  return {clean_viol == 0 && witness && dr_l1 && dr_l2_fails, sbuf};
}

// 5. closed-form rho values
Outcome rho_exact() {
  bool ok = true;
  for (double p : {1.0, 2.0, 4.0}) {
    double want = std::pow(16.0, 1.0 / p);
    ok = ok && std::fabs(rho(lp_norm(p, 16)) - want) <= 1e-12;
  }
  ok = ok && std::fabs(rho(linf_norm(16)) - 1.0) <= 1e-12;
  for (int k : {1, 5, 20})
    ok = ok && std::fabs(rho(topk_norm(k, 20)) - static_cast<double>(k)) <= 1e-12;
  std::snprintf(sbuf, sizeof(sbuf),
                "rho(lp) at n=16 for p in {1,2,4,inf}; rho(top-k) at n=20 for k in "
                "{1,5,20}; all to 1e-12");
  return {ok, sbuf};
}

// shared instance batch for criteria 6 and 7
std::vector<OflInstance> euclid_batch() {
  std::vector<OflInstance> out;
  for (int i = 0; i < 20; ++i)
    out.push_back(gen_random_euclidean(10, 8, 2, 1.0, 9000 + static_cast<std::uint64_t>(i)));
  return out;
}

Outcome uniform_bound() {
  int fails = 0, total = 0;
  double worst_margin = kInf;
  for (OflInstance inst : euclid_batch()) {
    for (auto norm : {lp_norm(1.0, 10), linf_norm(10), topk_norm(3, 10)}) {
      inst.norm = norm;
      OfflineOpt opt = offline_opt(inst);
      std::vector<OflTrace> traces;
      for (int s = 0; s < 400; ++s)
        traces.push_back(run_uniform(inst, static_cast<std::uint64_t>(s)));
      BoundReport rep = verify_bounds(inst, traces, opt);
      ++total;
      if (!rep.pass) ++fails;
      worst_margin = std::min(
          worst_margin, (rep.bound + 3 * rep.stderr_cost - rep.mean_cost) /
                            std::max(1e-12, rep.bound));
    }
  }
  std::snprintf(sbuf, sizeof(sbuf),
                "%d ensembles of 400 runs; %d over the bound; worst margin %.1f%%",
                total, fails, 100.0 * worst_margin);
  return {fails == 0, sbuf};
}

Outcome nonuniform_bound() {
  int fails = 0, total = 0;
  double worst_margin = kInf;
  Rng cost_rng(31337);
  for (OflInstance inst : euclid_batch()) {
    inst.uniform_cost = false;
    inst.per_point_cost.assign(static_cast<std::size_t>(inst.metric.size()), 0.0);
    const double levels[] = {1.0, 2.0, 4.0};  // powers of two: rounding is exact
    for (double& c : inst.per_point_cost) c = levels[cost_rng.below(3)];
    inst.validate();
    for (auto norm : {lp_norm(1.0, 10), linf_norm(10), topk_norm(3, 10)}) {
      inst.norm = norm;
      OfflineOpt opt = offline_opt(inst);
      std::vector<OflTrace> traces;
      for (int s = 0; s < 400; ++s)
        traces.push_back(run_nonuniform(inst, static_cast<std::uint64_t>(s)));
      BoundReport rep = verify_bounds(inst, traces, opt);
      ++total;
      if (!rep.pass) ++fails;
      worst_margin = std::min(
          worst_margin, (rep.bound + 3 * rep.stderr_cost - rep.mean_cost) /
                            std::max(1e-12, rep.bound));
    }
  }
  std::snprintf(sbuf, sizeof(sbuf),
                "%d ensembles of 400 runs; %d over the bound; worst margin %.1f%%",
                total, fails, 100.0 * worst_margin);
  return {fails == 0, sbuf};
}

// 8. adversarial-tree ratio grows with k and clears k/4
Outcome lower_bound_trend() {
  double prev = 0.0;
  bool ok = true;
  std::string parts;
  for (int k : {2, 3, 4}) {
    LowerBoundResult r = lower_bound_experiment(k, 8, 500);
    ok = ok && r.mean_ratio >= k / 4.0 && r.mean_ratio >= prev;
    prev = r.mean_ratio;
    char one[64];
    std::snprintf(one, sizeof(one), "k=%d: %.4g ", k, r.mean_ratio);
    parts += one;
  }
  std::snprintf(sbuf, sizeof(sbuf), "mean ratios %s(need >= k/4, non-decreasing)",
                parts.c_str());
  return {ok, sbuf};
}

// 9. DP equals an independent decision-tree recursion
double brute_adaptive(const ProbingInstance& inst, std::uint32_t probed, Vec& realized) {
  double best = inst.objective.value(realized);
  for (int i = 0; i < inst.n(); ++i) {
    std::uint32_t bit = 1u << i;
    if (probed & bit) continue;
    if (!inst.family.member(probed | bit)) continue;
    const auto& d = inst.dists[static_cast<std::size_t>(i)];
    double expect = 0.0;
    for (std::size_t k = 0; k < d.support.size(); ++k) {
      realized[static_cast<std::size_t>(i)] = d.support[k];
      expect += d.probs[k] * brute_adaptive(inst, probed | bit, realized);
      realized[static_cast<std::size_t>(i)] = 0.0;
    }
    best = std::max(best, expect);
  }
  return best;
}

Outcome probing_oracle() {
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    int n = 1 + rep % 3;
    NormOracle obj;
    switch (rep % 4) {
      case 0: obj = lp_norm(1.0, n); break;
      case 1: obj = linf_norm(n); break;
      case 2: obj = topk_norm(std::min(2, n), n); break;
      default: obj = lp_norm(2.0, n); break;
    }
    ProbingInstance inst = gen_random_probing(n, 2 + rep % 2, 5000 + rep, obj);
    double dp = adaptive_opt(inst, false).value;
    Vec realized(static_cast<std::size_t>(n), 0.0);
    double brute = brute_adaptive(inst, 0, realized);
    worst = std::max(worst, std::fabs(dp - brute));
  }
  std::snprintf(sbuf, sizeof(sbuf), "100 instances, max |DP - enumeration| = %.3g",
                worst);
  return {worst <= 1e-12, sbuf};
}

// 10. load balancing: exactness for sum norms, log bound, oracle equivalence
Outcome load_balancing() {
  Rng rng(777);
  auto random_inst = [&](int m, int n, NormOracle inner) {
    LoadBalInstance inst;
    inst.p.assign(static_cast<std::size_t>(m), Vec(static_cast<std::size_t>(n)));
    for (auto& row : inst.p)
      for (double& v : row) v = rng.uniform(0.05, 2.0);
    for (int i = 0; i < m; ++i) inst.inner.push_back(inner);
    return inst;
  };

  bool l1_exact = true;
  for (int rep = 0; rep < 50; ++rep) {
    int m = 2 + rng.below(2), n = 2 + rng.below(4);
    LoadBalInstance inst = random_inst(m, n, lp_norm(1.0, n));
    double g = greedy_assign(inst).total_cost;
    double o = brute_force_assign(inst).total_cost;
    l1_exact = l1_exact && std::fabs(g - o) <= 1e-9 * std::max(1.0, o);
  }

  bool within_log = true;
  double worst_ratio = 0.0;
  for (int rep = 0; rep < 50; ++rep) {
    int m = 2 + rng.below(2), n = 2 + rng.below(5);
    NormOracle inner = rep % 2 ? topk_norm(std::min(2, n), n) : lp_norm(2.0, n);
    LoadBalInstance inst = random_inst(m, n, inner);
    double g = greedy_assign(inst).total_cost;
    double o = brute_force_assign(inst).total_cost;
    double ratio = g / o;
    worst_ratio = std::max(worst_ratio, ratio);
    within_log = within_log && g >= o - 1e-9 &&
                 ratio <= 4.0 * (1.0 + std::log(static_cast<double>(n))) + 1e-9;
  }

  bool oracle_eq = true;
  for (int rep = 0; rep < 10; ++rep) {
    int m = 2 + rng.below(2), n = 2 + rng.below(4);
    LoadBalInstance inst = random_inst(m, n, topk_norm(std::min(2, n), n));
    // independent enumerator: odometer over tuples, loads rebuilt from scratch
    std::vector<int> sigma(static_cast<std::size_t>(n), 0);
    double best = kInf;
    while (true) {
      double total = 0.0;
      for (int i = 0; i < m; ++i) {
        Vec load(static_cast<std::size_t>(n), 0.0);
        for (int j = 0; j < n; ++j)
          if (sigma[static_cast<std::size_t>(j)] == i)
            load[static_cast<std::size_t>(j)] =
                inst.p[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        total += inst.inner[static_cast<std::size_t>(i)].value_raw(load);
      }
      best = std::min(best, total);
      int j = n - 1;
      while (j >= 0 && ++sigma[static_cast<std::size_t>(j)] == m) {
        sigma[static_cast<std::size_t>(j)] = 0;
        --j;
      }
      if (j < 0) break;
    }
    oracle_eq = oracle_eq &&
                std::fabs(brute_force_assign(inst).total_cost - best) <= 1e-12;
  }

  std::snprintf(sbuf, sizeof(sbuf),
                "sum-norm greedy exact on 50; greedy/OPT <= 4(1+ln n) on 50 (worst "
                "%.3f); enumerator agreement on 10",
                worst_ratio);
  return {l1_exact && within_log && oracle_eq, sbuf};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_seconds;
    std::function<Outcome()> run;
  };
  std::vector<Criterion> criteria{
      {"star separation (naive n, capped O(1))", 10.0, star_separation},
      {"ordered-approximation sandwich", 30.0, ordered_sandwich},
      {"adaptivity gap <= 2 on the exhaustive sweep", 300.0, gap_sweep},
      {"submodularity engine", 60.0, submod_engine},
      {"closed-form rho values", 60.0, rho_exact},
      {"uniform-cost competitive bound", 120.0, uniform_bound},
      {"non-uniform competitive bound", 120.0, nonuniform_bound},
      {"adversarial-tree ratio trend", 120.0, lower_bound_trend},
      {"probing DP oracle equivalence", 60.0, probing_oracle},
      {"load balancing guarantees", 60.0, load_balancing},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    double t0 = now_seconds();
    Outcome out;
    try {
      out = criteria[i].run();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    double dt = now_seconds() - t0;
    bool in_budget = dt < criteria[i].budget_seconds;
    bool pass = out.pass && in_budget;
    if (!pass) ++failures;
    std::printf("[%s] %2zu. %s: %s (%.2fs%s)\n", pass ? "PASS" : "FAIL", i + 1,
                criteria[i].name, out.detail.c_str(), dt,
                in_budget ? "" : ", OVER BUDGET");
    std::fflush(stdout);
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures ? 1 : 0;
}
