// Command-line front end: norm property checks and approximations, online
// facility location runs and bound verification, stochastic probing optima
// and the exhaustive gap sweep, greedy load balancing, and the instance
// generators. Exit codes: 0 success, 1 validation/usage error, 2 budget
// exceeded.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "subnorm/experiments.hpp"
#include "subnorm/io.hpp"
#include "subnorm/loadbal.hpp"
#include "subnorm/ofl_bounds.hpp"
#include "subnorm/ordered_approx.hpp"
#include "subnorm/submodular_check.hpp"

using namespace subnorm;

namespace {

// Norm argument: "l1" | "linf" | "lp:P" | "topk:K" | inline JSON | file path.
json norm_descriptor_arg(const std::string& spec, int n) {
  if (!spec.empty() && spec.front() == '{') return json::parse(spec);
  if (spec == "l1") return json{{"kind", "lp"}, {"p", 1.0}, {"n", n}};
  if (spec == "l2") return json{{"kind", "lp"}, {"p", 2.0}, {"n", n}};
  if (spec == "linf") return json{{"kind", "lp"}, {"p", "inf"}, {"n", n}};
  if (spec.rfind("lp:", 0) == 0)
    return json{{"kind", "lp"}, {"p", std::stod(spec.substr(3))}, {"n", n}};
  if (spec.rfind("topk:", 0) == 0)
    return json{{"kind", "topk"}, {"k", std::stoi(spec.substr(5))}, {"n", n}};
  return load_json_file(spec);
}

NormOracle norm_arg(const std::string& spec, int n) {
  return norm_from_json(norm_descriptor_arg(spec, n));
}

struct EnsembleStats {
  int runs = 0;
  double mean = 0.0, stderr_mean = 0.0;
};

template <typename RunFn>
std::pair<std::vector<OflTrace>, EnsembleStats> run_ensemble(RunFn&& run, int seeds,
                                                             std::uint64_t seed0) {
  std::vector<OflTrace> traces;
  traces.reserve(static_cast<std::size_t>(seeds));
  KahanSum sum, sq;
  for (int s = 0; s < seeds; ++s) {
    traces.push_back(run(seed0 + static_cast<std::uint64_t>(s)));
    double c = traces.back().total_cost();
    sum.add(c);
    sq.add(c * c);
  }
  EnsembleStats st;
  st.runs = seeds;
  st.mean = sum.value() / seeds;
  double var = std::max(0.0, sq.value() / seeds - st.mean * st.mean);
  st.stderr_mean = seeds > 1 ? std::sqrt(var / (seeds - 1)) : 0.0;
  return {std::move(traces), st};
}

std::vector<int> parse_candidates(const std::string& s, const OflInstance& inst) {
  if (s.empty() || s == "openable") return inst.openable;
  if (s == "requests") {
    std::vector<int> c = inst.requests;
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    return c;
  }
  std::vector<int> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    out.push_back(std::stoi(s.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  return out;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty())
    std::cout << content;
  else
    write_file_atomic(out_path, content);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"submodular-norm toolkit: property engines, online facility "
               "location, stochastic probing, load balancing"};
  app.require_subcommand(1);

  // --- norms ---------------------------------------------------------------
  auto* norms_cmd = app.add_subcommand("norms", "norm oracle operations");
  norms_cmd->require_subcommand(1);

  std::string norm_spec;
  int dim = 8;
  std::uint64_t seed = 1;
  int trials = 10000;
  double tol = 1e-9;
  int characterization = 1;
  bool dr = false;
  std::string out_path;

  auto* nc = norms_cmd->add_subcommand("check", "sampled submodularity / DR check");
  nc->add_option("--norm", norm_spec, "norm: l1|l2|linf|lp:P|topk:K|JSON|file")->required();
  nc->add_option("--n", dim, "dimension for shorthand norms");
  nc->add_option("--trials", trials);
  nc->add_option("--seed", seed);
  nc->add_option("--tol", tol);
  nc->add_option("--characterization", characterization, "1..4");
  nc->add_flag("--dr", dr, "check full diminishing returns instead");
  nc->callback([&] {
    NormOracle norm = norm_arg(norm_spec, dim);
    VectorSampler sampler;
    SubmodCheckReport rep =
        dr ? check_dr_submodular(norm, sampler, trials, tol, seed)
           : check_submodular(norm, sampler, trials, tol, characterization, seed);
    std::printf("norm=%s n=%d trials=%d characterization=%d violations=%zu\n",
                norm.kind(), norm.dim(), rep.trials, rep.characterization,
                rep.violations.size());
    for (std::size_t i = 0; i < rep.violations.size() && i < 5; ++i) {
      const auto& v = rep.violations[i];
      std::printf("  violation %zu: lhs=%.15g rhs=%.15g slack=%.3g\n", i, v.lhs, v.rhs,
                  v.slack);
    }
  });

  auto* na = norms_cmd->add_subcommand("approx", "sandwiching ordered norm");
  na->add_option("--norm", norm_spec)->required();
  na->add_option("--n", dim);
  na->add_option("--out", out_path, "write the approximation JSON here");
  na->callback([&] {
    NormOracle norm = norm_arg(norm_spec, dim);
    OrderedApprox oa = ordered_approx(norm);
    json j{{"rho", oa.rho},
           {"factor", oa.factor},
           {"levels", oa.levels},
           {"level_values", oa.level_values},
           {"ordered_norm", norm_to_json(oa.approx)}};
    emit(out_path, j.dump(2) + "\n");
  });

  auto* nr = norms_cmd->add_subcommand("rho", "ones-to-unit ratio");
  nr->add_option("--norm", norm_spec)->required();
  nr->add_option("--n", dim);
  nr->callback([&] {
    NormOracle norm = norm_arg(norm_spec, dim);
    std::printf("%.15g\n", rho(norm));
  });

  // --- ofl -------------------------------------------------------------
  auto* ofl_cmd = app.add_subcommand("ofl", "online facility location");
  ofl_cmd->require_subcommand(1);

  std::string instance_path, candidates_spec, trace_path;
  int seeds = 1000;
  std::uint64_t seed0 = 0;
  bool stages = false;

  auto add_instance_opts = [&](CLI::App* c, bool with_seeds) {
    c->add_option("--instance", instance_path, "instance JSON file")->required();
    if (with_seeds) {
      c->add_option("--seeds", seeds, "ensemble size");
      c->add_option("--seed0", seed0, "first seed");
      c->add_option("--trace", trace_path, "write the first run's trace CSV here");
      c->add_option("--out", out_path, "write the ensemble summary CSV here");
      c->add_option("--candidates", candidates_spec,
                    "offline candidates: openable|requests|i,j,k");
    }
  };

  auto run_ofl = [&](bool naive) {
    OflInstance inst = ofl_from_json(load_json_file(instance_path));
    auto runner = [&](std::uint64_t s) {
      if (naive) return run_naive_uniform(inst, s);
      return inst.uniform_cost ? run_uniform(inst, s) : run_nonuniform(inst, s);
    };
    auto [traces, st] = run_ensemble(runner, seeds, seed0);
    if (!trace_path.empty()) write_file_atomic(trace_path, trace_csv(traces.front()));
    OfflineOpt opt = offline_opt(inst, parse_candidates(candidates_spec, inst));
    BoundReport rep = verify_bounds(inst, traces, opt, stages);
    std::string csv = bound_report_csv_header() +
                      bound_report_csv_row(instance_path, inst.norm.kind(), rep);
    emit(out_path, csv);
    if (stages)
      std::fprintf(stderr, "stage means: short=%.15g long=%.15g\n", rep.mean_sd_cost,
                   rep.mean_ld_cost);
  };

  auto* orun = ofl_cmd->add_subcommand(
      "run", "capped-marginal rule (uniform or non-uniform costs)");
  add_instance_opts(orun, true);
  orun->add_flag("--stages", stages, "report short/long stage means");
  orun->callback([&] { run_ofl(false); });

  auto* onaive = ofl_cmd->add_subcommand("naive", "true-distance baseline rule");
  add_instance_opts(onaive, true);
  onaive->callback([&] { run_ofl(true); });

  auto* oopt = ofl_cmd->add_subcommand("opt", "exact offline optimum");
  add_instance_opts(oopt, false);
  oopt->add_option("--candidates", candidates_spec);
  oopt->callback([&] {
    OflInstance inst = ofl_from_json(load_json_file(instance_path));
    OfflineOpt opt = offline_opt(inst, parse_candidates(candidates_spec, inst));
    json j{{"cost", opt.cost},
           {"opening_cost", opt.opening_cost},
           {"facilities", opt.facilities},
           {"dstar", opt.dstar}};
    std::cout << j.dump(2) << "\n";
  });

  auto* obounds = ofl_cmd->add_subcommand("bounds", "ensemble vs explicit bound");
  add_instance_opts(obounds, true);
  obounds->add_flag("--stages", stages);
  obounds->callback([&] { run_ofl(false); });

  int lb_arity = 8;
  std::vector<int> lb_ks{2, 3, 4};
  auto* olb = ofl_cmd->add_subcommand(
      "lowerbound", "adversarial-tree ratio measurement (sum norm, n = k^k)");
  olb->add_option("--k", lb_ks, "tree heights to measure");
  olb->add_option("--arity", lb_arity);
  olb->add_option("--seeds", seeds);
  olb->add_option("--out", out_path);
  olb->callback([&] {
    std::string csv = "k,arity,seeds,mean_cost,mean_opt,mean_ratio,stderr_ratio\n";
    for (int k : lb_ks) {
      LowerBoundResult r = lower_bound_experiment(k, lb_arity, seeds);
      char buf[200];
      std::snprintf(buf, sizeof(buf), "%d,%d,%d,%.15g,%.15g,%.15g,%.15g\n", r.k, r.arity,
                    r.seeds, r.mean_cost, r.mean_opt, r.mean_ratio, r.stderr_ratio);
      csv += buf;
    }
    emit(out_path, csv);
  });

  // --- probe -----------------------------------------------------------
  auto* probe_cmd = app.add_subcommand("probe", "stochastic probing");
  probe_cmd->require_subcommand(1);

  auto* padap = probe_cmd->add_subcommand("adap", "exact adaptive optimum");
  padap->add_option("--instance", instance_path)->required();
  padap->callback([&] {
    ProbingInstance inst = probing_from_json(load_json_file(instance_path));
    std::printf("%.15g\n", adaptive_opt(inst, false).value);
  });

  auto* pna = probe_cmd->add_subcommand("na", "exact non-adaptive optimum");
  pna->add_option("--instance", instance_path)->required();
  pna->callback([&] {
    ProbingInstance inst = probing_from_json(load_json_file(instance_path));
    NonAdaptiveResult r = nonadaptive_opt(inst);
    std::vector<int> elems;
    for (int i = 0; i < inst.n(); ++i)
      if (r.set & (1u << i)) elems.push_back(i);
    json j{{"value", r.value}, {"set", elems}};
    std::cout << j.dump() << "\n";
  });

  auto* pgap = probe_cmd->add_subcommand("gap", "adaptivity gap of one instance");
  pgap->add_option("--instance", instance_path)->required();
  pgap->callback([&] {
    ProbingInstance inst = probing_from_json(load_json_file(instance_path));
    GapResult g = adaptivity_gap(inst);
    std::printf("adaptive=%.15g nonadaptive=%.15g ratio=%.15g\n", g.adaptive,
                g.nonadaptive, g.ratio);
  });

  int sweep_n = 3;
  auto* psweep = probe_cmd->add_subcommand(
      "sweep", "exhaustive gap sweep over 3-element instances");
  psweep->add_option("--n", sweep_n, "ground-set size (3 supported)");
  psweep->add_option("--out", out_path, "write per-instance CSV here");
  psweep->callback([&] {
    if (sweep_n != 3)
      throw ValidationError("sweep: only the 3-element exhaustive grid is built in");
    GapSweepResult res = gap_sweep_three_elements(!out_path.empty());
    if (!out_path.empty()) write_file_atomic(out_path, gap_sweep_csv(res));
    std::printf("instances=%d max_ratio=%.15g (norm=%s family=%d adap=%.15g na=%.15g)\n",
                res.instances, res.max_ratio, res.worst.norm_kind.c_str(),
                res.worst.family_id, res.worst.adaptive, res.worst.nonadaptive);
  });

  // --- loadbal ----------------------------------------------------------
  auto* lb_cmd = app.add_subcommand("loadbal", "greedy generalized load balancing");
  lb_cmd->require_subcommand(1);

  bool lb_reduce = false;
  bool lb_with_opt = false;
  std::string order_spec;
  auto* lgreedy = lb_cmd->add_subcommand("greedy", "min-marginal greedy assignment");
  lgreedy->add_option("--instance", instance_path)->required();
  lgreedy->add_option("--order", order_spec, "input|random");
  lgreedy->add_option("--seed", seed, "seed for --order random");
  lgreedy->add_flag("--reduce", lb_reduce,
                    "replace symmetric inner norms by their ordered approximations");
  lgreedy->add_flag("--opt", lb_with_opt, "also compute the exhaustive optimum");
  lgreedy->add_option("--out", out_path, "write a summary CSV here");
  lgreedy->callback([&] {
    LoadBalInstance inst = loadbal_from_json(load_json_file(instance_path));
    std::vector<double> factors;
    if (lb_reduce) {
      SymmetricReduction red = symmetric_reduction(inst);
      inst = std::move(red.reduced);
      factors = std::move(red.machine_factor);
    }
    std::vector<int> order(static_cast<std::size_t>(inst.jobs()));
    for (int j = 0; j < inst.jobs(); ++j) order[static_cast<std::size_t>(j)] = j;
    if (order_spec == "random") {
      Rng rng(seed);
      for (int j = inst.jobs() - 1; j > 0; --j)
        std::swap(order[static_cast<std::size_t>(j)],
                  order[static_cast<std::size_t>(rng.below(j + 1))]);
    }
    Assignment a = greedy_assign(inst, order);
    json j{{"cost", a.total_cost},
           {"assignment", a.machine_of_job},
           {"machine_loads", a.machine_load}};
    if (!factors.empty()) j["machine_factors"] = factors;
    double opt_cost = -1.0;
    if (lb_with_opt) {
      opt_cost = brute_force_assign(inst).total_cost;
      j["opt_cost"] = opt_cost;
      if (opt_cost > 0.0) j["ratio"] = a.total_cost / opt_cost;
    }
    std::cout << j.dump() << "\n";
    if (!out_path.empty()) {
      std::string csv = "greedy_cost,opt_cost,ratio,machine_factors\n";
      csv += format_number(a.total_cost) + ",";
      if (opt_cost >= 0.0) {
        csv += format_number(opt_cost) + ",";
        csv += opt_cost > 0.0 ? format_number(a.total_cost / opt_cost) : "";
      } else {
        csv += ",";
      }
      csv += ",";
      for (std::size_t i = 0; i < factors.size(); ++i)
        csv += (i ? ";" : "") + format_number(factors[i]);
      csv += "\n";
      write_file_atomic(out_path, csv);
    }
  });

  auto* lopt = lb_cmd->add_subcommand("opt", "exhaustive optimum");
  lopt->add_option("--instance", instance_path)->required();
  lopt->callback([&] {
    LoadBalInstance inst = loadbal_from_json(load_json_file(instance_path));
    Assignment a = brute_force_assign(inst);
    json j{{"cost", a.total_cost}, {"assignment", a.machine_of_job}};
    std::cout << j.dump() << "\n";
  });

  // --- gen --------------------------------------------------------------
  auto* gen_cmd = app.add_subcommand("gen", "instance generators");
  gen_cmd->require_subcommand(1);

  int gn = 16, gpoints = 8, gdim = 2, gsupport = 2, garity = 8;
  double gf = 1.0;
  std::string gnorm = "l1";

  auto* gstar = gen_cmd->add_subcommand("star", "center plus unit spokes");
  gstar->add_option("--n", gn, "leaf count")->required();
  gstar->add_option("--f", gf, "uniform opening cost");
  gstar->add_option("--norm", gnorm);
  gstar->add_option("--out", out_path);
  gstar->callback([&] {
    OflInstance inst = gen_star(gn, gf, norm_arg(gnorm, gn));
    emit(out_path, ofl_to_json(inst).dump(2) + "\n");
  });

  auto* gtree = gen_cmd->add_subcommand("tree", "adversarial complete tree");
  gtree->add_option("--n", gn, "norm dimension before re-dimensioning")->required();
  gtree->add_option("--norm", gnorm);
  gtree->add_option("--arity", garity);
  gtree->add_option("--seed", seed);
  gtree->add_option("--out", out_path);
  gtree->callback([&] {
    json desc = norm_descriptor_arg(gnorm, gn);
    // fix the dimension to the demand count implied by the norm itself
    for (int iter = 0; iter < 8; ++iter) {
      NormOracle norm = norm_from_json(desc);
      int demand = tree_plan(norm).demand_count();
      if (demand == norm.dim()) break;
      desc = redimension_descriptor(desc, demand);
    }
    auto tree = gen_lower_bound_tree(norm_from_json(desc), garity, seed);
    emit(out_path, ofl_to_json(tree.instance).dump(2) + "\n");
    std::fprintf(stderr, "k=%d sigma=%.15g demands=%d path=", tree.k, tree.sigma,
                 tree.instance.num_requests());
    for (int v : tree.path) std::fprintf(stderr, "%d ", v);
    std::fprintf(stderr, "\n");
  });

  auto* geuclid = gen_cmd->add_subcommand("euclid", "uniform points in the unit cube");
  geuclid->add_option("--requests", gn)->required();
  geuclid->add_option("--points", gpoints, "candidate site count");
  geuclid->add_option("--dim", gdim);
  geuclid->add_option("--f", gf);
  geuclid->add_option("--norm", gnorm);
  geuclid->add_option("--seed", seed);
  geuclid->add_option("--out", out_path);
  geuclid->callback([&] {
    OflInstance inst = gen_random_euclidean(gn, gpoints, gdim, gf, seed);
    inst.norm = norm_arg(gnorm, gn);
    inst.validate();
    emit(out_path, ofl_to_json(inst).dump(2) + "\n");
  });

  auto* gprobe = gen_cmd->add_subcommand("probing", "random probing instance");
  gprobe->add_option("--n", gn)->required();
  gprobe->add_option("--support", gsupport, "2 or 3");
  gprobe->add_option("--norm", gnorm);
  gprobe->add_option("--seed", seed);
  gprobe->add_option("--out", out_path);
  gprobe->callback([&] {
    ProbingInstance inst = gen_random_probing(gn, gsupport, seed, norm_arg(gnorm, gn));
    emit(out_path, probing_to_json(inst).dump(2) + "\n");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  } catch (const BudgetError& e) {
    std::fprintf(stderr, "budget error: %s\n", e.what());
    return 2;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "validation error: %s\n", e.what());
    return 1;
  } catch (const json::exception& e) {
    std::fprintf(stderr, "json error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
