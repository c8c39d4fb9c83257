#pragma once

// Monte-Carlo verification of the explicit competitive bounds. Uniform
// instances are checked against 2 (ceil(log2 rho) + 1) |F*| f + 8 ||d*||,
// non-uniform ones against 36 ||d*|| + 48 (log2 rho + 1) sum_k f(c*_k),
// both with a 3-standard-error allowance on the empirical mean.
// Optionally splits the cost per run into short-/long-distance stages by
// recomputing the ring decomposition of the offline clusters (analysis-side
// bookkeeping; the online rules never see it).

#include <algorithm>
#include <cmath>
#include <vector>

#include "subnorm/common.hpp"
#include "subnorm/norms.hpp"
#include "subnorm/ofl.hpp"
#include "subnorm/ofl_nonuniform.hpp"
#include "subnorm/ofl_offline.hpp"

namespace subnorm {

struct BoundReport {
  int runs = 0;
  double mean_cost = 0.0;
  double stderr_cost = 0.0;
  double opt_cost = 0.0;
  double norm_dstar = 0.0;
  double sum_fstar = 0.0;   // original opening costs of the offline facilities
  int opt_facilities = 0;
  double rho_value = 1.0;
  double bound = 0.0;
  bool pass = false;
  double mean_ratio = 0.0;  // mean cost / opt cost
  // optional stage split over the ensemble
  bool has_stages = false;
  double sum_fstar_rounded = 0.0;  // power-of-two opening costs of the offline set
  double mean_sd_cost = 0.0;
  double mean_ld_cost = 0.0;
  double stderr_sd_cost = 0.0;
  double stderr_ld_cost = 0.0;
};

namespace detail {

// ring index of a demand at distance d from its offline center, radii
// r, 2r, 4r, ..., with everything at distance <= r in ring 0
inline int ring_of(double d, double r, int L) {
  if (d <= r || r <= 0.0) return d <= r ? 0 : L;
  int ell = static_cast<int>(std::ceil(std::log2(d / r) - 1e-12));
  return std::clamp(ell, 0, L);
}

}  // namespace detail

inline BoundReport verify_bounds(const OflInstance& inst,
                                 const std::vector<OflTrace>& traces,
                                 const OfflineOpt& opt, bool with_stages = false) {
  BoundReport rep;
  rep.runs = static_cast<int>(traces.size());
  rep.opt_cost = opt.cost;
  rep.norm_dstar = opt.dstar.empty() ? 0.0 : inst.norm.value_raw(opt.dstar);
  rep.opt_facilities = static_cast<int>(opt.facilities.size());
  for (int q : opt.facilities) rep.sum_fstar += inst.cost_at(q);
  rep.rho_value = rho(inst.norm);

  KahanSum mean, sq;
  for (const OflTrace& t : traces) {
    double c = t.total_cost();
    mean.add(c);
    sq.add(c * c);
  }
  if (rep.runs > 0) {
    rep.mean_cost = mean.value() / rep.runs;
    double var = std::max(0.0, sq.value() / rep.runs - rep.mean_cost * rep.mean_cost);
    rep.stderr_cost = rep.runs > 1 ? std::sqrt(var / (rep.runs - 1)) : 0.0;
    rep.mean_ratio = opt.cost > 0.0 ? rep.mean_cost / opt.cost : 0.0;
  }

  double log_rho = std::log2(std::max(1.0, rep.rho_value));
  if (inst.uniform_cost) {
    double levels = std::ceil(log_rho - 1e-12) + 1.0;
    rep.bound = 2.0 * levels * rep.opt_facilities * inst.uniform_f + 8.0 * rep.norm_dstar;
  } else {
    rep.bound = 36.0 * rep.norm_dstar + 48.0 * (log_rho + 1.0) * rep.sum_fstar;
  }
  rep.pass = rep.mean_cost <= rep.bound + 3.0 * rep.stderr_cost + kAbsTol;

  if (with_stages && rep.runs > 0 && !opt.facilities.empty()) {
    const int n = inst.num_requests();
    const double ones_norm = [&] {
      Vec ones(static_cast<std::size_t>(n), 1.0);
      return inst.norm.value_raw(ones);
    }();
    const double r = rep.norm_dstar / ones_norm;
    const int L = static_cast<int>(std::ceil(log_rho - 1e-12));
    const double lambda = 5.0;  // stage threshold constant of the analysis

    KahanSum sd_total, ld_total, sd_sq, ld_sq;
    for (const OflTrace& t : traces) {
      std::vector<int> open_before;  // F_{i-1}
      KahanSum sd_run, ld_run;
      for (int i = 0; i < n; ++i) {
        const OflStep& s = t.steps[static_cast<std::size_t>(i)];
        double charge = 0.0;
        if (s.opened)
          charge = t.costs_rounded ? round_down_pow2(inst.cost_at(*s.opened))
                                   : inst.cost_at(*s.opened);
        double cost_i = s.delta.front() + charge;
        int center = opt.assignment[static_cast<std::size_t>(i)];
        double dstar_i = opt.dstar[static_cast<std::size_t>(i)];
        int ell = detail::ring_of(dstar_i, r, L);
        double radius = (lambda + 1.0) * std::ldexp(r, ell);
        bool short_stage;
        if (inst.uniform_cost) {
          double dcf = detail::dist_to_set(inst.metric, center, open_before).first;
          short_stage = dcf <= std::ldexp(r, ell);
        } else {
          short_stage = s.dhat <= radius;
        }
        if (short_stage)
          sd_run.add(cost_i);
        else
          ld_run.add(cost_i);
        if (s.opened) detail::insert_sorted(open_before, *s.opened);
      }
      sd_total.add(sd_run.value());
      ld_total.add(ld_run.value());
      sd_sq.add(sd_run.value() * sd_run.value());
      ld_sq.add(ld_run.value() * ld_run.value());
    }
    rep.has_stages = true;
    for (int q : opt.facilities) rep.sum_fstar_rounded += round_down_pow2(inst.cost_at(q));
    rep.mean_sd_cost = sd_total.value() / rep.runs;
    rep.mean_ld_cost = ld_total.value() / rep.runs;
    if (rep.runs > 1) {
      double sd_var =
          std::max(0.0, sd_sq.value() / rep.runs - rep.mean_sd_cost * rep.mean_sd_cost);
      double ld_var =
          std::max(0.0, ld_sq.value() / rep.runs - rep.mean_ld_cost * rep.mean_ld_cost);
      rep.stderr_sd_cost = std::sqrt(sd_var / (rep.runs - 1));
      rep.stderr_ld_cost = std::sqrt(ld_var / (rep.runs - 1));
    }
  }
  return rep;
}

}  // namespace subnorm
