#pragma once

// Sampled checkers for continuous submodularity and the diminishing-returns
// strengthening. Four equivalent characterizations of submodularity are
// exposed so a violation found under one can be cross-checked under the
// others:
//   1  lattice:       f(max(x,y)) + f(min(x,y)) <= f(x) + f(y)
//   2  disjoint:      f(x) + f(x+y+z) <= f(x+y) + f(x+z), supp(y) ^ supp(z) empty
//   3  restricted DR: f(w+a*e_i) - f(w) <= f(x+a*e_i) - f(x), x <= w, x_i = w_i
//   4  two-coordinate: f(x) + f(x+a*e_i+b*e_j) <= f(x+a*e_i) + f(x+b*e_j)
// The full DR check drops the x_i = w_i restriction in form 3; among norms it
// singles out coordinate rescalings of the sum norm.

#include <algorithm>
#include <optional>
#include <vector>

#include "subnorm/common.hpp"
#include "subnorm/norms.hpp"

namespace subnorm {

struct SubmodViolation {
  Vec x, y;     // the two primary points of the tested inequality
  int i = -1, j = -1;
  double a = 0.0, b = 0.0;
  double lhs = 0.0, rhs = 0.0, slack = 0.0;  // slack = lhs - rhs > tol
};

struct SubmodCheckReport {
  int trials = 0;
  int characterization = 1;  // 0 marks the full DR check
  double tol = kRelTol;
  std::vector<SubmodViolation> violations;
  bool passed() const { return violations.empty(); }
};

namespace detail {

inline bool record_if_violated(SubmodCheckReport& rep, SubmodViolation v,
                               std::size_t keep = 64) {
  double scale = std::max(std::fabs(v.lhs), std::fabs(v.rhs));
  double margin = kAbsTol + rep.tol * std::max(1.0, scale);
  if (v.lhs <= v.rhs + margin) return false;
  v.slack = v.lhs - v.rhs;
  if (rep.violations.size() < keep) rep.violations.push_back(std::move(v));
  return true;
}

inline double heavy_amount(Rng& rng) {
  double u = rng.uniform();
  return std::min(std::pow(1.0 - u, -1.5) - 1.0, 1e3);
}

}  // namespace detail

inline SubmodCheckReport check_submodular(const NormOracle& f, const VectorSampler& sampler,
                                          int trials, double tol, int characterization,
                                          std::uint64_t seed = 1) {
  if (trials < 1) throw ValidationError("check_submodular: trials must be >= 1");
  if (!(tol > 0.0)) throw ValidationError("check_submodular: tol must be > 0");
  if (characterization < 1 || characterization > 4)
    throw ValidationError("check_submodular: characterization must be 1..4");
  const int n = f.dim();
  Rng rng(seed);
  SubmodCheckReport rep;
  rep.trials = trials;
  rep.characterization = characterization;
  rep.tol = tol;

  for (int t = 0; t < trials; ++t) {
    switch (characterization) {
      case 1: {
        Vec x = sampler(rng, n), y = sampler(rng, n);
        Vec hi(static_cast<std::size_t>(n)), lo(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
          hi[i] = std::max(x[i], y[i]);
          lo[i] = std::min(x[i], y[i]);
        }
        SubmodViolation v;
        v.lhs = f.value_raw(hi) + f.value_raw(lo);
        v.rhs = f.value_raw(x) + f.value_raw(y);
        v.x = std::move(x);
        v.y = std::move(y);
        detail::record_if_violated(rep, std::move(v));
        break;
      }
      case 2: {
        Vec x = sampler(rng, n), y = sampler(rng, n), z = sampler(rng, n);
        for (int i = 0; i < n; ++i) {
          if (rng.uniform() < 0.5)
            y[i] = 0.0;
          else
            z[i] = 0.0;
        }
        Vec xy = x, xz = x, xyz = x;
        for (int i = 0; i < n; ++i) {
          xy[i] += y[i];
          xz[i] += z[i];
          xyz[i] += y[i] + z[i];
        }
        SubmodViolation v;
        v.lhs = f.value_raw(x) + f.value_raw(xyz);
        v.rhs = f.value_raw(xy) + f.value_raw(xz);
        v.x = std::move(x);
        v.y = std::move(xyz);
        detail::record_if_violated(rep, std::move(v));
        break;
      }
      case 3: {
        Vec w = sampler(rng, n);
        Vec x(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) x[i] = rng.uniform() * w[i];
        int i = rng.below(n);
        x[i] = w[i];  // the restriction that distinguishes this from full DR
        double a = detail::heavy_amount(rng);
        Vec wa = w, xa = x;
        wa[i] += a;
        xa[i] += a;
        SubmodViolation v;
        v.lhs = f.value_raw(wa) - f.value_raw(w);
        v.rhs = f.value_raw(xa) - f.value_raw(x);
        v.x = std::move(x);
        v.y = std::move(w);
        v.i = i;
        v.a = a;
        detail::record_if_violated(rep, std::move(v));
        break;
      }
      default: {
        Vec x = sampler(rng, n);
        int i = rng.below(n);
        int j = rng.below(n);
        if (n > 1)
          while (j == i) j = rng.below(n);
        double a = detail::heavy_amount(rng), b = detail::heavy_amount(rng);
        Vec xa = x, xb = x, xab = x;
        xa[i] += a;
        xb[j] += b;
        xab[i] += a;
        xab[j] += b;
        SubmodViolation v;
        v.lhs = f.value_raw(x) + f.value_raw(xab);
        v.rhs = f.value_raw(xa) + f.value_raw(xb);
        v.x = std::move(x);
        v.y = std::move(xab);
        v.i = i;
        v.j = j;
        v.a = a;
        v.b = b;
        detail::record_if_violated(rep, std::move(v));
        break;
      }
    }
  }
  return rep;
}

// Full diminishing-returns check: x <= w sampled without pinning x_i = w_i.
inline SubmodCheckReport check_dr_submodular(const NormOracle& f, const VectorSampler& sampler,
                                             int trials, double tol, std::uint64_t seed = 1) {
  if (trials < 1) throw ValidationError("check_dr_submodular: trials must be >= 1");
  if (!(tol > 0.0)) throw ValidationError("check_dr_submodular: tol must be > 0");
  const int n = f.dim();
  Rng rng(seed);
  SubmodCheckReport rep;
  rep.trials = trials;
  rep.characterization = 0;
  rep.tol = tol;
  for (int t = 0; t < trials; ++t) {
    Vec w = sampler(rng, n);
    Vec x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[i] = rng.uniform() * w[i];
    int i = rng.below(n);
    double a = detail::heavy_amount(rng);
    Vec wa = w, xa = x;
    wa[i] += a;
    xa[i] += a;
    SubmodViolation v;
    v.lhs = f.value_raw(wa) - f.value_raw(w);
    v.rhs = f.value_raw(xa) - f.value_raw(x);
    v.x = std::move(x);
    v.y = std::move(w);
    v.i = i;
    v.a = a;
    detail::record_if_violated(rep, std::move(v));
  }
  return rep;
}

// Exhaustive scan over 0/1 vectors (and unit increments a = b = 1), small n
// only. Used to pin counterexample fixtures exactly.
inline SubmodCheckReport check_submodular_exhaustive01(const NormOracle& f, double tol,
                                                       int characterization) {
  const int n = f.dim();
  if (n > 16) throw BudgetError("exhaustive 0/1 scan limited to n <= 16");
  SubmodCheckReport rep;
  rep.characterization = characterization;
  rep.tol = tol;
  const std::uint32_t lim = 1u << n;
  auto vec_of = [n](std::uint32_t mask) {
    Vec v(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) v[i] = 1.0;
    return v;
  };
  switch (characterization) {
    case 1:
      for (std::uint32_t mx = 0; mx < lim; ++mx)
        for (std::uint32_t my = 0; my < lim; ++my) {
          ++rep.trials;
          SubmodViolation v;
          v.lhs = f.value_raw(vec_of(mx | my)) + f.value_raw(vec_of(mx & my));
          v.rhs = f.value_raw(vec_of(mx)) + f.value_raw(vec_of(my));
          v.x = vec_of(mx);
          v.y = vec_of(my);
          detail::record_if_violated(rep, std::move(v), 256);
        }
      break;
    case 2:
      for (std::uint32_t mx = 0; mx < lim; ++mx)
        for (std::uint32_t my = 0; my < lim; ++my) {
          if (my & mx) continue;
          std::uint32_t rest = (lim - 1) & ~(mx | my);
          for (std::uint32_t mz = rest;; mz = (mz - 1) & rest) {
            ++rep.trials;
            SubmodViolation v;
            v.lhs = f.value_raw(vec_of(mx)) + f.value_raw(vec_of(mx | my | mz));
            v.rhs = f.value_raw(vec_of(mx | my)) + f.value_raw(vec_of(mx | mz));
            v.x = vec_of(mx);
            v.y = vec_of(mx | my | mz);
            detail::record_if_violated(rep, std::move(v), 256);
            if (mz == 0) break;
          }
        }
      break;
    case 3:
      for (std::uint32_t mw = 0; mw < lim; ++mw)
        for (std::uint32_t mx = mw;; mx = (mx - 1) & mw) {
          for (int i = 0; i < n; ++i) {
            if (((mw >> i) & 1u) != ((mx >> i) & 1u)) continue;  // need x_i = w_i
            ++rep.trials;
            Vec w = vec_of(mw), x = vec_of(mx);
            Vec wa = w, xa = x;
            wa[i] += 1.0;
            xa[i] += 1.0;
            SubmodViolation v;
            v.lhs = f.value_raw(wa) - f.value_raw(w);
            v.rhs = f.value_raw(xa) - f.value_raw(x);
            v.x = std::move(x);
            v.y = std::move(w);
            v.i = i;
            v.a = 1.0;
            detail::record_if_violated(rep, std::move(v), 256);
          }
          if (mx == 0) break;
        }
      break;
    default:
      for (std::uint32_t mx = 0; mx < lim; ++mx)
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            ++rep.trials;
            Vec x = vec_of(mx);
            Vec xa = x, xb = x, xab = x;
            xa[i] += 1.0;
            xb[j] += 1.0;
            xab[i] += 1.0;
            xab[j] += 1.0;
            SubmodViolation v;
            v.lhs = f.value_raw(x) + f.value_raw(xab);
            v.rhs = f.value_raw(xa) + f.value_raw(xb);
            v.x = std::move(x);
            v.y = std::move(xab);
            v.i = i;
            v.j = j;
            v.a = 1.0;
            v.b = 1.0;
            detail::record_if_violated(rep, std::move(v), 256);
          }
      break;
  }
  return rep;
}

// Deterministic grid search for a DR violation witness on 2d slices
// (x = z*e_k2, w = s*e_k1 + z*e_k2, bump e_k1). Returns the first hit.
inline std::optional<SubmodViolation> dr_witness_grid(const NormOracle& f, double tol = kRelTol) {
  const int n = f.dim();
  const double grid[] = {0.25, 0.5, 1.0, 2.0, 4.0};
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      for (double s : grid)
        for (double z : grid)
          for (double a : grid) {
            Vec x(static_cast<std::size_t>(n), 0.0), w(static_cast<std::size_t>(n), 0.0);
            x[k] = z;
            w[k] = z;
            w[i] = s;
            Vec wa = w, xa = x;
            wa[i] += a;
            xa[i] += a;
            double lhs = f.value_raw(wa) - f.value_raw(w);
            double rhs = f.value_raw(xa) - f.value_raw(x);
            if (lhs > rhs + kAbsTol + tol * std::max(1.0, std::max(std::fabs(lhs), std::fabs(rhs)))) {
              SubmodViolation v;
              v.x = std::move(x);
              v.y = std::move(w);
              v.i = i;
              v.a = a;
              v.lhs = lhs;
              v.rhs = rhs;
              v.slack = lhs - rhs;
              return v;
            }
          }
    }
  return std::nullopt;
}

// Permutation-invariance spot check; used as a guard before constructions
// that assume symmetry.
inline bool sampled_symmetry_check(const NormOracle& f, int trials = 64,
                                   double tol = kRelTol, std::uint64_t seed = 7) {
  const int n = f.dim();
  Rng rng(seed);
  VectorSampler sampler;
  for (int t = 0; t < trials; ++t) {
    Vec x = sampler(rng, n);
    Vec y = x;
    for (int i = n - 1; i > 0; --i) std::swap(y[i], y[rng.below(i + 1)]);
    if (!approx_eq(f.value_raw(x), f.value_raw(y), kAbsTol, tol)) return false;
  }
  return true;
}

}  // namespace subnorm
