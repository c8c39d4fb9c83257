#pragma once

// Sandwiching a symmetric norm between ordered norms built from indicator
// evaluations only. With rho = ||1|| / ||e_1||, levels m_j are the least
// prefix lengths whose indicator value reaches 2^j * ||e_1||, weight vectors
// are the flat prefixes b_j = (||1_{<=m_j}|| / m_j) * 1_{<=m_j}, and the
// induced ordered norm ||x||' = 2 * sum_j <b_j, sorted(x)> satisfies
//   ||x|| <= ||x||' <= 2 (floor(log2 rho) + 1) ||x||.
// Everything is computed with O(log^2 n) indicator evaluations, so a pure
// value oracle suffices.

#include <cmath>
#include <vector>

#include "subnorm/common.hpp"
#include "subnorm/norms.hpp"
#include "subnorm/submodular_check.hpp"

namespace subnorm {

struct OrderedApprox {
  NormOracle source;
  double rho = 1.0;
  std::vector<int> levels;              // m_0 <= m_1 <= ... <= m_J
  std::vector<double> level_values;     // ||1_{<= m_j}||
  std::vector<Vec> weight_vectors;      // b_j, descending
  double factor = 2.0;                  // 2 * (floor(log2 rho) + 1)
  NormOracle approx;                    // the induced ordered norm

  double approx_value(const Vec& x) const { return approx.value(x); }
};

inline OrderedApprox ordered_approx(const NormOracle& norm) {
  const int n = norm.dim();
  if (!sampled_symmetry_check(norm))
    throw ValidationError("ordered_approx: norm failed the sampled symmetry check");

  Vec buf(static_cast<std::size_t>(n), 0.0);
  auto indicator_value = [&](int m) {
    for (int i = 0; i < n; ++i) buf[i] = i < m ? 1.0 : 0.0;
    return norm.value_raw(buf);
  };

  const double unit = indicator_value(1);
  if (!(unit > 0.0)) throw ValidationError("ordered_approx: ||e_1|| must be > 0");
  const double full = indicator_value(n);
  const double r = full / unit;
  // guard against log2 landing an ulp under an exact power of two
  const int levels_count = static_cast<int>(std::floor(std::log2(r) + 1e-12)) + 1;

  OrderedApprox out;
  out.source = norm;
  out.rho = r;
  out.factor = 2.0 * levels_count;

  for (int j = 0; j < levels_count; ++j) {
    const double threshold = std::ldexp(unit, j);  // 2^j * ||e_1||
    int lo = 1, hi = n;                             // least m with value >= threshold
    while (lo < hi) {
      int mid = lo + (hi - lo) / 2;
      if (indicator_value(mid) >= threshold * (1.0 - 1e-12))
        hi = mid;
      else
        lo = mid + 1;
    }
    const int m = lo;
    const double val = indicator_value(m);
    out.levels.push_back(m);
    out.level_values.push_back(val);
    Vec b(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < m; ++i) b[i] = val / m;
    out.weight_vectors.push_back(std::move(b));
  }

  Vec weights(static_cast<std::size_t>(n), 0.0);
  for (const Vec& b : out.weight_vectors)
    for (int i = 0; i < n; ++i) weights[i] += 2.0 * b[i];
  out.approx = ordered_norm(std::move(weights));
  return out;
}

// Symmetric norm max_k k^{-eps} * (sum of k largest); the adversarial family
// showing the log factor in the ordered-norm sandwich cannot be improved.
inline NormOracle tightness_norm(int n, double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw ValidationError("tightness norm: eps must be in (0, 1/2)");
  if (n < 1) throw ValidationError("tightness norm: n must be >= 1");
  std::vector<Vec> vecs;
  vecs.reserve(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    Vec a(static_cast<std::size_t>(n), 0.0);
    double w = std::pow(static_cast<double>(k), -eps);
    for (int i = 0; i < k; ++i) a[i] = w;
    vecs.push_back(std::move(a));
  }
  return symmetric_max_norm(std::move(vecs));
}

// The (sub)optimal-approximation gap fixtures: a submodular but highly
// asymmetric norm (sum of a partial max and a partial sum, ratio n/2 between
// the two half indicators), and the block-max norm (max of block sums) that
// no submodular upper bound can approximate better than sqrt(n)/2.
struct GapFixtures {
  NormOracle asymmetric_submodular;  // ||x_A||_inf + ||x_B||_1, A first half
  NormOracle block_max;              // max_k sum over block k, sqrt(n) blocks
};

inline GapFixtures make_gap_fixtures(int n) {
  if (n < 2 || n % 2 != 0)
    throw ValidationError("gap fixtures: n must be even");
  int root = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (root * root != n)
    throw ValidationError("gap fixtures: n must be a perfect square");

  std::vector<int> first_half, second_half;
  for (int i = 0; i < n / 2; ++i) first_half.push_back(i);
  for (int i = n / 2; i < n; ++i) second_half.push_back(i);
  std::vector<PartialSumNorm::Part> parts;
  parts.emplace_back(first_half, linf_norm(n / 2));
  parts.emplace_back(second_half, lp_norm(1.0, n / 2));

  std::vector<Vec> block_rows;
  for (int b = 0; b < root; ++b) {
    Vec row(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < root; ++i) row[b * root + i] = 1.0;
    block_rows.push_back(std::move(row));
  }

  GapFixtures out;
  out.asymmetric_submodular = partial_sum_norm(n, std::move(parts));
  out.block_max = max_linear_norm(std::move(block_rows));
  return out;
}

}  // namespace subnorm
