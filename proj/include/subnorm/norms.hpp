#pragma once

// Monotone norm oracles on the non-negative orthant. Every oracle is a max
// of non-negative linear functionals evaluated through a uniform interface;
// closed-form families carry enough structure to serialize, value oracles
// are evaluation-only.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <utility>
#include <vector>

#include "subnorm/common.hpp"

namespace subnorm {

constexpr int kMaxMaskDim = 30;  // set functions / matroids are mask-indexed

// ---------------------------------------------------------------------------
// Matroid via independence oracle over bitmask subsets of [n].

struct Matroid {
  enum class Desc { Opaque, Uniform, Partition };

  int n = 0;
  std::function<bool(std::uint32_t)> indep;
  Desc desc = Desc::Opaque;
  int uniform_k = 0;
  std::vector<std::vector<int>> blocks;
  std::vector<int> caps;

  static Matroid uniform(int n, int k) {
    if (n < 1 || n > kMaxMaskDim || k < 0 || k > n)
      throw ValidationError("uniform matroid: bad n or k");
    Matroid m;
    m.n = n;
    m.desc = Desc::Uniform;
    m.uniform_k = k;
    m.indep = [k](std::uint32_t s) { return std::popcount(s) <= k; };
    return m;
  }

  static Matroid partition(int n, std::vector<std::vector<int>> blocks,
                           std::vector<int> caps) {
    if (n < 1 || n > kMaxMaskDim) throw ValidationError("partition matroid: bad n");
    if (blocks.size() != caps.size())
      throw ValidationError("partition matroid: blocks/caps size mismatch");
    std::vector<int> owner(static_cast<std::size_t>(n), -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      if (caps[b] < 0) throw ValidationError("partition matroid: negative cap");
      for (int i : blocks[b]) {
        if (i < 0 || i >= n || owner[i] != -1)
          throw ValidationError("partition matroid: blocks must partition [n]");
        owner[i] = static_cast<int>(b);
      }
    }
    for (int i = 0; i < n; ++i)
      if (owner[i] == -1) throw ValidationError("partition matroid: uncovered index");
    std::vector<std::uint32_t> block_mask(blocks.size(), 0);
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (int i : blocks[b]) block_mask[b] |= (1u << i);
    Matroid m;
    m.n = n;
    m.desc = Desc::Partition;
    m.blocks = std::move(blocks);
    m.caps = caps;
    m.indep = [block_mask, caps](std::uint32_t s) {
      for (std::size_t b = 0; b < block_mask.size(); ++b)
        if (std::popcount(s & block_mask[b]) > caps[b]) return false;
      return true;
    };
    return m;
  }

  static Matroid from_oracle(int n, std::function<bool(std::uint32_t)> fn) {
    if (n < 1 || n > kMaxMaskDim) throw ValidationError("matroid: bad n");
    Matroid m;
    m.n = n;
    m.indep = std::move(fn);
    if (!m.indep(0)) throw ValidationError("matroid: empty set must be independent");
    return m;
  }

  // Rank of a subset, by the independence-oracle greedy.
  int rank(std::uint32_t s) const {
    std::uint32_t acc = 0;
    int r = 0;
    for (int i = 0; i < n; ++i) {
      std::uint32_t bit = 1u << i;
      if ((s & bit) && indep(acc | bit)) {
        acc |= bit;
        ++r;
      }
    }
    return r;
  }
};

// ---------------------------------------------------------------------------
// Monotone set function with f(empty) = 0, mask-indexed.

struct SetFunction {
  int n = 0;
  std::function<double(std::uint32_t)> value;
  std::vector<double> table;  // non-empty iff serializable

  static SetFunction from_table(std::vector<double> t) {
    SetFunction f;
    int n = 0;
    while ((1u << n) < t.size()) ++n;
    if (t.size() < 2 || (std::size_t{1} << n) != t.size() || n > kMaxMaskDim)
      throw ValidationError("set function table size must be a power of two, >= 2");
    f.n = n;
    f.table = std::move(t);
    const auto& tab = f.table;
    if (tab[0] != 0.0) throw ValidationError("set function: f(empty) must be 0");
    std::uint32_t full = (n == 32) ? ~0u : ((1u << n) - 1u);
    for (std::uint32_t s = 0; s <= full; ++s) {
      for (int i = 0; i < n; ++i) {
        std::uint32_t bit = 1u << i;
        if (s & bit) continue;
        if (tab[s | bit] < tab[s] - kAbsTol)
          throw ValidationError("set function table is not monotone");
        for (int j = i + 1; j < n; ++j) {
          std::uint32_t bj = 1u << j;
          if (s & bj) continue;
          // increasing-differences form of submodularity
          if (tab[s | bit | bj] + tab[s] > tab[s | bit] + tab[s | bj] + kAbsTol)
            throw ValidationError("set function table is not submodular");
        }
      }
      if (s == full) break;
    }
    auto owned = std::make_shared<std::vector<double>>(f.table);
    f.value = [owned](std::uint32_t s) { return (*owned)[s]; };
    return f;
  }

  static SetFunction from_oracle(int n, std::function<double(std::uint32_t)> fn) {
    if (n < 1 || n > kMaxMaskDim) throw ValidationError("set function: bad n");
    if (fn(0) != 0.0) throw ValidationError("set function: f(empty) must be 0");
    SetFunction f;
    f.n = n;
    f.value = std::move(fn);
    return f;
  }

  static SetFunction matroid_rank(const Matroid& m) {
    SetFunction f;
    f.n = m.n;
    auto mm = std::make_shared<Matroid>(m);
    f.value = [mm](std::uint32_t s) { return static_cast<double>(mm->rank(s)); };
    return f;
  }
};

// ---------------------------------------------------------------------------
// Norm oracle interface.

class NormBase {
 public:
  virtual ~NormBase() = default;
  virtual int dim() const = 0;
  virtual double eval(const double* x, int n) const = 0;
  virtual const char* kind() const = 0;
  // true only when symmetry is structurally guaranteed
  virtual bool symmetric_hint() const { return false; }
};

class NormOracle {
 public:
  NormOracle() = default;
  explicit NormOracle(std::shared_ptr<const NormBase> p) : p_(std::move(p)) {}

  bool valid() const { return static_cast<bool>(p_); }
  int dim() const { return p_->dim(); }
  const char* kind() const { return p_->kind(); }
  bool symmetric_hint() const { return p_->symmetric_hint(); }
  const NormBase& base() const { return *p_; }

  double value(const Vec& x) const {
    check_dim(x, dim(), "norm argument");
    check_nonneg(x, "norm argument");
    return p_->eval(x.data(), dim());
  }
  // trusted fast path for inner loops
  double value_raw(const double* x, int n) const { return p_->eval(x, n); }
  double value_raw(const Vec& x) const {
    return p_->eval(x.data(), static_cast<int>(x.size()));
  }

 private:
  std::shared_ptr<const NormBase> p_;
};

namespace detail {

inline double dot_sorted(const std::vector<double>& w, const double* x, int n) {
  Vec y(x, x + n);
  std::sort(y.begin(), y.end(), std::greater<double>());
  double s = 0.0;
  int m = std::min<int>(static_cast<int>(w.size()), n);
  for (int i = 0; i < m; ++i) s += w[i] * y[i];
  return s;
}

}  // namespace detail

// --- concrete norms --------------------------------------------------------

class LpNorm final : public NormBase {
 public:
  LpNorm(double p, int n) : p_(p), n_(n) {
    if (n < 1) throw ValidationError("lp norm: dimension must be >= 1");
    if (!(p >= 1.0))  // NaN rejected too; +inf allowed
      throw ValidationError("lp norm: p must be >= 1");
  }
  int dim() const override { return n_; }
  const char* kind() const override { return "lp"; }
  bool symmetric_hint() const override { return true; }
  double p() const { return p_; }
  double eval(const double* x, int n) const override {
    if (std::isinf(p_)) {
      double m = 0.0;
      for (int i = 0; i < n; ++i) m = std::max(m, x[i]);
      return m;
    }
    if (p_ == 1.0) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += x[i];
      return s;
    }
    if (p_ == 2.0) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += x[i] * x[i];
      return std::sqrt(s);
    }
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::pow(x[i], p_);
    return std::pow(s, 1.0 / p_);
  }

 private:
  double p_;
  int n_;
};

class TopKNorm final : public NormBase {
 public:
  TopKNorm(int k, int n) : k_(k), n_(n) {
    if (n < 1 || k < 1 || k > n) throw ValidationError("top-k norm: need 1 <= k <= n");
  }
  int dim() const override { return n_; }
  const char* kind() const override { return "topk"; }
  bool symmetric_hint() const override { return true; }
  int k() const { return k_; }
  double eval(const double* x, int n) const override {
    if (k_ == n) return std::accumulate(x, x + n, 0.0);
    Vec y(x, x + n);
    std::nth_element(y.begin(), y.begin() + (k_ - 1), y.end(), std::greater<double>());
    double s = 0.0;
    for (int i = 0; i < k_; ++i) s += y[i];
    return s;
  }

 private:
  int k_, n_;
};

// <a, sorted(x) descending> for a fixed descending non-negative weight vector.
class OrderedNorm final : public NormBase {
 public:
  explicit OrderedNorm(Vec w) : w_(std::move(w)) {
    if (w_.empty()) throw ValidationError("ordered norm: empty weights");
    check_nonneg(w_, "ordered norm weights");
    for (std::size_t i = 1; i < w_.size(); ++i)
      if (w_[i] > w_[i - 1] + kAbsTol)
        throw ValidationError("ordered norm: weights must be non-increasing");
    if (w_[0] <= 0.0) throw ValidationError("ordered norm: leading weight must be > 0");
  }
  int dim() const override { return static_cast<int>(w_.size()); }
  const char* kind() const override { return "ordered"; }
  bool symmetric_hint() const override { return true; }
  const Vec& weights() const { return w_; }
  double eval(const double* x, int n) const override {
    return detail::dot_sorted(w_, x, n);
  }

 private:
  Vec w_;
};

// max over a finite set of descending weight vectors of <a, sorted(x)>.
class SymmetricMaxNorm final : public NormBase {
 public:
  explicit SymmetricMaxNorm(std::vector<Vec> vecs) : a_(std::move(vecs)) {
    if (a_.empty()) throw ValidationError("symmetric max norm: empty weight set");
    n_ = static_cast<int>(a_[0].size());
    bool has_positive = false;
    for (const Vec& a : a_) {
      check_dim(a, n_, "symmetric max weight vector");
      check_nonneg(a, "symmetric max weight vector");
      for (std::size_t i = 1; i < a.size(); ++i)
        if (a[i] > a[i - 1] + kAbsTol)
          throw ValidationError("symmetric max norm: weight vectors must be non-increasing");
      if (a[0] > 0.0) has_positive = true;
    }
    if (!has_positive)
      throw ValidationError("symmetric max norm: all weight vectors are zero");
  }
  int dim() const override { return n_; }
  const char* kind() const override { return "symmetric_max"; }
  bool symmetric_hint() const override { return true; }
  const std::vector<Vec>& vectors() const { return a_; }
  double eval(const double* x, int n) const override {
    Vec y(x, x + n);
    std::sort(y.begin(), y.end(), std::greater<double>());
    double best = 0.0;
    for (const Vec& a : a_) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += a[i] * y[i];
      best = std::max(best, s);
    }
    return best;
  }

 private:
  std::vector<Vec> a_;
  int n_ = 0;
};

// max over a finite set of non-negative linear functionals applied to x as-is
// (no sorting); the explicit form of a general monotone norm.
class MaxLinearNorm final : public NormBase {
 public:
  explicit MaxLinearNorm(std::vector<Vec> vecs) : a_(std::move(vecs)) {
    if (a_.empty()) throw ValidationError("max linear norm: empty functional set");
    n_ = static_cast<int>(a_[0].size());
    std::vector<bool> covered(static_cast<std::size_t>(n_), false);
    for (const Vec& a : a_) {
      check_dim(a, n_, "max linear functional");
      check_nonneg(a, "max linear functional");
      for (int i = 0; i < n_; ++i)
        if (a[i] > 0.0) covered[i] = true;
    }
    for (int i = 0; i < n_; ++i)
      if (!covered[i])
        throw ValidationError("max linear norm: coordinate " + std::to_string(i) +
                              " has zero weight in every functional");
  }
  int dim() const override { return n_; }
  const char* kind() const override { return "max_linear"; }
  const std::vector<Vec>& vectors() const { return a_; }
  double eval(const double* x, int n) const override {
    double best = 0.0;
    for (const Vec& a : a_) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += a[i] * x[i];
      best = std::max(best, s);
    }
    return best;
  }

 private:
  std::vector<Vec> a_;
  int n_ = 0;
};

// Continuous extension of a monotone submodular set function: sort the
// coordinates descending and take the telescoping sum of the nested level
// sets. O(n log n + n oracle calls) per evaluation.
class LovaszNorm final : public NormBase {
 public:
  explicit LovaszNorm(SetFunction f) : f_(std::move(f)) {
    if (f_.n < 1) throw ValidationError("lovasz norm: bad set function");
  }
  int dim() const override { return f_.n; }
  const char* kind() const override { return "lovasz"; }
  bool symmetric_hint() const override {
    if (f_.table.empty()) return false;
    // symmetric iff the table depends only on cardinality
    std::vector<double> by_card(static_cast<std::size_t>(f_.n) + 1,
                                -std::numeric_limits<double>::infinity());
    for (std::uint32_t s = 0; s < f_.table.size(); ++s) {
      int c = std::popcount(s);
      if (std::isinf(by_card[c]))
        by_card[c] = f_.table[s];
      else if (f_.table[s] != by_card[c])
        return false;
    }
    return true;
  }
  const SetFunction& set_function() const { return f_; }
  double eval(const double* x, int n) const override {
    Vec xv(x, x + n);
    std::vector<int> idx = sorted_desc_indices(xv);
    double total = 0.0;
    std::uint32_t level = 0;
    for (int t = 0; t < n; ++t) {
      level |= (1u << idx[t]);
      double next = (t + 1 < n) ? xv[idx[t + 1]] : 0.0;
      double width = xv[idx[t]] - next;
      if (width > 0.0) total += width * f_.value(level);
    }
    return total;
  }

 private:
  SetFunction f_;
};

// max over independent sets of the sum of selected coordinates; evaluated by
// the descending-order greedy, exact for matroids.
class MatroidRankNorm final : public NormBase {
 public:
  explicit MatroidRankNorm(Matroid m) : m_(std::move(m)) {
    if (m_.n < 1 || !m_.indep) throw ValidationError("matroid rank norm: bad matroid");
    for (int i = 0; i < m_.n; ++i)
      if (!m_.indep(1u << i))
        throw ValidationError("matroid rank norm: loop at coordinate " +
                              std::to_string(i) + " (not a norm)");
  }
  int dim() const override { return m_.n; }
  const char* kind() const override { return "matroid_rank"; }
  bool symmetric_hint() const override { return m_.desc == Matroid::Desc::Uniform; }
  const Matroid& matroid() const { return m_; }
  double eval(const double* x, int n) const override {
    Vec xv(x, x + n);
    std::vector<int> idx = sorted_desc_indices(xv);
    std::uint32_t acc = 0;
    double s = 0.0;
    for (int t = 0; t < n; ++t) {
      int i = idx[t];
      if (xv[i] <= 0.0) break;
      std::uint32_t bit = 1u << i;
      if (m_.indep(acc | bit)) {
        acc |= bit;
        s += xv[i];
      }
    }
    return s;
  }

 private:
  Matroid m_;
};

// Sum of norms on coordinate subsets (each subset view padded with zeros).
// The subsets must jointly cover [n], otherwise the sum is only a seminorm.
class PartialSumNorm final : public NormBase {
 public:
  using Part = std::pair<std::vector<int>, NormOracle>;
  PartialSumNorm(int n, std::vector<Part> parts) : n_(n), parts_(std::move(parts)) {
    if (n < 1 || parts_.empty()) throw ValidationError("partial sum norm: empty");
    std::vector<bool> covered(static_cast<std::size_t>(n), false);
    for (const auto& [ids, norm] : parts_) {
      if (static_cast<int>(ids.size()) != norm.dim())
        throw ValidationError("partial sum norm: index/dimension mismatch");
      for (int i : ids) {
        if (i < 0 || i >= n) throw ValidationError("partial sum norm: index out of range");
        covered[i] = true;
      }
    }
    for (int i = 0; i < n; ++i)
      if (!covered[i])
        throw ValidationError("partial sum norm: coordinate " + std::to_string(i) +
                              " uncovered (seminorm, not a norm)");
  }
  int dim() const override { return n_; }
  const char* kind() const override { return "partial_sum"; }
  const std::vector<Part>& parts() const { return parts_; }
  double eval(const double* x, int) const override {
    double s = 0.0;
    for (const auto& [ids, norm] : parts_) {
      Vec sub(ids.size());
      for (std::size_t t = 0; t < ids.size(); ++t) sub[t] = x[ids[t]];
      s += norm.value_raw(sub);
    }
    return s;
  }

 private:
  int n_;
  std::vector<Part> parts_;
};

// Non-negative combination of norms on the same space.
class ConicalNorm final : public NormBase {
 public:
  using Term = std::pair<double, NormOracle>;
  explicit ConicalNorm(std::vector<Term> terms) : terms_(std::move(terms)) {
    if (terms_.empty()) throw ValidationError("conical norm: empty");
    n_ = terms_[0].second.dim();
    for (const auto& [c, norm] : terms_) {
      if (!(c >= 0.0)) throw ValidationError("conical norm: negative coefficient");
      if (norm.dim() != n_) throw ValidationError("conical norm: dimension mismatch");
    }
    Vec e(static_cast<std::size_t>(n_), 0.0);
    for (int i = 0; i < n_; ++i) {
      e[i] = 1.0;
      if (eval(e.data(), n_) <= 0.0)
        throw ValidationError("conical norm: degenerate on coordinate " + std::to_string(i));
      e[i] = 0.0;
    }
  }
  int dim() const override { return n_; }
  const char* kind() const override { return "conical"; }
  bool symmetric_hint() const override {
    for (const auto& [c, norm] : terms_)
      if (c > 0.0 && !norm.symmetric_hint()) return false;
    return true;
  }
  const std::vector<Term>& terms() const { return terms_; }
  double eval(const double* x, int n) const override {
    double s = 0.0;
    for (const auto& [c, norm] : terms_)
      if (c > 0.0) s += c * norm.value_raw(x, n);
    return s;
  }

 private:
  std::vector<Term> terms_;
  int n_ = 0;
};

// ||(s_i * x_i)_i|| for a strictly positive scale vector.
class RescaledNorm final : public NormBase {
 public:
  RescaledNorm(Vec scale, NormOracle inner) : s_(std::move(scale)), inner_(std::move(inner)) {
    check_dim(s_, inner_.dim(), "rescale vector");
    for (double v : s_)
      if (!(v > 0.0)) throw ValidationError("rescaled norm: scale must be > 0");
  }
  int dim() const override { return inner_.dim(); }
  const char* kind() const override { return "rescaled"; }
  const Vec& scale() const { return s_; }
  const NormOracle& inner() const { return inner_; }
  double eval(const double* x, int n) const override {
    Vec y(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) y[i] = s_[i] * x[i];
    return inner_.value_raw(y);
  }

 private:
  Vec s_;
  NormOracle inner_;
};

// Opaque evaluation callback; not serializable.
class ValueOracleNorm final : public NormBase {
 public:
  ValueOracleNorm(int n, std::function<double(const Vec&)> fn, bool symmetric)
      : n_(n), fn_(std::move(fn)), symmetric_(symmetric) {
    if (n < 1 || !fn_) throw ValidationError("value oracle norm: bad arguments");
  }
  int dim() const override { return n_; }
  const char* kind() const override { return "value_oracle"; }
  bool symmetric_hint() const override { return symmetric_; }
  double eval(const double* x, int n) const override {
    return fn_(Vec(x, x + n));
  }

 private:
  int n_;
  std::function<double(const Vec&)> fn_;
  bool symmetric_;
};

// --- factories -------------------------------------------------------------

inline NormOracle lp_norm(double p, int n) {
  return NormOracle(std::make_shared<LpNorm>(p, n));
}
inline NormOracle linf_norm(int n) {
  return lp_norm(std::numeric_limits<double>::infinity(), n);
}
inline NormOracle topk_norm(int k, int n) {
  return NormOracle(std::make_shared<TopKNorm>(k, n));
}
inline NormOracle ordered_norm(Vec weights) {
  return NormOracle(std::make_shared<OrderedNorm>(std::move(weights)));
}
inline NormOracle symmetric_max_norm(std::vector<Vec> vectors) {
  return NormOracle(std::make_shared<SymmetricMaxNorm>(std::move(vectors)));
}
inline NormOracle max_linear_norm(std::vector<Vec> vectors) {
  return NormOracle(std::make_shared<MaxLinearNorm>(std::move(vectors)));
}
inline NormOracle lovasz_norm(SetFunction f) {
  return NormOracle(std::make_shared<LovaszNorm>(std::move(f)));
}
inline NormOracle matroid_rank_norm(Matroid m) {
  return NormOracle(std::make_shared<MatroidRankNorm>(std::move(m)));
}
inline NormOracle partial_sum_norm(int n, std::vector<PartialSumNorm::Part> parts) {
  return NormOracle(std::make_shared<PartialSumNorm>(n, std::move(parts)));
}
inline NormOracle conical_norm(std::vector<ConicalNorm::Term> terms) {
  return NormOracle(std::make_shared<ConicalNorm>(std::move(terms)));
}
inline NormOracle rescaled_norm(Vec scale, NormOracle inner) {
  return NormOracle(std::make_shared<RescaledNorm>(std::move(scale), std::move(inner)));
}
inline NormOracle value_oracle_norm(int n, std::function<double(const Vec&)> fn,
                                    bool symmetric_hint = false) {
  return NormOracle(std::make_shared<ValueOracleNorm>(n, std::move(fn), symmetric_hint));
}

// --- core operations -------------------------------------------------------

// ||base with coordinate i set to z|| - ||base||. Requires base[j] == 0 for
// j >= i: this is the prefix shape used by the online marginals, where the
// tail coordinates have not arrived yet.
inline double marginal(const NormOracle& norm, const Vec& base, int i, double z) {
  int n = norm.dim();
  check_dim(base, n, "marginal base");
  check_nonneg(base, "marginal base");
  if (i < 0 || i >= n) throw ValidationError("marginal: index out of range");
  if (!(z >= 0.0)) throw ValidationError("marginal: z must be >= 0");
  for (int j = i; j < n; ++j)
    if (base[j] != 0.0)
      throw ValidationError("marginal: base must be zero at positions >= i");
  Vec y = base;
  double before = norm.value_raw(y);
  y[i] = z;
  return norm.value_raw(y) - before;
}

// In-place variant for hot loops: base value precomputed, scratch mutated and
// restored.
inline double marginal_raw(const NormOracle& norm, Vec& scratch, int i, double z,
                           double base_value) {
  double saved = scratch[i];
  scratch[i] = z;
  double v = norm.value_raw(scratch);
  scratch[i] = saved;
  return v - base_value;
}

// ||(1,...,1)|| / min_i ||e_i||; interpolates between max-like (1) and
// sum-like (n) behavior. Exact oracle evaluations, no sampling.
inline double rho(const NormOracle& norm) {
  int n = norm.dim();
  Vec e(static_cast<std::size_t>(n), 0.0);
  double min_unit = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    e[i] = 1.0;
    min_unit = std::min(min_unit, norm.value_raw(e));
    e[i] = 0.0;
  }
  if (!(min_unit > 0.0))
    throw ValidationError("rho: some ||e_i|| is zero; not a norm");
  Vec ones(static_cast<std::size_t>(n), 1.0);
  return norm.value_raw(ones) / min_unit;
}

// sigma variant used by the adversarial tree construction: normalizes by the
// largest unit vector instead of the smallest.
inline double sigma_ratio(const NormOracle& norm) {
  int n = norm.dim();
  Vec e(static_cast<std::size_t>(n), 0.0);
  double max_unit = 0.0;
  for (int i = 0; i < n; ++i) {
    e[i] = 1.0;
    max_unit = std::max(max_unit, norm.value_raw(e));
    e[i] = 0.0;
  }
  if (!(max_unit > 0.0)) throw ValidationError("sigma: degenerate norm");
  Vec ones(static_cast<std::size_t>(n), 1.0);
  return norm.value_raw(ones) / max_unit;
}

}  // namespace subnorm
