#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace subnorm {

using Vec = std::vector<double>;

// Bad input (dimension mismatch, negative entries, malformed instances).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Enumeration/search would exceed the configured desk-scale budget.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

constexpr double kAbsTol = 1e-12;
constexpr double kRelTol = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

inline bool approx_le(double a, double b, double abs_tol = kAbsTol,
                      double rel_tol = kRelTol) {
  return a <= b + abs_tol + rel_tol * std::max(std::fabs(a), std::fabs(b));
}

inline bool approx_eq(double a, double b, double abs_tol = kAbsTol,
                      double rel_tol = kRelTol) {
  return std::fabs(a - b) <= abs_tol + rel_tol * std::max(std::fabs(a), std::fabs(b));
}

// Neumaier-compensated accumulation; keeps telescoping sums at machine precision.
struct KahanSum {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v))
      comp += (sum - t) + v;
    else
      comp += (v - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

// ---------------------------------------------------------------------------
// Deterministic RNG. splitmix64 finalizer as a counter hash so draws are a
// pure function of (seed, stream, counter); traces replay exactly regardless
// of how many draws other code paths consume.

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline double u64_to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Counter mode: uniform(stream, counter) in [0, 1).
struct CounterRng {
  std::uint64_t seed = 0;
  explicit CounterRng(std::uint64_t s) : seed(s) {}
  std::uint64_t bits(std::uint64_t stream, std::uint64_t counter) const {
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ counter);
  }
  double uniform(std::uint64_t stream, std::uint64_t counter) const {
    return u64_to_unit(bits(stream, counter));
  }
};

// Sequential mode for samplers and generators.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(splitmix64(seed ^ 0x5851f42d4c957f2dULL)) {}
  std::uint64_t bits() {
    state = splitmix64(state);
    return state;
  }
  double uniform() { return u64_to_unit(bits()); }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // uniform integer in [0, n)
  int below(int n) { return static_cast<int>(bits() % static_cast<std::uint64_t>(n)); }
};

// Random non-negative test vectors: a mix of dense uniform, sparse, and
// capped heavy-tailed entries. Counterexamples to submodularity-style
// inequalities tend to live on sparse/spiky inputs, so plain uniform
// sampling alone is too forgiving.
struct VectorSampler {
  double sparse_zero_prob = 0.7;
  double heavy_cap = 1e3;
  Vec operator()(Rng& rng, int n) const {
    Vec x(static_cast<std::size_t>(n));
    int mode = rng.below(3);
    for (int i = 0; i < n; ++i) {
      switch (mode) {
        case 0:
          x[i] = rng.uniform();
          break;
        case 1:
          x[i] = rng.uniform() < sparse_zero_prob ? 0.0 : rng.uniform();
          break;
        default: {
          double u = rng.uniform();
          x[i] = std::min(std::pow(1.0 - u, -1.5) - 1.0, heavy_cap);
          break;
        }
      }
    }
    return x;
  }
};

inline void check_nonneg(const Vec& x, const char* what = "vector") {
  for (double v : x)
    if (!(v >= 0.0))
      throw ValidationError(std::string(what) + ": negative or NaN entry");
}

inline void check_dim(const Vec& x, int n, const char* what = "vector") {
  if (static_cast<int>(x.size()) != n)
    throw ValidationError(std::string(what) + ": dimension mismatch, got " +
                          std::to_string(x.size()) + " want " + std::to_string(n));
}

// Indices of x sorted by descending value; ties broken by lower index so
// downstream greedy/level-set logic is reproducible.
inline std::vector<int> sorted_desc_indices(const Vec& x) {
  std::vector<int> idx(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) idx[i] = static_cast<int>(i);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return x[a] > x[b]; });
  return idx;
}

inline Vec sorted_desc(const Vec& x) {
  Vec y = x;
  std::sort(y.begin(), y.end(), std::greater<double>());
  return y;
}

}  // namespace subnorm
