#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "subnorm/common.hpp"

namespace subnorm {

// Finite metric, one of: explicit distance matrix, points in a unit cube
// with Euclidean distance, or a rooted edge-weighted tree with path
// distances.
class MetricSpace {
 public:
  enum class Kind { Matrix, Euclidean, Tree };

  static MetricSpace from_matrix(std::vector<std::vector<double>> d) {
    MetricSpace m;
    m.kind_ = Kind::Matrix;
    m.matrix_ = std::move(d);
    m.size_ = static_cast<int>(m.matrix_.size());
    m.validate_matrix();
    return m;
  }

  static MetricSpace from_points(std::vector<Vec> pts) {
    MetricSpace m;
    m.kind_ = Kind::Euclidean;
    m.points_ = std::move(pts);
    m.size_ = static_cast<int>(m.points_.size());
    if (m.size_ < 1) throw ValidationError("metric: empty point set");
    std::size_t dim = m.points_[0].size();
    for (const Vec& p : m.points_)
      if (p.size() != dim) throw ValidationError("metric: inconsistent point dimension");
    return m;
  }

  // parent[i] = parent node index (-1 for the root), edge[i] = length of the
  // edge to the parent (ignored at the root).
  static MetricSpace from_tree(std::vector<int> parent, std::vector<double> edge) {
    MetricSpace m;
    m.kind_ = Kind::Tree;
    m.parent_ = std::move(parent);
    m.edge_ = std::move(edge);
    m.size_ = static_cast<int>(m.parent_.size());
    if (m.size_ < 1 || m.edge_.size() != m.parent_.size())
      throw ValidationError("metric: bad tree arrays");
    m.depth_.assign(m.parent_.size(), -1);
    m.root_dist_.assign(m.parent_.size(), 0.0);
    int root = -1;
    for (int i = 0; i < m.size_; ++i) {
      if (m.parent_[i] < 0) {
        if (root != -1) throw ValidationError("metric: tree must have one root");
        root = i;
        m.depth_[i] = 0;
      } else if (m.parent_[i] >= m.size_) {
        throw ValidationError("metric: tree parent out of range");
      } else if (!(m.edge_[i] >= 0.0)) {
        throw ValidationError("metric: negative edge length");
      }
    }
    if (root == -1) throw ValidationError("metric: tree has no root");
    // parents must come before children for the one-pass fill; re-scan until
    // settled to accept arbitrary orderings of a valid tree
    int remaining = m.size_ - 1;
    while (remaining > 0) {
      int progressed = 0;
      for (int i = 0; i < m.size_; ++i) {
        if (m.depth_[i] >= 0 || m.depth_[m.parent_[i]] < 0) continue;
        m.depth_[i] = m.depth_[m.parent_[i]] + 1;
        m.root_dist_[i] = m.root_dist_[m.parent_[i]] + m.edge_[i];
        ++progressed;
        --remaining;
      }
      if (progressed == 0) throw ValidationError("metric: tree contains a cycle");
    }
    return m;
  }

  Kind kind() const { return kind_; }
  int size() const { return size_; }
  const std::vector<std::vector<double>>& matrix() const { return matrix_; }
  const std::vector<Vec>& points() const { return points_; }
  const std::vector<int>& tree_parent() const { return parent_; }
  const std::vector<double>& tree_edge() const { return edge_; }
  int tree_depth(int v) const { return depth_[v]; }

  double dist(int a, int b) const {
    if (a == b) return 0.0;
    switch (kind_) {
      case Kind::Matrix:
        return matrix_[a][b];
      case Kind::Euclidean: {
        double s = 0.0;
        for (std::size_t t = 0; t < points_[a].size(); ++t) {
          double d = points_[a][t] - points_[b][t];
          s += d * d;
        }
        return std::sqrt(s);
      }
      case Kind::Tree: {
        double d = 0.0;
        int u = a, v = b;
        while (depth_[u] > depth_[v]) {
          d += edge_[u];
          u = parent_[u];
        }
        while (depth_[v] > depth_[u]) {
          d += edge_[v];
          v = parent_[v];
        }
        while (u != v) {
          d += edge_[u] + edge_[v];
          u = parent_[u];
          v = parent_[v];
        }
        return d;
      }
    }
    return 0.0;
  }

 private:
  void validate_matrix() const {
    const int n = size_;
    if (n < 1) throw ValidationError("metric: empty matrix");
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(matrix_[i].size()) != n)
        throw ValidationError("metric: matrix is not square");
      if (matrix_[i][i] != 0.0) throw ValidationError("metric: nonzero diagonal");
      for (int j = 0; j < n; ++j) {
        if (!(matrix_[i][j] >= 0.0)) throw ValidationError("metric: negative distance");
        if (std::fabs(matrix_[i][j] - matrix_[j][i]) > kAbsTol)
          throw ValidationError("metric: matrix not symmetric");
      }
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          if (matrix_[i][j] > matrix_[i][k] + matrix_[k][j] + kAbsTol +
                                  kRelTol * matrix_[i][j])
            throw ValidationError("metric: triangle inequality fails at (" +
                                  std::to_string(i) + "," + std::to_string(j) + "," +
                                  std::to_string(k) + ")");
  }

  Kind kind_ = Kind::Matrix;
  int size_ = 0;
  std::vector<std::vector<double>> matrix_;
  std::vector<Vec> points_;
  std::vector<int> parent_;
  std::vector<double> edge_;
  std::vector<int> depth_;
  std::vector<double> root_dist_;
};

}  // namespace subnorm
