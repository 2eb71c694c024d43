// SPDX-License-Identifier: Apache-2.0
//
// Document ordering: PCA projection of document vectors, then greedy
// farthest-point sampling seeded at the most central document.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "corpusrefine/error.hpp"
#include "corpusrefine/matrix.hpp"

namespace corpusrefine {

using Point2 = std::array<double, 2>;

struct Projection {
  std::vector<double> mean;                     // D
  Matrix components;                            // k x D, orthonormal rows
  std::vector<double> explained_variance;       // k, descending
  Matrix points;                                // N x k

  std::vector<Point2> points2() const {
    std::vector<Point2> out(points.rows());
    for (std::size_t i = 0; i < points.rows(); ++i) out[i] = {points(i, 0), points.cols() > 1 ? points(i, 1) : 0.0};
    return out;
  }
};

/// Principal components of the sample covariance (N-1 denominator). Each
/// component is signed so that its largest-magnitude entry is positive (first
/// such entry on ties).
inline Projection pca_project(const Matrix& data, std::size_t k = 2) {
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();
  if (n < 2) throw DataError("PCA needs at least 2 points");
  if (k < 1 || d < k) throw ConfigError("PCA output dimension must be in 1..D");

  Projection p;
  p.mean.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) p.mean[j] += data(i, j);
  for (double& m : p.mean) m /= static_cast<double>(n);

  Eigen::MatrixXd centered(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) centered(i, j) = data(i, j) - p.mean[j];

  Eigen::MatrixXd cov = (centered.transpose() * centered) / static_cast<double>(n - 1);
  if (!(cov.trace() > 0.0)) throw DataError("PCA input has zero variance");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if (eig.info() != Eigen::Success) throw DataError("PCA eigendecomposition failed");

  // Eigen returns ascending eigenvalues.
  p.components = Matrix(k, d);
  p.explained_variance.resize(k);
  for (std::size_t c = 0; c < k; ++c) {
    const Eigen::Index col = static_cast<Eigen::Index>(d - 1 - c);
    Eigen::VectorXd v = eig.eigenvectors().col(col);
    Eigen::Index arg = 0;
    for (Eigen::Index j = 1; j < v.size(); ++j)
      if (std::abs(v(j)) > std::abs(v(arg))) arg = j;
    if (v(arg) < 0) v = -v;
    for (std::size_t j = 0; j < d; ++j) p.components(c, j) = v(static_cast<Eigen::Index>(j));
    p.explained_variance[c] = std::max(0.0, eig.eigenvalues()(col));
  }

  p.points = Matrix(n, k);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t c = 0; c < k; ++c) {
      double s = 0.0;
      for (std::size_t j = 0; j < d; ++j) s += centered(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) * p.components(c, j);
      p.points(i, c) = s;
    }
  return p;
}

/// Index of the point nearest (Euclidean) to the mean of all points; lowest
/// index wins ties.
inline std::size_t central_document(const std::vector<Point2>& points) {
  if (points.empty()) throw DataError("central_document: no points");
  Point2 mean{0.0, 0.0};
  for (const auto& p : points) {
    mean[0] += p[0];
    mean[1] += p[1];
  }
  mean[0] /= static_cast<double>(points.size());
  mean[1] /= static_cast<double>(points.size());
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    double dx = points[i][0] - mean[0], dy = points[i][1] - mean[1];
    double dist = std::sqrt(dx * dx + dy * dy);
    if (dist < best_d) {
      best_d = dist;
      best = i;
    }
  }
  return best;
}

/// 1 - cos(a, b); zero if either point has zero norm.
inline double cosine_distance(const Point2& a, const Point2& b) noexcept {
  double na = std::hypot(a[0], a[1]);
  double nb = std::hypot(b[0], b[1]);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return 1.0 - (a[0] * b[0] + a[1] * b[1]) / (na * nb);
}

struct SelectionOrder {
  std::vector<std::size_t> order;
  std::vector<double> min_distance;  // maximin distance at the time of each pick; +inf for the first
  std::size_t batch_size = 50;

  std::size_t size() const noexcept { return order.size(); }
};

/// Greedy maximin ordering under cosine distance: every pick maximizes the
/// minimum distance to everything already picked, lowest index on ties.
inline SelectionOrder greedy_fps(const std::vector<Point2>& points, std::size_t start, std::size_t n,
                                 std::size_t batch_size = 50) {
  const std::size_t total = points.size();
  if (n < 1 || n > total) throw ConfigError("greedy_fps: need 1 <= n <= N");
  if (start >= total) throw ConfigError("greedy_fps: start index out of range");

  SelectionOrder sel;
  sel.batch_size = batch_size;
  sel.order.reserve(n);
  sel.min_distance.reserve(n);
  std::vector<double> min_d(total, std::numeric_limits<double>::infinity());
  std::vector<bool> taken(total, false);

  std::size_t pick = start;
  double pick_d = std::numeric_limits<double>::infinity();
  for (std::size_t step = 0; step < n; ++step) {
    sel.order.push_back(pick);
    sel.min_distance.push_back(pick_d);
    taken[pick] = true;
    if (step + 1 == n) break;
    const Point2& last = points[pick];
    std::size_t best = total;
    double best_d = -1.0;
    for (std::size_t i = 0; i < total; ++i) {
      if (taken[i]) continue;
      min_d[i] = std::min(min_d[i], cosine_distance(points[i], last));
      if (min_d[i] > best_d) {
        best_d = min_d[i];
        best = i;
      }
    }
    pick = best;
    pick_d = best_d;
  }
  return sel;
}

/// Number of documents in use at iteration t (1-based).
inline std::size_t documents_used(std::size_t t, std::size_t corpus_size, std::size_t batch_size = 50) {
  return std::min(batch_size * t, corpus_size);
}

/// Document indices in use at iteration t: the first min(batch*t, N) picks.
inline std::vector<std::size_t> cumulative_batches(const SelectionOrder& sel, std::size_t t) {
  std::size_t m = documents_used(t, sel.order.size(), sel.batch_size);
  return {sel.order.begin(), sel.order.begin() + static_cast<std::ptrdiff_t>(m)};
}

inline Matrix to_matrix(const std::vector<Point2>& pts) {
  Matrix m(pts.size(), 2);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    m(i, 0) = pts[i][0];
    m(i, 1) = pts[i][1];
  }
  return m;
}

}  // namespace corpusrefine
