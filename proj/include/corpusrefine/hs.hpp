// SPDX-License-Identifier: Apache-2.0
//
// Hierarchical-softmax objective for one (input vector, target path) pair:
//   loss = -sum_j log sigmoid(sign_j * <center, node_j>)
// with sign_j = +1 for code bit 0 and -1 for code bit 1.
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "corpusrefine/error.hpp"
#include "corpusrefine/huffman.hpp"
#include "corpusrefine/matrix.hpp"

namespace corpusrefine {

/// -log(sigmoid(x)) without overflow.
inline double neg_log_sigmoid(double x) noexcept {
  return x >= 0.0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x));
}

inline double sigmoid(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  double e = std::exp(x);
  return e / (1.0 + e);
}

struct HsGradient {
  double loss = 0.0;
  std::vector<double> center;              // dL/d center
  std::vector<std::vector<double>> nodes;  // dL/d node_j
};

/// Loss and exact gradient, no update.
inline HsGradient hs_gradient(std::span<const double> center, std::span<const std::span<const double>> nodes,
                              std::span<const std::uint8_t> code) {
  HsGradient g;
  g.center.assign(center.size(), 0.0);
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    double s = HuffmanCoding::sign(code[j]);
    double f = dot(center, nodes[j]);
    g.loss += neg_log_sigmoid(s * f);
    double coeff = -s * (1.0 - sigmoid(s * f));  // dL/df
    std::vector<double> gn(center.size());
    for (std::size_t k = 0; k < center.size(); ++k) {
      g.center[k] += coeff * nodes[j][k];
      gn[k] = coeff * center[k];
    }
    g.nodes.push_back(std::move(gn));
  }
  return g;
}

namespace detail {

// Shared SGD kernel. `node_row(j)` yields the writable row for path entry j;
// `scratch` must hold center.size() doubles. Returns the pre-update loss.
template <typename NodeRow>
double hs_update(std::span<double> center, std::size_t path_len, NodeRow&& node_row,
                 std::span<const std::uint8_t> code, double alpha, std::span<double> scratch) {
  const std::size_t d = center.size();
  for (std::size_t k = 0; k < d; ++k) scratch[k] = 0.0;
  double loss = 0.0;
  for (std::size_t j = 0; j < path_len; ++j) {
    std::span<double> node = node_row(j);
    double s = HuffmanCoding::sign(code[j]);
    double f = dot(center, node);
    if (!std::isfinite(f)) throw DataError("non-finite activation in hierarchical-softmax step");
    loss += neg_log_sigmoid(s * f);
    double g = alpha * s * (1.0 - sigmoid(s * f));
    for (std::size_t k = 0; k < d; ++k) scratch[k] += g * node[k];
    for (std::size_t k = 0; k < d; ++k) node[k] += g * center[k];
  }
  for (std::size_t k = 0; k < d; ++k) center[k] += scratch[k];
  return loss;
}

}  // namespace detail

/// One SGD step on the objective above, applied in place to `center` and each
/// node row (both updated from their pre-step values). Returns the loss
/// before the update.
inline double hs_step(std::span<double> center, std::span<const std::span<double>> nodes,
                      std::span<const std::uint8_t> code, double alpha) {
  if (nodes.empty()) throw ConfigError("hs_step: empty path");
  if (nodes.size() != code.size()) throw ConfigError("hs_step: path and code length differ");
  if (!(alpha > 0.0)) throw ConfigError("hs_step: alpha must be positive");
  for (double x : center)
    if (!std::isfinite(x)) throw DataError("hs_step: non-finite center vector");
  for (const auto& node : nodes) {
    if (node.size() != center.size()) throw ConfigError("hs_step: node and center dimensions differ");
    for (double x : node)
      if (!std::isfinite(x)) throw DataError("hs_step: non-finite node vector");
  }
  std::vector<double> scratch(center.size());
  return detail::hs_update(
      center, nodes.size(), [&](std::size_t j) { return nodes[j]; }, code, alpha, scratch);
}

/// Step against rows of a node matrix addressed by a Huffman path.
inline double hs_step(std::span<double> center, Matrix& node_matrix, std::span<const std::uint32_t> path,
                      std::span<const std::uint8_t> code, double alpha, std::span<double> scratch) {
  return detail::hs_update(
      center, path.size(), [&](std::size_t j) { return node_matrix.row(path[j]); }, code, alpha, scratch);
}

}  // namespace corpusrefine
