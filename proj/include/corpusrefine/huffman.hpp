// SPDX-License-Identifier: Apache-2.0
//
// Huffman coding over token counts for hierarchical softmax.
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <queue>
#include <string>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "corpusrefine/error.hpp"

namespace corpusrefine {

struct HuffmanCoding {
  /// Root-to-leaf code bits per token (0 = left, 1 = right).
  std::vector<std::vector<std::uint8_t>> codes;
  /// Internal-node rows visited from root to leaf, in 0..V-2.
  std::vector<std::vector<std::uint32_t>> paths;

  std::size_t leaves() const noexcept { return codes.size(); }
  std::size_t internal_nodes() const noexcept { return codes.empty() ? 0 : codes.size() - 1; }

  /// Code bit 0 is the positive class of the node's sigmoid.
  static double sign(std::uint8_t bit) noexcept { return bit ? -1.0 : 1.0; }
};

/// Leaves are 0..V-1 and internal nodes V..2V-2 in creation order. Each merge
/// takes the two lowest-count nodes, ties going to the lower node id; the
/// first one popped gets bit 0.
inline HuffmanCoding build_huffman(std::span<const std::uint64_t> counts) {
  const std::size_t v = counts.size();
  if (v < 2) throw DataError("Huffman coding needs at least 2 tokens, got " + std::to_string(v));

  using Item = std::pair<std::uint64_t, std::uint32_t>;  // (count, node id)
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (std::size_t i = 0; i < v; ++i) heap.emplace(counts[i], static_cast<std::uint32_t>(i));

  std::vector<std::uint32_t> parent(2 * v - 1, 0);
  std::vector<std::uint8_t> bit(2 * v - 1, 0);
  for (std::uint32_t next = static_cast<std::uint32_t>(v); next < 2 * v - 1; ++next) {
    auto [c0, n0] = heap.top();
    heap.pop();
    auto [c1, n1] = heap.top();
    heap.pop();
    parent[n0] = next;
    parent[n1] = next;
    bit[n1] = 1;
    heap.emplace(c0 + c1, next);
  }

  const std::uint32_t root = static_cast<std::uint32_t>(2 * v - 2);
  HuffmanCoding h;
  h.codes.resize(v);
  h.paths.resize(v);
  for (std::size_t leaf = 0; leaf < v; ++leaf) {
    auto& code = h.codes[leaf];
    auto& path = h.paths[leaf];
    for (std::uint32_t n = static_cast<std::uint32_t>(leaf); n != root; n = parent[n]) {
      code.push_back(bit[n]);
      path.push_back(parent[n] - static_cast<std::uint32_t>(v));
    }
    std::reverse(code.begin(), code.end());
    std::reverse(path.begin(), path.end());
  }
  return h;
}

}  // namespace corpusrefine
