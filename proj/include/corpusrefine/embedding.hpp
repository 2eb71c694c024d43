// SPDX-License-Identifier: Apache-2.0
//
// Skip-gram word vectors and PV-DBOW document vectors, both trained through a
// shared hierarchical-softmax tree.
#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "corpusrefine/corpus.hpp"
#include "corpusrefine/error.hpp"
#include "corpusrefine/hs.hpp"
#include "corpusrefine/huffman.hpp"
#include "corpusrefine/matrix.hpp"
#include "corpusrefine/rng.hpp"

namespace corpusrefine {

struct EmbeddingConfig {
  std::size_t dim = 200;
  std::size_t window = 5;
  std::size_t epochs = 5;
  double alpha0 = 0.025;
  double alpha_min = 0.0001;
  std::uint64_t min_count = 1;
  std::uint64_t seed = 1;
  bool deterministic = true;
  std::size_t threads = 0;  // parallel mode only; 0 = hardware concurrency

  void validate() const {
    if (dim < 1) throw ConfigError("dim must be >= 1");
    if (window < 1) throw ConfigError("window must be >= 1");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (min_count < 1) throw ConfigError("min_count must be >= 1");
    if (!(alpha_min > 0.0) || !(alpha0 > alpha_min)) throw ConfigError("need alpha0 > alpha_min > 0");
  }

  friend bool operator==(const EmbeddingConfig&, const EmbeddingConfig&) = default;
};

struct WordModel {
  Vocabulary vocab;
  Matrix input;  // V x D token vectors
  Matrix nodes;  // (V-1) x D hierarchical-softmax node vectors
  EmbeddingConfig config;

  std::size_t dim() const noexcept { return input.cols(); }
};

struct DocModel {
  std::vector<std::string> ids;
  Matrix vectors;  // one row per document, in training order
  EmbeddingConfig config;

  std::span<const double> vector(std::string_view id) const {
    for (std::size_t i = 0; i < ids.size(); ++i)
      if (ids[i] == id) return vectors.row(i);
    throw OutOfVocabulary(std::string(id));
  }
};

struct TrainStats {
  std::uint64_t pairs = 0;              // hierarchical-softmax steps taken
  std::vector<double> epoch_mean_loss;  // per epoch, mean loss per step
};

inline std::span<const double> vector_of(const WordModel& model, std::string_view token) {
  return model.input.row(model.vocab.index(token));
}

inline double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ConfigError("cosine_similarity: dimension mismatch");
  double na = norm(a);
  double nb = norm(b);
  if (!(na > 0.0) || !(nb > 0.0)) throw DataError("cosine_similarity: zero-norm vector");
  return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

namespace detail {

inline constexpr std::uint64_t kInitStream = 0x1;
inline constexpr std::uint64_t kWindowStream = 0x2;

inline Rng stream(std::uint64_t seed, std::uint64_t id) { return Rng(splitmix64(seed) ^ splitmix64(id * 0x9E37u + 7)); }

// FNV-1a; keys a token's initial vector to its spelling rather than its rank.
inline std::uint64_t token_key(std::string_view token) {
  std::uint64_t h = 0xCBF29CE484222325ull;
  for (unsigned char c : token) {
    h ^= c;
    h *= 0x100000001B3ull;
  }
  return h;
}

inline void init_uniform(std::span<double> row, Rng& rng) {
  const double d = static_cast<double>(row.size());
  for (double& x : row) x = (rng.uniform() - 0.5) / d;
}

inline std::vector<std::vector<std::uint32_t>> encode_docs(const std::vector<TokenList>& docs, const Vocabulary& vocab) {
  std::vector<std::vector<std::uint32_t>> out;
  out.reserve(docs.size());
  for (const auto& d : docs) {
    std::vector<std::uint32_t> ids;
    ids.reserve(d.size());
    for (const auto& t : d)
      if (auto i = vocab.find(t)) ids.push_back(static_cast<std::uint32_t>(*i));
    out.push_back(std::move(ids));
  }
  return out;
}

// Linear decay from alpha0 to alpha_min over the whole run.
inline double learning_rate(const EmbeddingConfig& c, std::uint64_t processed, std::uint64_t total) {
  double frac = total ? static_cast<double>(processed) / static_cast<double>(total) : 1.0;
  return std::max(c.alpha_min, c.alpha0 - (c.alpha0 - c.alpha_min) * frac);
}

// Runs `body(doc_index, processed_counter, rng, scratch, loss, pairs)` over
// every document for one epoch. In deterministic mode the documents are visited
// in order on the calling thread; otherwise contiguous shards run concurrently
// and write the shared matrices without synchronization (hogwild).
template <typename Body>
void run_epoch(const EmbeddingConfig& c, std::size_t epoch, std::size_t num_docs, std::uint64_t& processed,
               double& loss, std::uint64_t& pairs, Body&& body) {
  if (c.deterministic) {
    Rng rng = stream(c.seed, (kWindowStream << 32) + epoch);
    std::vector<double> scratch(c.dim);
    for (std::size_t d = 0; d < num_docs; ++d) body(d, processed, rng, scratch, loss, pairs);
    return;
  }
  std::size_t nthreads = c.threads ? c.threads : std::max(1u, std::thread::hardware_concurrency());
  nthreads = std::min(nthreads, std::max<std::size_t>(num_docs, 1));
  std::atomic<std::uint64_t> shared_processed{processed};
  std::vector<double> losses(nthreads, 0.0);
  std::vector<std::uint64_t> pair_counts(nthreads, 0);
  std::vector<std::thread> workers;
  for (std::size_t t = 0; t < nthreads; ++t) {
    workers.emplace_back([&, t] {
      Rng rng = stream(c.seed, (kWindowStream << 32) + epoch * 1024 + t);
      std::vector<double> scratch(c.dim);
      std::size_t lo = num_docs * t / nthreads, hi = num_docs * (t + 1) / nthreads;
      for (std::size_t d = lo; d < hi; ++d) {
        std::uint64_t local = shared_processed.load(std::memory_order_relaxed);
        std::uint64_t before = local;
        body(d, local, rng, scratch, losses[t], pair_counts[t]);
        shared_processed.fetch_add(local - before, std::memory_order_relaxed);
      }
    });
  }
  for (auto& w : workers) w.join();
  processed = shared_processed.load();
  for (std::size_t t = 0; t < nthreads; ++t) {
    loss += losses[t];
    pairs += pair_counts[t];
  }
}

inline void finish_epoch(TrainStats& stats, double loss, std::uint64_t pairs_before) {
  std::uint64_t n = stats.pairs - pairs_before;
  stats.epoch_mean_loss.push_back(n ? loss / static_cast<double>(n) : 0.0);
}

}  // namespace detail

/// Skip-gram with hierarchical softmax. For every position a window radius is
/// drawn uniformly from 1..window and each context token in range is predicted
/// from the center token's vector. A token's initial vector depends only on
/// the seed and the token itself, so retraining on a grown corpus starts every
/// shared token from the same point.
inline WordModel train_word2vec(const std::vector<TokenList>& docs, const EmbeddingConfig& config,
                                TrainStats* stats_out = nullptr) {
  config.validate();
  if (docs.empty()) throw DataError("train_word2vec: empty corpus");
  WordModel model;
  model.config = config;
  model.vocab = build_vocabulary(docs, config.min_count);
  const HuffmanCoding tree = build_huffman(model.vocab.counts());
  const std::size_t v = model.vocab.size();
  const std::size_t dim = config.dim;

  model.input = Matrix(v, dim);
  model.nodes = Matrix(v - 1, dim, 0.0);
  for (std::size_t i = 0; i < v; ++i) {
    Rng init = detail::stream(config.seed ^ detail::kInitStream, detail::token_key(model.vocab.token(i)));
    detail::init_uniform(model.input.row(i), init);
  }

  const auto encoded = detail::encode_docs(docs, model.vocab);
  std::uint64_t corpus_tokens = 0;
  for (const auto& d : encoded) corpus_tokens += d.size();
  const std::uint64_t total = corpus_tokens * config.epochs;

  TrainStats stats;
  std::uint64_t processed = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    double loss = 0.0;
    std::uint64_t pairs_before = stats.pairs;
    detail::run_epoch(config, epoch, encoded.size(), processed, loss, stats.pairs,
                      [&](std::size_t d, std::uint64_t& done, Rng& rng, std::vector<double>& scratch, double& acc,
                          std::uint64_t& pairs) {
                        const auto& ids = encoded[d];
                        const std::size_t n = ids.size();
                        for (std::size_t i = 0; i < n; ++i, ++done) {
                          const double alpha = detail::learning_rate(config, done, total);
                          const std::size_t r = rng.between(1, config.window);
                          const std::size_t lo = i >= r ? i - r : 0;
                          const std::size_t hi = std::min(n - 1, i + r);
                          auto center = model.input.row(ids[i]);
                          for (std::size_t j = lo; j <= hi; ++j) {
                            if (j == i) continue;
                            const auto target = ids[j];
                            acc += hs_step(center, model.nodes, tree.paths[target], tree.codes[target], alpha,
                                           scratch);
                            ++pairs;
                          }
                        }
                      });
    detail::finish_epoch(stats, loss, pairs_before);
  }
  if (!model.input.all_finite() || !model.nodes.all_finite()) throw DataError("train_word2vec: training diverged");
  if (stats_out) *stats_out = std::move(stats);
  return model;
}

/// PV-DBOW: each document vector predicts every in-vocabulary token of its
/// document through the hierarchical-softmax tree. Document i's initial vector
/// is drawn from its own seeded stream.
inline DocModel train_doc2vec(const std::vector<TokenList>& docs, const std::vector<std::string>& ids,
                              const EmbeddingConfig& config, TrainStats* stats_out = nullptr) {
  config.validate();
  if (docs.empty()) throw DataError("train_doc2vec: empty corpus");
  if (ids.size() != docs.size()) throw ConfigError("train_doc2vec: one id per document required");
  Vocabulary vocab = build_vocabulary(docs, config.min_count);
  const HuffmanCoding tree = build_huffman(vocab.counts());
  const std::size_t dim = config.dim;

  DocModel model;
  model.ids = ids;
  model.config = config;
  model.vectors = Matrix(docs.size(), dim);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    Rng rng = detail::stream(config.seed, (std::uint64_t{1} << 40) + d);
    detail::init_uniform(model.vectors.row(d), rng);
  }
  Matrix nodes(vocab.size() - 1, dim, 0.0);

  const auto encoded = detail::encode_docs(docs, vocab);
  std::uint64_t corpus_tokens = 0;
  for (const auto& d : encoded) corpus_tokens += d.size();
  const std::uint64_t total = corpus_tokens * config.epochs;

  TrainStats stats;
  std::uint64_t processed = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    double loss = 0.0;
    std::uint64_t pairs_before = stats.pairs;
    detail::run_epoch(config, epoch, encoded.size(), processed, loss, stats.pairs,
                      [&](std::size_t d, std::uint64_t& done, Rng&, std::vector<double>& scratch, double& acc,
                          std::uint64_t& pairs) {
                        auto doc_vec = model.vectors.row(d);
                        for (auto t : encoded[d]) {
                          const double alpha = detail::learning_rate(config, done++, total);
                          acc += hs_step(doc_vec, nodes, tree.paths[t], tree.codes[t], alpha, scratch);
                          ++pairs;
                        }
                      });
    detail::finish_epoch(stats, loss, pairs_before);
  }
  if (!model.vectors.all_finite()) throw DataError("train_doc2vec: training diverged");
  if (stats_out) *stats_out = std::move(stats);
  return model;
}

inline DocModel train_doc2vec(const DocumentSet& docs, const EmbeddingConfig& config, TrainStats* stats_out = nullptr) {
  std::vector<std::string> ids;
  for (const auto& d : docs.documents) ids.push_back(d.id);
  return train_doc2vec(docs.token_lists(), ids, config, stats_out);
}

}  // namespace corpusrefine
