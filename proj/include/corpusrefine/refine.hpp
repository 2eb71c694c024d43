// SPDX-License-Identifier: Apache-2.0
//
// Iterative corpus refinement: grow the training corpus in farthest-point
// batches, retrain the word model each time, and stop once the similarity
// centroid of the candidate compositions stops moving.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "corpusrefine/corpus.hpp"
#include "corpusrefine/embedding.hpp"
#include "corpusrefine/error.hpp"
#include "corpusrefine/materials.hpp"
#include "corpusrefine/selection.hpp"

namespace corpusrefine {

struct RefineConfig {
  std::size_t batch_size = 50;
  double threshold = 0.03;
  std::size_t max_iterations = 0;       // 0 = until the corpus is exhausted
  std::vector<std::string> required_tokens;  // empty = candidate elements + anchors
  PropertyAnchors anchors;
  EmbeddingConfig doc_embedding;
  EmbeddingConfig word_embedding;

  void validate() const {
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (!(threshold > 0.0) || !std::isfinite(threshold)) throw ConfigError("threshold must be positive and finite");
    if (anchors.terms.size() != 2) throw ConfigError("exactly two anchor terms required");
    doc_embedding.validate();
    word_embedding.validate();
  }
};

struct IterationRecord {
  std::size_t iteration = 0;  // 1-based
  std::size_t documents_used = 0;
  bool vocab_complete = false;
  std::optional<Point2> centroid;
  std::optional<double> displacement;

  friend bool operator==(const IterationRecord&, const IterationRecord&) = default;
};

/// Document map and the farthest-point ordering derived from it.
struct SelectionPlan {
  DocModel doc_model;
  Projection projection;
  std::size_t central = 0;
  SelectionOrder order;
};

struct RefinementResult {
  std::vector<IterationRecord> records;
  bool converged = false;
  WordModel final_model;
  SelectionPlan selection;
};

inline bool vocabulary_complete(const WordModel& model, const std::vector<std::string>& required) {
  return std::all_of(required.begin(), required.end(), [&](const auto& t) { return model.vocab.contains(t); });
}

inline double centroid_displacement(const Point2& prev, const Point2& curr) {
  return std::hypot(curr[0] - prev[0], curr[1] - prev[1]);
}

/// Doc2Vec over the full corpus, PCA to 2D, then the full farthest-point
/// ordering from the central document.
inline SelectionPlan plan_selection(const DocumentSet& docs, const EmbeddingConfig& doc_config,
                                    std::size_t batch_size = 50) {
  if (docs.empty()) throw DataError("empty corpus");
  SelectionPlan plan;
  plan.doc_model = train_doc2vec(docs, doc_config);
  plan.projection = pca_project(plan.doc_model.vectors, 2);
  auto pts = plan.projection.points2();
  plan.central = central_document(pts);
  plan.order = greedy_fps(pts, plan.central, pts.size(), batch_size);
  return plan;
}

inline std::vector<std::string> required_tokens(const RefineConfig& config, const std::vector<Composition>& candidates) {
  if (!config.required_tokens.empty()) return config.required_tokens;
  std::set<std::string> seen;
  std::vector<std::string> out;
  for (const auto& c : candidates)
    for (const auto& e : c.elements)
      if (seen.insert(e).second) out.push_back(e);
  for (const auto& a : config.anchors.terms)
    if (seen.insert(a).second) out.push_back(a);
  return out;
}

using IterationObserver = std::function<void(const IterationRecord&)>;

/// The refinement loop over a precomputed selection plan. Each iteration
/// trains a fresh, identically seeded word model on the cumulative batches (in
/// selection order). Displacement is measured against the most recent
/// iteration that had a centroid; the first centroid never stops the loop.
inline RefinementResult refine_with_plan(const DocumentSet& docs, SelectionPlan plan,
                                         const std::vector<Composition>& candidates, const RefineConfig& config,
                                         const IterationObserver& observer = {}) {
  config.validate();
  if (docs.empty()) throw DataError("empty corpus");
  if (candidates.empty()) throw DataError("no candidate compositions");
  if (plan.order.size() != docs.size()) throw ConfigError("selection plan does not cover the corpus");

  std::set<std::string> all_tokens;
  for (const auto& d : docs.documents) all_tokens.insert(d.tokens.begin(), d.tokens.end());
  for (const auto& a : config.anchors.terms)
    if (!all_tokens.count(a)) throw DataError("anchor term '" + a + "' does not occur anywhere in the corpus");

  const auto required = required_tokens(config, candidates);
  const std::size_t n = docs.size();
  const std::size_t exhaust = (n + config.batch_size - 1) / config.batch_size;
  const std::size_t max_iter = config.max_iterations ? config.max_iterations : exhaust;

  plan.order.batch_size = config.batch_size;
  RefinementResult result;
  std::optional<Point2> previous;
  for (std::size_t t = 1; t <= max_iter; ++t) {
    IterationRecord rec;
    rec.iteration = t;
    auto subset = cumulative_batches(plan.order, t);
    rec.documents_used = subset.size();
    std::vector<TokenList> training;
    training.reserve(subset.size());
    for (auto i : subset) training.push_back(docs.documents[i].tokens);

    result.final_model = train_word2vec(training, config.word_embedding);
    rec.vocab_complete = vocabulary_complete(result.final_model, required);
    if (rec.vocab_complete) {
      rec.centroid = centroid(similarity_points(result.final_model, candidates, config.anchors));
      if (previous) rec.displacement = centroid_displacement(*previous, *rec.centroid);
      previous = rec.centroid;
    }
    result.records.push_back(rec);
    if (observer) observer(rec);
    if (rec.displacement && *rec.displacement < config.threshold) {
      result.converged = true;
      break;
    }
  }
  if (!previous) throw DataError("corpus exhausted before every required token appeared; no centroid defined");
  result.selection = std::move(plan);
  return result;
}

inline RefinementResult run_refinement(const DocumentSet& docs, const std::vector<Composition>& candidates,
                                       const RefineConfig& config, const IterationObserver& observer = {}) {
  config.validate();
  if (candidates.empty()) throw DataError("no candidate compositions");
  return refine_with_plan(docs, plan_selection(docs, config.doc_embedding, config.batch_size), candidates, config,
                          observer);
}

}  // namespace corpusrefine
