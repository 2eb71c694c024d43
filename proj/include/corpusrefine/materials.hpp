// SPDX-License-Identifier: Apache-2.0
//
// Compositions as fraction-weighted sums of element word vectors, and their
// coordinates in property-similarity space.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "corpusrefine/csv.hpp"
#include "corpusrefine/embedding.hpp"
#include "corpusrefine/error.hpp"
#include "corpusrefine/resources.hpp"
#include "corpusrefine/selection.hpp"

namespace corpusrefine {

struct Composition {
  std::string id;
  std::vector<std::string> elements;  // declared element set, fixed order
  std::vector<double> fractions;      // same order, nonnegative, sum 1

  double fraction(std::string_view element) const {
    for (std::size_t i = 0; i < elements.size(); ++i)
      if (elements[i] == element) return fractions[i];
    return 0.0;
  }

  /// e.g. "Ag0.2Pd0.8"; zero fractions omitted.
  std::string formula() const {
    std::string out;
    for (std::size_t i = 0; i < elements.size(); ++i) {
      if (fractions[i] <= 0.0) continue;
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6g", fractions[i]);
      out += elements[i] + buf;
    }
    return out;
  }
};

inline constexpr double kRenormalizeTolerance = 1e-6;

namespace detail {

inline void normalize_fractions(std::vector<double>& f, const std::string& what) {
  double sum = 0.0;
  for (double x : f) {
    if (!std::isfinite(x)) throw DataError(what + ": non-finite fraction");
    if (x < 0.0) throw DataError(what + ": negative fraction");
    sum += x;
  }
  if (std::abs(sum - 1.0) > kRenormalizeTolerance)
    throw DataError(what + ": fractions sum to " + std::to_string(sum) + ", expected 1");
  for (double& x : f) x /= sum;
}

}  // namespace detail

/// Parses "Ag0.2Pd0.8"-style strings. Every declared element is present in the
/// result (zero when not mentioned); an empty declared set means "the elements
/// mentioned, in order of appearance".
inline Composition parse_composition(const std::string& spec, const std::vector<std::string>& declared = {}) {
  static const std::regex term(R"(([A-Z][a-z]?)([0-9]*\.?[0-9]+(?:[eE][-+]?[0-9]+)?))");
  Composition c;
  c.elements = declared;
  c.fractions.assign(declared.size(), 0.0);
  std::size_t consumed = 0;
  for (auto it = std::sregex_iterator(spec.begin(), spec.end(), term); it != std::sregex_iterator(); ++it) {
    const auto& m = *it;
    if (static_cast<std::size_t>(m.position()) != consumed) break;
    consumed += static_cast<std::size_t>(m.length());
    std::string sym = m[1];
    if (!resources::is_element(sym)) throw DataError("composition '" + spec + "': unknown element " + sym);
    double value = std::stod(m[2]);
    auto pos = std::find(c.elements.begin(), c.elements.end(), sym);
    if (pos == c.elements.end()) {
      if (!declared.empty()) throw DataError("composition '" + spec + "': element " + sym + " not declared");
      c.elements.push_back(sym);
      c.fractions.push_back(value);
    } else {
      c.fractions[static_cast<std::size_t>(pos - c.elements.begin())] += value;
    }
  }
  if (consumed != spec.size() || c.elements.empty()) throw DataError("cannot parse composition '" + spec + "'");
  detail::normalize_fractions(c.fractions, "composition '" + spec + "'");
  c.id = spec;
  return c;
}

inline std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / (n - k + i)) throw DataError("binomial overflow");
    r = r * (n - k + i) / i;
  }
  return r;
}

/// All grid compositions with fractions in {0, 1/s, ..., 1}, first element's
/// share descending (so (1,0) comes before (0.5,0.5) before (0,1)).
inline std::vector<Composition> enumerate_simplex(const std::vector<std::string>& elements, std::size_t steps,
                                                  std::uint64_t cap = 1'000'000) {
  const std::size_t k = elements.size();
  if (k < 1) throw ConfigError("enumerate_simplex: need at least one element");
  if (steps < 1) throw ConfigError("enumerate_simplex: need at least one subdivision");
  std::uint64_t count = binomial(steps + k - 1, k - 1);
  if (count > cap) throw ConfigError("enumerate_simplex: " + std::to_string(count) + " compositions exceed cap");

  std::vector<Composition> out;
  out.reserve(count);
  std::vector<std::size_t> parts(k, 0);
  auto emit = [&] {
    Composition c;
    c.elements = elements;
    c.fractions.resize(k);
    for (std::size_t i = 0; i < k; ++i) c.fractions[i] = static_cast<double>(parts[i]) / static_cast<double>(steps);
    c.id = c.formula();
    out.push_back(std::move(c));
  };
  auto rec = [&](auto&& self, std::size_t i, std::size_t remaining) -> void {
    if (i + 1 == k) {
      parts[i] = remaining;
      emit();
      return;
    }
    for (std::size_t take = remaining + 1; take-- > 0;) {
      parts[i] = take;
      self(self, i + 1, remaining - take);
    }
  };
  rec(rec, 0, steps);
  return out;
}

/// Composition CSV: one column per element symbol (fractions), optional `id`.
/// Other columns are ignored here.
inline std::vector<Composition> load_compositions(const std::string& path, bool strict = true) {
  csv::Table table = csv::read(path, strict);
  auto id_col = table.column("id");
  std::vector<std::size_t> element_cols;
  std::vector<std::string> elements;
  for (std::size_t j = 0; j < table.header.size(); ++j)
    if (resources::is_element(table.header[j])) {
      element_cols.push_back(j);
      elements.push_back(table.header[j]);
    }
  if (elements.empty()) throw DataError(path + ": no element columns in header");
  std::vector<Composition> out;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    Composition c;
    c.elements = elements;
    for (auto j : element_cols) {
      const std::string& cell = table.rows[r][j];
      try {
        std::size_t used = 0;
        double x = cell.empty() ? 0.0 : std::stod(cell, &used);
        if (!cell.empty() && used != cell.size()) throw std::invalid_argument(cell);
        c.fractions.push_back(x);
      } catch (const std::logic_error&) {
        throw DataError(path + ": row " + std::to_string(table.row_numbers[r]) + ": bad fraction '" + cell + "'");
      }
    }
    detail::normalize_fractions(c.fractions, path + ": row " + std::to_string(table.row_numbers[r]));
    c.id = id_col ? table.rows[r][*id_col] : c.formula();
    out.push_back(std::move(c));
  }
  return out;
}

/// Unnormalized superposition sum_e fraction(e) * vector(e). Elements with
/// zero fraction are not looked up.
inline std::vector<double> material_vector(const WordModel& model, const Composition& c) {
  std::vector<double> v(model.dim(), 0.0);
  for (std::size_t i = 0; i < c.elements.size(); ++i) {
    if (c.fractions[i] == 0.0) continue;
    auto row = vector_of(model, c.elements[i]);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += c.fractions[i] * row[k];
  }
  return v;
}

struct PropertyAnchors {
  std::vector<std::string> terms{"dielectric", "conductivity"};
};

struct SimilarityPoint {
  double s_dielectric = 0.0;
  double s_conductivity = 0.0;
  std::size_t composition = 0;  // index into the candidate list

  double operator[](std::size_t axis) const noexcept { return axis == 0 ? s_dielectric : s_conductivity; }
};

/// Cosine similarity of the composition's material vector to each anchor term.
inline std::vector<double> anchor_similarities(const WordModel& model, const Composition& c,
                                               const PropertyAnchors& anchors) {
  if (anchors.terms.empty()) throw ConfigError("no anchor terms");
  std::vector<double> mv = material_vector(model, c);
  std::vector<double> out;
  for (const auto& term : anchors.terms) out.push_back(cosine_similarity(mv, vector_of(model, term)));
  return out;
}

/// Two-anchor point: first anchor is the dielectric axis, second the conductivity axis.
inline SimilarityPoint similarity_point(const WordModel& model, const Composition& c,
                                        const PropertyAnchors& anchors = {}, std::size_t index = 0) {
  if (anchors.terms.size() != 2) throw ConfigError("similarity space needs exactly two anchor terms");
  auto s = anchor_similarities(model, c, anchors);
  return {s[0], s[1], index};
}

inline std::vector<SimilarityPoint> similarity_points(const WordModel& model, const std::vector<Composition>& cs,
                                                      const PropertyAnchors& anchors = {}) {
  std::vector<SimilarityPoint> out;
  out.reserve(cs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) out.push_back(similarity_point(model, cs[i], anchors, i));
  return out;
}

/// Componentwise mean. Each coordinate is summed in ascending order so the
/// result does not depend on input order.
inline Point2 centroid(const std::vector<SimilarityPoint>& points) {
  if (points.empty()) throw DataError("centroid of empty point list");
  std::vector<double> xs, ys;
  xs.reserve(points.size());
  ys.reserve(points.size());
  for (const auto& p : points) {
    xs.push_back(p.s_dielectric);
    ys.push_back(p.s_conductivity);
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  double x = 0.0, y = 0.0;
  for (double v : xs) x += v;
  for (double v : ys) y += v;
  const double n = static_cast<double>(points.size());
  return {x / n, y / n};
}

}  // namespace corpusrefine
