// SPDX-License-Identifier: Apache-2.0
//
// Two-objective Pareto screening in similarity space.
#pragma once

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "corpusrefine/csv.hpp"
#include "corpusrefine/error.hpp"
#include "corpusrefine/materials.hpp"

namespace corpusrefine {

enum class Direction { Minimize, Maximize };

/// Directions for (s_dielectric, s_conductivity).
struct Objectives {
  Direction dielectric = Direction::Minimize;
  Direction conductivity = Direction::Maximize;

  Direction operator[](std::size_t axis) const noexcept { return axis == 0 ? dielectric : conductivity; }

  static Objectives orr() { return {Direction::Minimize, Direction::Maximize}; }
  static Objectives her() { return orr(); }
  static Objectives oer() { return {Direction::Maximize, Direction::Minimize}; }

  /// "orr", "her" or "oer", case-insensitive.
  static Objectives preset(std::string name) {
    for (auto& ch : name) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (name == "orr") return orr();
    if (name == "her") return her();
    if (name == "oer") return oer();
    throw ConfigError("unknown objective preset '" + name + "' (expected orr, her or oer)");
  }

  friend bool operator==(const Objectives&, const Objectives&) = default;
};

namespace detail {

// Coordinate transformed so that smaller is better.
inline double cost(const SimilarityPoint& p, const Objectives& obj, std::size_t axis) {
  return obj[axis] == Direction::Minimize ? p[axis] : -p[axis];
}

}  // namespace detail

/// p dominates q: no worse on both axes, strictly better on at least one.
inline bool dominates(const SimilarityPoint& p, const SimilarityPoint& q, const Objectives& obj) {
  bool strictly = false;
  for (std::size_t a = 0; a < 2; ++a) {
    double cp = detail::cost(p, obj, a), cq = detail::cost(q, obj, a);
    if (cp > cq) return false;
    if (cp < cq) strictly = true;
  }
  return strictly;
}

/// Indices (ascending) of all non-dominated points. Coincident points do not
/// dominate each other, so duplicates of a front point are all kept.
/// O(n log n): sort by first cost, sweep with the best second cost seen so far.
inline std::vector<std::size_t> pareto_front(const std::vector<SimilarityPoint>& points, const Objectives& obj) {
  if (points.empty()) throw DataError("pareto_front: no points");
  const std::size_t n = points.size();
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::vector<double> c0(n), c1(n);
  for (std::size_t i = 0; i < n; ++i) {
    c0[i] = detail::cost(points[i], obj, 0);
    c1[i] = detail::cost(points[i], obj, 1);
  }
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (c0[a] != c0[b]) return c0[a] < c0[b];
    if (c1[a] != c1[b]) return c1[a] < c1[b];
    return a < b;
  });

  std::vector<std::size_t> front;
  double best_before = std::numeric_limits<double>::infinity();  // min c1 over strictly smaller c0
  std::size_t g = 0;
  while (g < n) {
    std::size_t end = g;
    while (end < n && c0[idx[end]] == c0[idx[g]]) ++end;
    const double group_min = c1[idx[g]];  // group sorted by c1
    for (std::size_t k = g; k < end; ++k) {
      const double y = c1[idx[k]];
      if (y == group_min && y < best_before) front.push_back(idx[k]);
    }
    best_before = std::min(best_before, group_min);
    g = end;
  }
  std::sort(front.begin(), front.end());
  return front;
}

/// Measured performance keyed by composition id.
struct MeasuredTable {
  std::unordered_map<std::string, double> current_density;  // mA/cm^2
  std::optional<double> potential_mv;
  bool complete = false;  // every candidate is expected to have a row

  bool empty() const noexcept { return current_density.empty(); }
};

/// Reads `id` + `current_density` columns. With a `potential` column, only rows
/// at `potential_mv` (when given) are kept. An id may appear once among the
/// kept rows.
inline MeasuredTable load_measured(const std::string& path, std::optional<double> potential_mv = std::nullopt,
                                   bool complete = false) {
  csv::Table t = csv::read(path, true);
  auto id = t.column("id");
  auto cd = t.column("current_density");
  if (!id || !cd) throw DataError(path + ": measured table needs 'id' and 'current_density' columns");
  auto pot = t.column("potential");
  MeasuredTable m;
  m.potential_mv = potential_mv;
  m.complete = complete;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (row[*cd].empty()) continue;
    try {
      if (pot && potential_mv && std::stod(row[*pot]) != *potential_mv) continue;
      if (!m.current_density.emplace(row[*id], std::stod(row[*cd])).second)
        throw DataError(path + ": row " + std::to_string(t.row_numbers[r]) + ": second value for '" + row[*id] +
                        "' (select a potential)");
    } catch (const std::logic_error&) {
      throw DataError(path + ": row " + std::to_string(t.row_numbers[r]) + ": bad number");
    }
  }
  return m;
}

struct ScreenReport {
  std::size_t entries_total = 0;
  std::vector<std::size_t> front;
  std::size_t measured_front = 0;  // front members with a measured value
  std::optional<double> min_current;
  std::optional<double> max_current;
  std::optional<double> potential_mv;
};

/// Front size plus, when measured data is supplied, min/max current density
/// among front members. Front members without a row are skipped unless the
/// table is declared complete, in which case that is an error.
inline ScreenReport screen_report(const std::vector<std::size_t>& front, const std::vector<Composition>& candidates,
                                  const MeasuredTable* measured = nullptr) {
  ScreenReport r;
  r.entries_total = candidates.size();
  r.front = front;
  if (!measured || measured->empty()) return r;
  r.potential_mv = measured->potential_mv;
  for (auto i : front) {
    if (i >= candidates.size()) throw ConfigError("screen_report: front index out of range");
    auto it = measured->current_density.find(candidates[i].id);
    if (it == measured->current_density.end()) {
      if (measured->complete) throw DataError("no measured value for front member '" + candidates[i].id + "'");
      continue;
    }
    ++r.measured_front;
    r.min_current = r.min_current ? std::min(*r.min_current, it->second) : it->second;
    r.max_current = r.max_current ? std::max(*r.max_current, it->second) : it->second;
  }
  return r;
}

/// Min/max over all measured candidates (the unscreened baseline).
inline std::pair<std::optional<double>, std::optional<double>> measured_range(const MeasuredTable& m) {
  std::optional<double> lo, hi;
  for (const auto& [id, v] : m.current_density) {
    lo = lo ? std::min(*lo, v) : v;
    hi = hi ? std::max(*hi, v) : v;
  }
  return {lo, hi};
}

/// Per-candidate table: id, element fractions, similarity coordinates, front
/// flag and (when joined) measured current density.
inline std::string screen_csv(const std::vector<Composition>& candidates, const std::vector<SimilarityPoint>& points,
                              const std::vector<std::size_t>& front, const MeasuredTable* measured = nullptr) {
  if (points.size() != candidates.size()) throw ConfigError("screen_csv: point/candidate count mismatch");
  auto num = [](double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return std::string(buf);
  };
  std::vector<std::string> header{"id"};
  if (!candidates.empty()) header.insert(header.end(), candidates[0].elements.begin(), candidates[0].elements.end());
  for (const char* h : {"s_dielectric", "s_conductivity", "on_front", "current_density"}) header.emplace_back(h);
  std::string out = csv::format_row(header);
  std::vector<bool> on(candidates.size(), false);
  for (auto i : front) on.at(i) = true;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const auto& c = candidates[i];
    std::vector<std::string> row{c.id};
    for (std::size_t k = 1; k + 4 < header.size(); ++k) row.push_back(num(c.fraction(header[k])));
    row.push_back(num(points[i].s_dielectric));
    row.push_back(num(points[i].s_conductivity));
    row.push_back(on[i] ? "1" : "0");
    std::string cd;
    if (measured) {
      auto it = measured->current_density.find(c.id);
      if (it != measured->current_density.end()) cd = num(it->second);
    }
    row.push_back(cd);
    out += csv::format_row(row);
  }
  return out;
}

/// A screen table read back: ids and similarity coordinates.
struct ScreenTable {
  std::vector<std::string> ids;
  std::vector<SimilarityPoint> points;
};

inline ScreenTable load_screen_table(const std::string& path) {
  csv::Table t = csv::read(path, true);
  auto id = t.column("id");
  auto sd = t.column("s_dielectric");
  auto sc = t.column("s_conductivity");
  if (!id || !sd || !sc) throw DataError(path + ": screen table needs id, s_dielectric and s_conductivity columns");
  ScreenTable out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    try {
      out.points.push_back({std::stod(t.rows[r][*sd]), std::stod(t.rows[r][*sc]), r});
    } catch (const std::logic_error&) {
      throw DataError(path + ": row " + std::to_string(t.row_numbers[r]) + ": bad similarity value");
    }
    out.ids.push_back(t.rows[r][*id]);
  }
  if (out.ids.empty()) throw DataError(path + ": screen table has no rows");
  return out;
}

}  // namespace corpusrefine
