// SPDX-License-Identifier: Apache-2.0
//
// Minimal RFC-4180 reader/writer: comma delimiter, double-quote quoting with
// "" escapes, embedded line breaks inside quoted fields, CRLF or LF endings.
#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "corpusrefine/error.hpp"

namespace corpusrefine::csv {

using Row = std::vector<std::string>;

struct RowIssue {
  std::size_t row;  // 1-based data row number (header is row 0)
  std::string message;
};

struct Table {
  Row header;
  std::vector<Row> rows;
  std::vector<std::size_t> row_numbers;  // data row number of each kept row
  std::vector<RowIssue> issues;

  std::optional<std::size_t> column(std::string_view name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) return std::nullopt;
    return static_cast<std::size_t>(it - header.begin());
  }
};

namespace detail {

// Splits one record starting at `pos`. Returns false on unterminated quote.
inline bool next_record(std::string_view text, std::size_t& pos, Row& out) {
  out.clear();
  std::string field;
  bool quoted = false;
  bool field_was_quoted = false;
  while (pos < text.size()) {
    char c = text[pos];
    if (quoted) {
      if (c == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field.push_back('"');
          pos += 2;
          continue;
        }
        quoted = false;
        ++pos;
        continue;
      }
      field.push_back(c);
      ++pos;
      continue;
    }
    if (c == '"' && field.empty() && !field_was_quoted) {
      quoted = true;
      field_was_quoted = true;
      ++pos;
      continue;
    }
    if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
      field_was_quoted = false;
      ++pos;
      continue;
    }
    if (c == '\r' || c == '\n') {
      if (c == '\r' && pos + 1 < text.size() && text[pos + 1] == '\n') ++pos;
      ++pos;
      out.push_back(std::move(field));
      return true;
    }
    field.push_back(c);
    ++pos;
  }
  if (quoted) return false;
  out.push_back(std::move(field));
  return true;
}

inline bool blank(const Row& r) { return r.size() == 1 && r[0].empty(); }

}  // namespace detail

/// Parses CSV text. Rows whose field count differs from the header, or with an
/// unterminated quote, are recorded in `issues` and skipped; with `strict` the
/// first such row throws instead.
inline Table parse(std::string_view text, bool strict = false) {
  Table table;
  std::size_t pos = 0;
  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") pos = 3;  // BOM
  Row record;
  if (pos >= text.size() || !detail::next_record(text, pos, record) || detail::blank(record)) {
    throw DataError("CSV input has no header row");
  }
  table.header = record;
  std::size_t row_number = 0;
  while (pos < text.size()) {
    ++row_number;
    if (!detail::next_record(text, pos, record)) {
      RowIssue issue{row_number, "unterminated quoted field"};
      if (strict) throw DataError("CSV row " + std::to_string(row_number) + ": " + issue.message);
      table.issues.push_back(std::move(issue));
      break;
    }
    if (detail::blank(record)) continue;
    if (record.size() != table.header.size()) {
      RowIssue issue{row_number, "expected " + std::to_string(table.header.size()) + " fields, found " +
                                     std::to_string(record.size())};
      if (strict) throw DataError("CSV row " + std::to_string(row_number) + ": " + issue.message);
      table.issues.push_back(std::move(issue));
      continue;
    }
    table.rows.push_back(record);
    table.row_numbers.push_back(row_number);
  }
  return table;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Table read(const std::string& path, bool strict = false) { return parse(read_file(path), strict); }

inline std::string quote(std::string_view field) {
  bool needs = field.find_first_of(",\"\r\n") != std::string_view::npos;
  if (!needs) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::string format_row(const Row& row) {
  std::string line;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) line.push_back(',');
    line += quote(row[i]);
  }
  line.push_back('\n');
  return line;
}

}  // namespace corpusrefine::csv
