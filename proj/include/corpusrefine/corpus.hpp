// SPDX-License-Identifier: Apache-2.0
//
// Corpus ingestion: CSV abstracts -> cleaned token sequences.
#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "corpusrefine/csv.hpp"
#include "corpusrefine/error.hpp"
#include "corpusrefine/resources.hpp"

namespace corpusrefine {

using TokenList = std::vector<std::string>;

struct Document {
  std::string id;
  std::string text;
  TokenList tokens;
};

struct DocumentSet {
  std::vector<Document> documents;
  std::string source_path;
  std::size_t skipped_empty = 0;
  std::vector<csv::RowIssue> malformed;

  std::size_t size() const noexcept { return documents.size(); }
  bool empty() const noexcept { return documents.empty(); }

  std::vector<TokenList> token_lists() const {
    std::vector<TokenList> out;
    out.reserve(documents.size());
    for (const auto& d : documents) out.push_back(d.tokens);
    return out;
  }
};

struct CorpusOptions {
  std::string text_column = "abstract";
  std::string id_column = "id";  // falls back to the data row number when absent
  bool strict = false;
};

/// Loads abstracts in file order. Empty abstracts are skipped and counted;
/// malformed rows are recorded (or thrown in strict mode).
inline DocumentSet load_corpus(const std::string& path, const CorpusOptions& options = {}) {
  csv::Table table = csv::read(path, options.strict);
  auto text_col = table.column(options.text_column);
  if (!text_col) throw DataError(path + ": missing abstract column '" + options.text_column + "'");
  auto id_col = table.column(options.id_column);

  DocumentSet set;
  set.source_path = path;
  set.malformed = table.issues;
  std::unordered_set<std::string> seen;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::string& text = row[*text_col];
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
      ++set.skipped_empty;
      continue;
    }
    std::string id = id_col ? row[*id_col] : std::to_string(table.row_numbers[r]);
    if (!seen.insert(id).second) throw DataError(path + ": duplicate document id '" + id + "'");
    set.documents.push_back(Document{std::move(id), text, {}});
  }
  return set;
}

namespace text {

// Decodes one UTF-8 code point; an invalid sequence consumes one byte and yields U+FFFD.
inline char32_t decode(std::string_view s, std::size_t& i) {
  auto b = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) -> int {
    if (i + k >= s.size()) return -1;
    auto c = static_cast<unsigned char>(s[i + k]);
    return (c & 0xC0) == 0x80 ? (c & 0x3F) : -1;
  };
  if (b < 0x80) {
    ++i;
    return b;
  }
  int len = (b & 0xE0) == 0xC0 ? 2 : (b & 0xF0) == 0xE0 ? 3 : (b & 0xF8) == 0xF0 ? 4 : 0;
  char32_t cp = len == 2 ? (b & 0x1F) : len == 3 ? (b & 0x0F) : (b & 0x07);
  for (int k = 1; k < len; ++k) {
    int c = cont(static_cast<std::size_t>(k));
    if (c < 0) {
      len = 0;
      break;
    }
    cp = (cp << 6) | static_cast<char32_t>(c);
  }
  if (len == 0) {
    ++i;
    return 0xFFFD;
  }
  i += static_cast<std::size_t>(len);
  return cp;
}

inline void encode(char32_t cp, std::string& out) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Letters and digits. Outside ASCII this is a block-level approximation:
// punctuation, symbol, and space blocks are excluded, everything else counts.
inline bool is_alnum(char32_t cp) {
  if (cp < 0x80) {
    return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
  }
  if (cp <= 0xBF) return cp == 0xAA || cp == 0xB5 || cp == 0xBA;  // Latin-1 punctuation/symbols
  if (cp == 0xD7 || cp == 0xF7) return false;                     // × ÷
  if (cp >= 0x2000 && cp <= 0x2BFF) return false;                 // punctuation, arrows, math, shapes
  if (cp >= 0x3000 && cp <= 0x303F) return false;                 // CJK punctuation
  if (cp >= 0xFE30 && cp <= 0xFE4F) return false;
  if (cp >= 0xFF00 && cp <= 0xFF0F) return false;
  if (cp == 0xFFFD) return false;
  return true;
}

inline char32_t to_lower(char32_t cp) {
  if (cp >= 'A' && cp <= 'Z') return cp + 32;
  if ((cp >= 0xC0 && cp <= 0xDE && cp != 0xD7)) return cp + 32;
  if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 32;  // Greek capitals
  if (cp >= 0x410 && cp <= 0x42F) return cp + 32;                 // Cyrillic capitals
  return cp;
}

inline std::string lowercase(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) encode(to_lower(decode(s, i)), out);
  return out;
}

inline std::size_t code_points(std::string_view s) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size(); ++n) decode(s, i);
  return n;
}

/// Splits on every non-alphanumeric code point.
inline std::vector<std::string> split_words(std::string_view s) {
  std::vector<std::string> words;
  std::string cur;
  for (std::size_t i = 0; i < s.size();) {
    char32_t cp = decode(s, i);
    if (is_alnum(cp)) {
      encode(cp, cur);
    } else if (!cur.empty()) {
      words.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) words.push_back(std::move(cur));
  return words;
}

inline std::string join(const TokenList& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace text

/// Reusable preprocessing state: compiled license patterns plus the element
/// and stopword sets.
class Preprocessor {
 public:
  Preprocessor()
      : Preprocessor(resources::element_set(), resources::stopword_set(), resources::license_patterns()) {}

  Preprocessor(std::unordered_set<std::string> elements, std::unordered_set<std::string> stopwords,
               const std::vector<std::string>& license_patterns)
      : elements_(std::move(elements)), stopwords_(std::move(stopwords)) {
    for (const auto& p : license_patterns) {
      try {
        patterns_.emplace_back(p, std::regex::ECMAScript | std::regex::icase | std::regex::optimize);
      } catch (const std::regex_error& e) {
        throw ConfigError("invalid license pattern '" + p + "': " + e.what());
      }
    }
  }

  /// License text is stripped first, then the remainder is split on
  /// non-alphanumerics. Exact element symbols keep their case; everything
  /// else is lowercased, and stopwords and single-character non-elements drop.
  TokenList operator()(std::string_view raw) const {
    std::string cleaned(raw);
    for (const auto& re : patterns_) cleaned = std::regex_replace(cleaned, re, " ");

    TokenList tokens;
    for (auto& word : text::split_words(cleaned)) {
      if (elements_.count(word)) {
        tokens.push_back(std::move(word));
        continue;
      }
      std::string lower = text::lowercase(word);
      if (stopwords_.count(lower)) continue;
      if (text::code_points(lower) < 2) continue;
      tokens.push_back(std::move(lower));
    }
    return tokens;
  }

  void apply(DocumentSet& set) const {
    for (auto& d : set.documents) d.tokens = (*this)(d.text);
  }

  const std::unordered_set<std::string>& elements() const noexcept { return elements_; }

 private:
  std::unordered_set<std::string> elements_;
  std::unordered_set<std::string> stopwords_;
  std::vector<std::regex> patterns_;
};

inline TokenList preprocess(std::string_view text, const std::unordered_set<std::string>& elements,
                            const std::unordered_set<std::string>& stopwords,
                            const std::vector<std::string>& license_patterns) {
  return Preprocessor(elements, stopwords, license_patterns)(text);
}

inline TokenList preprocess(std::string_view text) {
  static const Preprocessor defaults;
  return defaults(text);
}

/// Dense token index ordered by descending count, ties lexicographic.
class Vocabulary {
 public:
  Vocabulary() = default;

  /// Builds from (token, count) pairs; ordering is normalized here.
  Vocabulary(std::vector<std::pair<std::string, std::uint64_t>> entries, std::uint64_t min_count)
      : min_count_(min_count) {
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
    for (auto& [tok, cnt] : entries) {
      if (cnt < min_count) continue;
      index_.emplace(tok, tokens_.size());
      tokens_.push_back(tok);
      counts_.push_back(cnt);
    }
  }

  std::size_t size() const noexcept { return tokens_.size(); }
  bool empty() const noexcept { return tokens_.empty(); }
  bool contains(std::string_view token) const { return index_.count(std::string(token)) > 0; }

  std::optional<std::size_t> find(std::string_view token) const {
    auto it = index_.find(std::string(token));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t index(std::string_view token) const {
    auto i = find(token);
    if (!i) throw OutOfVocabulary(std::string(token));
    return *i;
  }

  const std::string& token(std::size_t i) const { return tokens_.at(i); }
  std::uint64_t count(std::size_t i) const { return counts_.at(i); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  const std::vector<std::uint64_t>& counts() const noexcept { return counts_; }
  std::uint64_t min_count() const noexcept { return min_count_; }

  std::uint64_t total_count() const {
    std::uint64_t n = 0;
    for (auto c : counts_) n += c;
    return n;
  }

 private:
  std::vector<std::string> tokens_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, std::size_t> index_;
  std::uint64_t min_count_ = 1;
};

inline Vocabulary build_vocabulary(const std::vector<TokenList>& docs, std::uint64_t min_count = 1) {
  if (min_count < 1) throw ConfigError("min_count must be positive");
  std::map<std::string, std::uint64_t> counts;
  for (const auto& d : docs)
    for (const auto& t : d) ++counts[t];
  Vocabulary vocab({counts.begin(), counts.end()}, min_count);
  if (vocab.empty()) throw DataError("empty vocabulary (min_count=" + std::to_string(min_count) + ")");
  return vocab;
}

inline Vocabulary build_vocabulary(const DocumentSet& docs, std::uint64_t min_count = 1) {
  return build_vocabulary(docs.token_lists(), min_count);
}

}  // namespace corpusrefine
