// SPDX-License-Identifier: Apache-2.0
//
// Text serialization for every pipeline artifact. Doubles are written with 17
// significant digits, so a load/save cycle reproduces files byte for byte.
//
// Word model `<base>`:
//   <base>.vec    "V D", then per token: token and D values
//   <base>.nodes  "V-1 D", then D values per hierarchical-softmax node
//   <base>.meta   key=value: format, version, config, seed, token counts
#pragma once

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <openssl/evp.h>

#include "corpusrefine/csv.hpp"
#include "corpusrefine/embedding.hpp"
#include "corpusrefine/error.hpp"
#include "corpusrefine/refine.hpp"
#include "corpusrefine/selection.hpp"

namespace corpusrefine::io {

inline constexpr std::string_view kFormatName = "corpusrefine-model";
inline constexpr int kFormatVersion = 1;
inline constexpr std::string_view kToolVersion = "0.1.0";

inline std::string format_double(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Writes via a sibling temp file and rename, so readers never see a partial file.
inline void atomic_write(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) { return csv::read_file(path.string()); }

/// Whitespace and '%' in tokens are percent-escaped.
inline std::string escape_token(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case ' ': out += "%20"; break;
      case '\t': out += "%09"; break;
      case '\n': out += "%0A"; break;
      case '\r': out += "%0D"; break;
      case '%': out += "%25"; break;
      default: out.push_back(c);
    }
  }
  return out.empty() ? "%" : out;  // lone "%" marks the empty token
}

inline std::string unescape_token(std::string_view s) {
  if (s == "%") return {};
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size() && std::isxdigit(static_cast<unsigned char>(s[i + 1])) &&
        std::isxdigit(static_cast<unsigned char>(s[i + 2]))) {
      out.push_back(static_cast<char>(std::stoi(std::string(s.substr(i + 1, 2)), nullptr, 16)));
      i += 2;
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

namespace detail {

// Whitespace-delimited reader that tracks byte offsets for error messages.
class Cursor {
 public:
  Cursor(std::string_view text, std::string path) : text_(text), path_(std::move(path)) {}

  std::string_view word(const char* what) {
    skip_blank();
    if (pos_ >= text_.size() || text_[pos_] == '\n') fail(std::string("truncated: expected ") + what);
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  double number(const char* what) {
    skip_blank();
    std::size_t at = pos_;
    std::string w(word(what));
    errno = 0;
    char* end = nullptr;
    double x = std::strtod(w.c_str(), &end);
    if (end != w.c_str() + w.size() || errno == ERANGE) fail_at(at, "malformed number '" + w + "'");
    if (!std::isfinite(x)) fail_at(at, "non-finite value '" + w + "'");
    return x;
  }

  std::size_t count(const char* what) {
    skip_blank();
    std::size_t at = pos_;
    std::string w(word(what));
    char* end = nullptr;
    unsigned long long x = std::strtoull(w.c_str(), &end, 10);
    if (w.empty() || end != w.c_str() + w.size() || w[0] == '-') fail_at(at, "malformed count '" + w + "'");
    return static_cast<std::size_t>(x);
  }

  void end_line() {
    skip_blank();
    if (pos_ >= text_.size()) fail("truncated: missing line terminator");
    if (text_[pos_] != '\n') fail("unexpected extra field");
    ++pos_;
  }

  void expect_end() {
    if (pos_ != text_.size()) fail("trailing data");
  }

  [[noreturn]] void fail(const std::string& what) const { throw FormatError(path_, pos_, what); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& what) const { throw FormatError(path_, at, what); }

 private:
  void skip_blank() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) ++pos_;
  }

  std::string_view text_;
  std::string path_;
  std::size_t pos_ = 0;
};

inline std::string matrix_text(const Matrix& m, const std::vector<std::string>* labels) {
  std::string out = std::to_string(m.rows()) + " " + std::to_string(m.cols()) + "\n";
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (labels) out += escape_token((*labels)[i]);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (labels || j) out.push_back(' ');
      out += format_double(m(i, j));
    }
    out.push_back('\n');
  }
  return out;
}

inline Matrix parse_matrix(const std::string& path, std::vector<std::string>* labels) {
  std::string text = read_file(path);
  Cursor cur(text, path);
  std::size_t rows = cur.count("row count");
  std::size_t cols = cur.count("column count");
  cur.end_line();
  Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (labels) labels->push_back(unescape_token(cur.word("token")));
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = cur.number("value");
    cur.end_line();
  }
  cur.expect_end();
  return m;
}

using KeyValues = std::map<std::string, std::string>;

inline std::string kv_text(const std::vector<std::pair<std::string, std::string>>& entries) {
  std::string out;
  for (const auto& [k, v] : entries) out += k + "=" + v + "\n";
  return out;
}

inline KeyValues parse_kv(const std::string& text, const std::string& path) {
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    std::size_t here = offset;
    offset += line.size() + 1;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError(path, here, "expected key=value");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

inline const std::string& require(const KeyValues& kv, const std::string& key, const std::string& path) {
  auto it = kv.find(key);
  if (it == kv.end()) throw FormatError(path, 0, "missing key '" + key + "'");
  return it->second;
}

inline std::vector<std::pair<std::string, std::string>> config_entries(const EmbeddingConfig& c) {
  return {{"dim", std::to_string(c.dim)},
          {"window", std::to_string(c.window)},
          {"epochs", std::to_string(c.epochs)},
          {"alpha0", format_double(c.alpha0)},
          {"alpha_min", format_double(c.alpha_min)},
          {"min_count", std::to_string(c.min_count)},
          {"seed", std::to_string(c.seed)},
          {"deterministic", c.deterministic ? "1" : "0"}};
}

inline EmbeddingConfig config_from(const KeyValues& kv, const std::string& path) {
  EmbeddingConfig c;
  try {
    c.dim = std::stoull(require(kv, "dim", path));
    c.window = std::stoull(require(kv, "window", path));
    c.epochs = std::stoull(require(kv, "epochs", path));
    c.alpha0 = std::stod(require(kv, "alpha0", path));
    c.alpha_min = std::stod(require(kv, "alpha_min", path));
    c.min_count = std::stoull(require(kv, "min_count", path));
    c.seed = std::stoull(require(kv, "seed", path));
    c.deterministic = require(kv, "deterministic", path) == "1";
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const FormatError*>(&e)) throw;
    throw FormatError(path, 0, std::string("bad config value: ") + e.what());
  }
  return c;
}

inline void check_header(const KeyValues& kv, const std::string& path, std::string_view kind) {
  if (require(kv, "format", path) != kFormatName) throw FormatError(path, 0, "not a " + std::string(kFormatName) + " file");
  if (require(kv, "version", path) != std::to_string(kFormatVersion))
    throw FormatError(path, 0, "unsupported format version " + kv.at("version"));
  if (require(kv, "kind", path) != kind) throw FormatError(path, 0, "expected a " + std::string(kind) + " model");
}

}  // namespace detail

inline std::filesystem::path with_suffix(const std::filesystem::path& base, std::string_view suffix) {
  std::filesystem::path p = base;
  p += suffix;
  return p;
}

inline void save_model(const WordModel& model, const std::filesystem::path& base) {
  auto entries = std::vector<std::pair<std::string, std::string>>{
      {"format", std::string(kFormatName)}, {"version", std::to_string(kFormatVersion)}, {"kind", "word"}};
  for (auto& e : detail::config_entries(model.config)) entries.push_back(std::move(e));
  std::string counts;
  for (std::size_t i = 0; i < model.vocab.size(); ++i) {
    if (i) counts.push_back(' ');
    counts += std::to_string(model.vocab.count(i));
  }
  entries.emplace_back("vocab_min_count", std::to_string(model.vocab.min_count()));
  entries.emplace_back("counts", counts);

  atomic_write(with_suffix(base, ".vec"), detail::matrix_text(model.input, &model.vocab.tokens()));
  atomic_write(with_suffix(base, ".nodes"), detail::matrix_text(model.nodes, nullptr));
  atomic_write(with_suffix(base, ".meta"), detail::kv_text(entries));
}

inline WordModel load_model(const std::filesystem::path& base) {
  const std::string meta_path = with_suffix(base, ".meta").string();
  auto kv = detail::parse_kv(read_file(meta_path), meta_path);
  detail::check_header(kv, meta_path, "word");

  WordModel model;
  model.config = detail::config_from(kv, meta_path);
  std::vector<std::string> tokens;
  const std::string vec_path = with_suffix(base, ".vec").string();
  model.input = detail::parse_matrix(vec_path, &tokens);
  const std::string nodes_path = with_suffix(base, ".nodes").string();
  model.nodes = detail::parse_matrix(nodes_path, nullptr);

  std::vector<std::pair<std::string, std::uint64_t>> entries;
  std::istringstream counts(detail::require(kv, "counts", meta_path));
  for (const auto& t : tokens) {
    std::uint64_t c = 0;
    if (!(counts >> c)) throw FormatError(meta_path, 0, "counts list shorter than vocabulary");
    entries.emplace_back(t, c);
  }
  std::uint64_t min_count = std::stoull(detail::require(kv, "vocab_min_count", meta_path));
  model.vocab = Vocabulary(entries, min_count);
  if (model.vocab.tokens() != tokens) throw FormatError(vec_path, 0, "token order inconsistent with counts");
  if (model.input.cols() != model.config.dim) throw FormatError(vec_path, 0, "dimension differs from meta");
  if (model.nodes.cols() != model.input.cols() || model.nodes.rows() + 1 != model.input.rows())
    throw FormatError(nodes_path, 0, "node matrix shape inconsistent with vocabulary");
  return model;
}

inline void save_doc_model(const DocModel& model, const std::filesystem::path& base) {
  auto entries = std::vector<std::pair<std::string, std::string>>{
      {"format", std::string(kFormatName)}, {"version", std::to_string(kFormatVersion)}, {"kind", "doc"}};
  for (auto& e : detail::config_entries(model.config)) entries.push_back(std::move(e));
  atomic_write(with_suffix(base, ".vec"), detail::matrix_text(model.vectors, &model.ids));
  atomic_write(with_suffix(base, ".meta"), detail::kv_text(entries));
}

inline DocModel load_doc_model(const std::filesystem::path& base) {
  const std::string meta_path = with_suffix(base, ".meta").string();
  auto kv = detail::parse_kv(read_file(meta_path), meta_path);
  detail::check_header(kv, meta_path, "doc");
  DocModel m;
  m.config = detail::config_from(kv, meta_path);
  m.vectors = detail::parse_matrix(with_suffix(base, ".vec").string(), &m.ids);
  return m;
}

/// rank,document_id,min_distance (the first pick has distance inf).
inline std::string selection_csv(const SelectionOrder& order, const std::vector<std::string>& ids) {
  std::string out = csv::format_row({"rank", "document_id", "min_distance"});
  for (std::size_t r = 0; r < order.size(); ++r)
    out += csv::format_row({std::to_string(r + 1), ids.at(order.order[r]), format_double(order.min_distance[r])});
  return out;
}

inline constexpr std::string_view kTokensHeader = "# corpusrefine-tokens 1";

/// Preprocessed corpus: header line, then `id<TAB>tok tok ...` per document.
inline std::string tokens_text(const DocumentSet& docs) {
  std::string out = std::string(kTokensHeader) + "\n";
  for (const auto& d : docs.documents) {
    out += escape_token(d.id);
    out.push_back('\t');
    for (std::size_t i = 0; i < d.tokens.size(); ++i) out += (i ? " " : "") + escape_token(d.tokens[i]);
    out.push_back('\n');
  }
  return out;
}

inline DocumentSet load_tokens(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  DocumentSet set;
  set.source_path = path.string();
  std::size_t pos = 0, line_no = 0;
  std::set<std::string> seen;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string::npos) end = text.size();
    std::string_view line(text.data() + pos, end - pos);
    if (line_no++ == 0) {
      if (line != kTokensHeader) throw FormatError(path.string(), pos, "not a tokens file");
    } else if (!line.empty()) {
      auto tab = line.find('\t');
      if (tab == std::string_view::npos) throw FormatError(path.string(), pos, "expected id<TAB>tokens");
      Document d;
      d.id = unescape_token(line.substr(0, tab));
      if (!seen.insert(d.id).second) throw FormatError(path.string(), pos, "duplicate document id '" + d.id + "'");
      std::istringstream in{std::string(line.substr(tab + 1))};
      std::string tok;
      while (in >> tok) d.tokens.push_back(unescape_token(tok));
      set.documents.push_back(std::move(d));
    }
    pos = end + 1;
  }
  if (line_no == 0) throw FormatError(path.string(), 0, "empty tokens file");
  return set;
}

inline std::string optional_text(const std::optional<double>& x) { return x ? format_double(*x) : ""; }

/// t,documents_used,vocab_complete,centroid_x,centroid_y,displacement
inline std::string iteration_csv(const std::vector<IterationRecord>& records) {
  std::string out =
      csv::format_row({"t", "documents_used", "vocab_complete", "centroid_x", "centroid_y", "displacement"});
  for (const auto& r : records) {
    out += csv::format_row({std::to_string(r.iteration), std::to_string(r.documents_used),
                            r.vocab_complete ? "1" : "0",
                            r.centroid ? format_double((*r.centroid)[0]) : "",
                            r.centroid ? format_double((*r.centroid)[1]) : "", optional_text(r.displacement)});
  }
  return out;
}

/// Same columns, whitespace-delimited for gnuplot; undefined values are "NaN".
inline std::string iteration_dat(const std::vector<IterationRecord>& records) {
  std::string out = "# t documents_used vocab_complete centroid_x centroid_y displacement\n";
  auto field = [](const std::optional<double>& x) { return x ? format_double(*x) : std::string("NaN"); };
  for (const auto& r : records) {
    std::optional<double> cx, cy;
    if (r.centroid) {
      cx = (*r.centroid)[0];
      cy = (*r.centroid)[1];
    }
    out += std::to_string(r.iteration) + " " + std::to_string(r.documents_used) + " " +
           (r.vocab_complete ? "1" : "0") + " " + field(cx) + " " + field(cy) + " " + field(r.displacement) + "\n";
  }
  return out;
}

inline std::vector<IterationRecord> parse_iteration_csv(const std::string& path) {
  csv::Table t = csv::read(path, true);
  std::vector<IterationRecord> out;
  auto num = [](const std::string& s) -> std::optional<double> {
    if (s.empty()) return std::nullopt;
    return std::stod(s);
  };
  for (const auto& row : t.rows) {
    if (row.size() != 6) throw FormatError(path, 0, "iteration log needs 6 columns");
    IterationRecord r;
    r.iteration = std::stoull(row[0]);
    r.documents_used = std::stoull(row[1]);
    r.vocab_complete = row[2] == "1";
    auto cx = num(row[3]), cy = num(row[4]);
    if (cx && cy) r.centroid = Point2{*cx, *cy};
    r.displacement = num(row[5]);
    out.push_back(r);
  }
  return out;
}

inline std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw DataError("SHA-256 computation failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

inline std::string file_digest(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

/// Flat key=value record of a run: configuration, seeds, input digests
/// (`input.<name>.path` / `input.<name>.sha256`) and output paths.
struct RunManifest {
  std::vector<std::pair<std::string, std::string>> entries;

  void set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries)
      if (k == key) {
        v = value;
        return;
      }
    entries.emplace_back(key, value);
  }

  std::optional<std::string> get(const std::string& key) const {
    for (const auto& [k, v] : entries)
      if (k == key) return v;
    return std::nullopt;
  }

  void add_input(const std::string& name, const std::filesystem::path& path) {
    set("input." + name + ".path", path.string());
    set("input." + name + ".sha256", file_digest(path));
  }

  /// Throws DataError naming the first input whose digest no longer matches.
  void verify_inputs() const {
    for (const auto& [k, v] : entries) {
      if (k.rfind("input.", 0) != 0 || k.size() < 5 || k.substr(k.size() - 5) != ".path") continue;
      std::string name = k.substr(6, k.size() - 11);
      auto want = get("input." + name + ".sha256");
      if (!want) throw DataError("manifest: no digest recorded for input '" + name + "'");
      if (file_digest(v) != *want) throw DataError("manifest: input '" + name + "' (" + v + ") changed since the run");
    }
  }

  std::string text() const { return "tool_version=" + std::string(kToolVersion) + "\n" + detail::kv_text(entries); }

  void save(const std::filesystem::path& path) const { atomic_write(path, text()); }

  static RunManifest load(const std::filesystem::path& path) {
    RunManifest m;
    std::istringstream in(read_file(path));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      auto eq = line.find('=');
      if (eq == std::string::npos) throw FormatError(path.string(), 0, "expected key=value");
      if (line.substr(0, eq) == "tool_version") continue;
      m.entries.emplace_back(line.substr(0, eq), line.substr(eq + 1));
    }
    return m;
  }
};

}  // namespace corpusrefine::io
