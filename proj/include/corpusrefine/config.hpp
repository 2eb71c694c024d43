// SPDX-License-Identifier: Apache-2.0
//
// Run settings shared by the CLI and the run manifest. The file form is flat
// `key=value` lines; keys match the long CLI flag names with '-' or '_'.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "corpusrefine/error.hpp"
#include "corpusrefine/persistence.hpp"
#include "corpusrefine/refine.hpp"

namespace corpusrefine {

struct Settings {
  std::string corpus;
  std::string candidates;
  std::vector<std::string> elements;
  std::vector<std::string> anchors{"dielectric", "conductivity"};
  std::string preset = "orr";
  std::size_t steps = 10;
  std::string text_column = "abstract";
  std::string id_column = "id";
  bool strict = false;

  std::size_t batch_size = 50;
  double threshold = 0.03;
  std::size_t max_iterations = 0;

  std::size_t dim = 200;
  std::size_t window = 5;
  std::size_t epochs = 5;
  double alpha0 = 0.025;
  double alpha_min = 0.0001;
  std::uint64_t min_count = 1;
  std::uint64_t seed = 1;
  bool deterministic = true;
  std::size_t threads = 0;

  std::string out = ".";

  EmbeddingConfig embedding() const {
    EmbeddingConfig c;
    c.dim = dim;
    c.window = window;
    c.epochs = epochs;
    c.alpha0 = alpha0;
    c.alpha_min = alpha_min;
    c.min_count = min_count;
    c.seed = seed;
    c.deterministic = deterministic;
    c.threads = threads;
    return c;
  }

  RefineConfig refine() const {
    RefineConfig r;
    r.batch_size = batch_size;
    r.threshold = threshold;
    r.max_iterations = max_iterations;
    r.anchors.terms = anchors;
    r.doc_embedding = embedding();
    r.word_embedding = embedding();
    return r;
  }
};

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

inline std::string join_list(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + v[i];
  return out;
}

namespace detail {

inline std::string normalize_key(std::string k) {
  for (auto& c : k)
    if (c == '-') c = '_';
  return k;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" + v + "'");
}

}  // namespace detail

/// Applies one key. Keys under `input.`, `output.`, `result.` and `tool_version`
/// belong to the manifest and are ignored here; any other unknown key is an error.
inline void apply_setting(Settings& s, const std::string& raw_key, const std::string& v) {
  const std::string key = detail::normalize_key(raw_key);
  for (const char* prefix : {"input.", "output.", "result."})
    if (key.rfind(prefix, 0) == 0) return;
  if (key == "tool_version") return;
  try {
    if (key == "corpus") s.corpus = v;
    else if (key == "candidates") s.candidates = v;
    else if (key == "elements") s.elements = split_list(v);
    else if (key == "anchors") s.anchors = split_list(v);
    else if (key == "preset") s.preset = v;
    else if (key == "steps") s.steps = std::stoull(v);
    else if (key == "text_column") s.text_column = v;
    else if (key == "id_column") s.id_column = v;
    else if (key == "strict") s.strict = detail::parse_bool(key, v);
    else if (key == "batch_size") s.batch_size = std::stoull(v);
    else if (key == "threshold") s.threshold = std::stod(v);
    else if (key == "max_iterations") s.max_iterations = std::stoull(v);
    else if (key == "dim") s.dim = std::stoull(v);
    else if (key == "window") s.window = std::stoull(v);
    else if (key == "epochs") s.epochs = std::stoull(v);
    else if (key == "alpha0") s.alpha0 = std::stod(v);
    else if (key == "alpha_min") s.alpha_min = std::stod(v);
    else if (key == "min_count") s.min_count = std::stoull(v);
    else if (key == "seed") s.seed = std::stoull(v);
    else if (key == "deterministic") s.deterministic = detail::parse_bool(key, v);
    else if (key == "threads") s.threads = std::stoull(v);
    else if (key == "out") s.out = v;
    else throw ConfigError("unknown config key '" + raw_key + "'");
  } catch (const std::logic_error& e) {
    if (dynamic_cast<const ConfigError*>(&e)) throw;
    throw ConfigError("config key '" + raw_key + "': bad value '" + v + "'");
  }
}

inline void apply_config_file(Settings& s, const std::string& path) {
  const std::string text = io::read_file(path);
  for (const auto& [k, v] : io::detail::parse_kv(text, path)) apply_setting(s, k, v);
}

/// Settings as ordered key/value pairs (the manifest's configuration section).
inline std::vector<std::pair<std::string, std::string>> settings_entries(const Settings& s) {
  return {{"corpus", s.corpus},
          {"candidates", s.candidates},
          {"elements", join_list(s.elements)},
          {"anchors", join_list(s.anchors)},
          {"preset", s.preset},
          {"steps", std::to_string(s.steps)},
          {"text_column", s.text_column},
          {"id_column", s.id_column},
          {"strict", s.strict ? "1" : "0"},
          {"batch_size", std::to_string(s.batch_size)},
          {"threshold", io::format_double(s.threshold)},
          {"max_iterations", std::to_string(s.max_iterations)},
          {"dim", std::to_string(s.dim)},
          {"window", std::to_string(s.window)},
          {"epochs", std::to_string(s.epochs)},
          {"alpha0", io::format_double(s.alpha0)},
          {"alpha_min", io::format_double(s.alpha_min)},
          {"min_count", std::to_string(s.min_count)},
          {"seed", std::to_string(s.seed)},
          {"deterministic", s.deterministic ? "1" : "0"},
          {"threads", std::to_string(s.threads)}};
}

}  // namespace corpusrefine
