// SPDX-License-Identifier: Apache-2.0
//
// Built-in word lists. The files under data/ carry the same entries, one per
// line, and can be edited and passed in instead.
#pragma once

#include <array>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "corpusrefine/error.hpp"

namespace corpusrefine::resources {

inline constexpr std::array<std::string_view, 118> kElementSymbols = {
    "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg", "Al", "Si", "P",
    "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn",
    "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh",
    "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
    "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W",  "Re",
    "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th",
    "Pa", "U",  "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db",
    "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og"};

// Common English function words (NLTK's English list).
inline constexpr std::array<std::string_view, 179> kStopwords = {
    "i",          "me",       "my",       "myself",   "we",        "our",     "ours",     "ourselves",
    "you",        "you're",   "you've",   "you'll",   "you'd",     "your",    "yours",    "yourself",
    "yourselves", "he",       "him",      "his",      "himself",   "she",     "she's",    "her",
    "hers",       "herself",  "it",       "it's",     "its",       "itself",  "they",     "them",
    "their",      "theirs",   "themselves", "what",   "which",     "who",     "whom",     "this",
    "that",       "that'll",  "these",    "those",    "am",        "is",      "are",      "was",
    "were",       "be",       "been",     "being",    "have",      "has",     "had",      "having",
    "do",         "does",     "did",      "doing",    "a",         "an",      "the",      "and",
    "but",        "if",       "or",       "because",  "as",        "until",   "while",    "of",
    "at",         "by",       "for",      "with",     "about",     "against", "between",  "into",
    "through",    "during",   "before",   "after",    "above",     "below",   "to",       "from",
    "up",         "down",     "in",       "out",      "on",        "off",     "over",     "under",
    "again",      "further",  "then",     "once",     "here",      "there",   "when",     "where",
    "why",        "how",      "all",      "any",      "both",      "each",    "few",      "more",
    "most",       "other",    "some",     "such",     "no",        "nor",     "not",      "only",
    "own",        "same",     "so",       "than",     "too",       "very",    "s",        "t",
    "can",        "will",     "just",     "don",      "don't",     "should",  "should've", "now",
    "d",          "ll",       "m",        "o",        "re",        "ve",      "y",        "ain",
    "aren",       "aren't",   "couldn",   "couldn't", "didn",      "didn't",  "doesn",    "doesn't",
    "hadn",       "hadn't",   "hasn",     "hasn't",   "haven",     "haven't", "isn",      "isn't",
    "ma",         "mightn",   "mightn't", "mustn",    "mustn't",   "needn",   "needn't",  "shan",
    "shan't",     "shouldn",  "shouldn't", "wasn",    "wasn't",    "weren",   "weren't",  "won",
    "won't",      "wouldn",   "wouldn't"};

// ECMAScript regular expressions, matched case-insensitively. A statement runs
// to the first full stop, stepping over initials such as "B.V.".
inline constexpr std::array<std::string_view, 7> kLicensePatterns = {
    "copyright (by|of|\xC2\xA9)(?:[^.]|\\.(?=[a-z]\\.))*\\.?",
    "\xC2\xA9(?:[^.]|\\.(?=[a-z]\\.))*\\.?",
    "\\(c\\) \\d{4}(?:[^.]|\\.(?=[a-z]\\.))*\\.?",
    "all rights reserved\\.?",
    "this is an open access article[^.]*\\.?",
    "published by (?:[^.]|\\.(?=[a-z]\\.))*\\.?",
    "licensed under [^.]*\\.?"};

template <std::size_t N>
std::vector<std::string> to_vector(const std::array<std::string_view, N>& arr) {
  std::vector<std::string> out;
  for (auto s : arr) out.emplace_back(s);
  return out;
}

template <std::size_t N>
std::unordered_set<std::string> to_set(const std::array<std::string_view, N>& arr) {
  std::unordered_set<std::string> out;
  for (auto s : arr) out.emplace(s);
  return out;
}

inline std::unordered_set<std::string> element_set() { return to_set(kElementSymbols); }

inline std::unordered_set<std::string> stopword_set() { return to_set(kStopwords); }

inline std::vector<std::string> license_patterns() { return to_vector(kLicensePatterns); }

/// Reads a one-entry-per-line list, trimmed; blank lines and '#' comments are ignored.
inline std::vector<std::string> load_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open list file: " + path);
  std::vector<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    auto e = line.find_last_not_of(" \t\r");
    out.push_back(line.substr(b, e - b + 1));
  }
  return out;
}

inline bool is_element(std::string_view token) {
  for (auto sym : kElementSymbols)
    if (sym == token) return true;
  return false;
}

}  // namespace corpusrefine::resources
