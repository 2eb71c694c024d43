// SPDX-License-Identifier: Apache-2.0
//
// Seeded generator for a planted synthetic abstract corpus. Two element
// symbols co-occur with "conductivity", two others with "dielectric"; one of
// the dielectric-side elements is rare, so small early corpora can lack it.
#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "corpusrefine/csv.hpp"
#include "corpusrefine/error.hpp"
#include "corpusrefine/rng.hpp"

namespace corpusrefine::synth {

struct SynthConfig {
  std::size_t documents = 500;
  std::uint64_t seed = 3;
  std::array<std::string, 2> conductive{"Cu", "Ag"};
  std::array<std::string, 2> dielectric{"Hf", "Zr"};
  std::size_t rare_documents = 2;  // documents mentioning dielectric[1]
  double general_share = 0.1;      // documents with neither theme
  std::size_t sentences_min = 12;
  std::size_t sentences_max = 16;
};

struct SynthDocument {
  std::string id;
  std::string abstract;
};

namespace detail {

inline constexpr std::array<std::string_view, 14> kConductiveWords = {
    "metallic", "electron", "transport",  "resistivity", "carrier", "mobility", "conductive",
    "ohmic",    "current",  "electrical", "fermi",       "charge",  "drift",    "scattering"};

inline constexpr std::array<std::string_view, 14> kDielectricWords = {
    "permittivity", "insulating",   "capacitor",   "breakdown", "polarization", "insulator", "leakage",
    "capacitance",  "ferroelectric", "bandgap",    "relaxation", "gate",        "loss",      "tangent"};

inline constexpr std::array<std::string_view, 24> kGeneralWords = {
    "synthesis",  "film",       "annealing", "diffraction", "microscopy", "temperature", "sample",   "substrate",
    "deposition", "structure",  "phase",     "grain",       "surface",    "analysis",    "crystal",  "layer",
    "thickness",  "process",    "pressure",  "composition", "method",     "interface",   "morphology", "stability"};

inline constexpr std::array<std::string_view, 6> kTemplates = {
    "The {g} of {e} {t} was studied by {g}.",
    "We report {t} {a} in {e} {g} with {t} {g}.",
    "Our {g} shows that {e} improves the {a} and {t} of the {g}.",
    "A {t} {g} was observed for {e} at high {g}.",
    "These results relate {a} to {t} {g} in the {g}.",
    "{e} {g} exhibits {t} {a} after {g}."};

inline constexpr std::array<std::string_view, 3> kLicenses = {
    " \xC2\xA9 2023 The Authors. Published by Synthetic Press.",
    " This is an open access article under the CC BY license.",
    " Copyright \xC2\xA9 2022 Elsevier B.V. All rights reserved."};

template <std::size_t N>
std::string_view pick(const std::array<std::string_view, N>& pool, Rng& rng) {
  return pool[rng.between(0, N - 1)];
}

}  // namespace detail

/// Generates the corpus. Theme is drawn per document; rare-element documents
/// are spread evenly through the dielectric-theme documents.
inline std::vector<SynthDocument> generate(const SynthConfig& cfg) {
  if (cfg.documents < 1) throw ConfigError("synth: need at least one document");
  if (cfg.sentences_min < 1 || cfg.sentences_max < cfg.sentences_min) throw ConfigError("synth: bad sentence range");
  Rng rng(cfg.seed);

  enum class Theme { Conductive, Dielectric, General };
  std::vector<Theme> themes(cfg.documents);
  std::size_t n_dielectric = 0;
  for (auto& th : themes) {
    double u = rng.uniform();
    th = u < cfg.general_share ? Theme::General
         : u < cfg.general_share + (1.0 - cfg.general_share) / 2 ? Theme::Conductive
                                                                 : Theme::Dielectric;
    if (th == Theme::Dielectric) ++n_dielectric;
  }
  std::vector<bool> rare(cfg.documents, false);
  if (cfg.rare_documents > 0 && n_dielectric > 0) {
    std::size_t k = 0, placed = 0;
    const std::size_t stride = std::max<std::size_t>(1, n_dielectric / cfg.rare_documents);
    for (std::size_t i = 0; i < cfg.documents && placed < cfg.rare_documents; ++i) {
      if (themes[i] != Theme::Dielectric) continue;
      if (k++ % stride == stride / 2) {
        rare[i] = true;
        ++placed;
      }
    }
  }

  std::vector<SynthDocument> docs;
  docs.reserve(cfg.documents);
  for (std::size_t i = 0; i < cfg.documents; ++i) {
    const Theme th = themes[i];
    std::string text;
    bool rare_named = false;
    const std::size_t sentences = rng.between(cfg.sentences_min, cfg.sentences_max);
    for (std::size_t s = 0; s < sentences; ++s) {
      std::string_view tmpl = detail::pick(detail::kTemplates, rng);
      std::string sentence;
      for (std::size_t c = 0; c < tmpl.size(); ++c) {
        if (tmpl[c] != '{') {
          sentence.push_back(tmpl[c]);
          continue;
        }
        const char slot = tmpl[c + 1];
        c += 2;
        switch (slot) {
          case 'g': sentence += detail::pick(detail::kGeneralWords, rng); break;
          case 't':
            sentence += th == Theme::Conductive   ? detail::pick(detail::kConductiveWords, rng)
                        : th == Theme::Dielectric ? detail::pick(detail::kDielectricWords, rng)
                                                  : detail::pick(detail::kGeneralWords, rng);
            break;
          case 'a':
            sentence += th == Theme::Conductive   ? "conductivity"
                        : th == Theme::Dielectric ? "dielectric"
                                                  : detail::pick(detail::kGeneralWords, rng);
            break;
          case 'e':
            if (th == Theme::Conductive) {
              sentence += cfg.conductive[rng.between(0, 1)];
            } else if (th == Theme::Dielectric) {
              // The rare element replaces the first mention only, so the document
              // otherwise reads like any other dielectric abstract.
              sentence += rare[i] && !rare_named ? cfg.dielectric[1] : cfg.dielectric[0];
              rare_named = true;
            } else {
              sentence += "The alloy";
            }
            break;
          default: throw ConfigError("synth: bad template");
        }
      }
      if (!text.empty()) text.push_back(' ');
      text += sentence;
    }
    if (rng.uniform() < 0.3) text += detail::pick(detail::kLicenses, rng);
    docs.push_back({"syn" + std::to_string(i + 1), std::move(text)});
  }
  return docs;
}

inline std::string to_csv(const std::vector<SynthDocument>& docs) {
  std::string out = csv::format_row({"id", "abstract"});
  for (const auto& d : docs) out += csv::format_row({d.id, d.abstract});
  return out;
}

}  // namespace corpusrefine::synth
