// SPDX-License-Identifier: Apache-2.0
//
// Command-line driver. Exit codes: 0 success, 1 usage or configuration error,
// 2 data error, 3 no convergence under --require-convergence.
#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "corpusrefine/config.hpp"
#include "corpusrefine/corpus.hpp"
#include "corpusrefine/embedding.hpp"
#include "corpusrefine/error.hpp"
#include "corpusrefine/materials.hpp"
#include "corpusrefine/persistence.hpp"
#include "corpusrefine/refine.hpp"
#include "corpusrefine/resources.hpp"
#include "corpusrefine/screen.hpp"
#include "corpusrefine/selection.hpp"
#include "corpusrefine/synth.hpp"

namespace corpusrefine::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kDataError = 2, kNotConverged = 3 };

namespace detail {

namespace fs = std::filesystem;

// Everything parsed from the command line. Setting overrides are applied on
// top of the config file in the order given.
struct Invocation {
  std::string config;
  std::vector<std::pair<std::string, std::string>> overrides;
  bool require_convergence = false;
  std::string model;
  std::string full_model;
  std::string measured;
  std::optional<double> potential;
  bool complete = false;
  std::string screen;
  std::string full;
  synth::SynthConfig synth;
  std::size_t synth_steps = 10;
};

enum Group : unsigned {
  kCorpus = 1u << 0,
  kEmbedding = 1u << 1,
  kBatch = 1u << 2,
  kRefine = 1u << 3,
  kCandidates = 1u << 4,
  kScreen = 1u << 5,
  kOut = 1u << 6,
};

inline void add_setting(CLI::App* app, Invocation& inv, const std::string& flag, const std::string& help) {
  std::string key = flag;
  std::replace(key.begin(), key.end(), '-', '_');
  app->add_option_function<std::string>(
      "--" + flag, [&inv, key](const std::string& v) { inv.overrides.emplace_back(key, v); }, help);
}

inline void add_switch(CLI::App* app, Invocation& inv, const std::string& flag, const std::string& key,
                       const std::string& value, const std::string& help) {
  app->add_flag_callback("--" + flag, [&inv, key, value] { inv.overrides.emplace_back(key, value); }, help);
}

inline void add_groups(CLI::App* app, Invocation& inv, unsigned groups) {
  app->add_option("--config", inv.config, "key=value settings file (a run manifest also works)");
  if (groups & kCorpus) {
    add_setting(app, inv, "corpus", "abstract CSV, or a .tokens file from `ingest`");
    add_setting(app, inv, "text-column", "abstract column name (default abstract)");
    add_setting(app, inv, "id-column", "id column name (default id)");
    add_switch(app, inv, "strict", "strict", "1", "fail on malformed CSV rows instead of skipping them");
  }
  if (groups & kEmbedding) {
    add_setting(app, inv, "seed", "training seed (default 1)");
    add_switch(app, inv, "deterministic", "deterministic", "1", "single-threaded reproducible training (default)");
    add_switch(app, inv, "parallel", "deterministic", "0", "lock-free multi-threaded training");
    add_setting(app, inv, "threads", "worker threads for --parallel (0 = hardware)");
    add_setting(app, inv, "dim", "vector dimension (default 200)");
    add_setting(app, inv, "window", "context window (default 5)");
    add_setting(app, inv, "epochs", "training epochs (default 5)");
    add_setting(app, inv, "alpha0", "initial learning rate (default 0.025)");
    add_setting(app, inv, "alpha-min", "final learning rate (default 0.0001)");
    add_setting(app, inv, "min-count", "minimum token count (default 1)");
  }
  if (groups & kBatch) add_setting(app, inv, "batch-size", "documents per batch (default 50)");
  if (groups & kRefine) {
    add_setting(app, inv, "threshold", "centroid displacement cutoff (default 0.03)");
    add_setting(app, inv, "max-iterations", "iteration cap (default 0 = until the corpus is exhausted)");
    app->add_flag("--require-convergence", inv.require_convergence, "exit 3 when the loop does not converge");
  }
  if (groups & kCandidates) {
    add_setting(app, inv, "candidates", "composition CSV (element columns, optional id)");
    add_setting(app, inv, "elements", "comma-separated element symbols for a simplex grid");
    add_setting(app, inv, "steps", "simplex subdivisions (default 10)");
    add_setting(app, inv, "anchors", "dielectric and conductivity anchor terms (default dielectric,conductivity)");
  }
  if (groups & kScreen) {
    add_setting(app, inv, "preset", "objective preset: orr, her or oer (default orr)");
    app->add_option("--measured", inv.measured, "measured table (id, current_density, optional potential)");
    app->add_option("--potential", inv.potential, "keep measured rows at this potential (mV)");
    app->add_flag("--complete", inv.complete, "every front member must have a measured row");
  }
  if (groups & kOut) add_setting(app, inv, "out", "output directory (default .)");
}

inline bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

inline Settings resolve(const Invocation& inv) {
  Settings s;
  if (!inv.config.empty()) {
    apply_config_file(s, inv.config);
    auto manifest = io::RunManifest::load(inv.config);
    manifest.verify_inputs();
  }
  for (const auto& [k, v] : inv.overrides) apply_setting(s, k, v);
  return s;
}

inline DocumentSet load_documents(const Settings& s, std::ostream& err) {
  if (s.corpus.empty()) throw ConfigError("no corpus given (--corpus)");
  if (ends_with(s.corpus, ".tokens")) return io::load_tokens(s.corpus);
  DocumentSet docs = load_corpus(s.corpus, {s.text_column, s.id_column, s.strict});
  if (docs.skipped_empty) err << "note: skipped " << docs.skipped_empty << " rows with empty abstracts\n";
  for (const auto& issue : docs.malformed) err << "warning: row " << issue.row << ": " << issue.message << "\n";
  Preprocessor().apply(docs);
  if (docs.empty()) throw DataError(s.corpus + ": no documents");
  return docs;
}

inline std::vector<Composition> load_candidates(const Settings& s) {
  for (const auto& e : s.elements)
    if (!resources::is_element(e)) throw ConfigError("'" + e + "' is not an element symbol");
  if (!s.candidates.empty()) {
    auto cs = load_compositions(s.candidates, true);
    if (!s.elements.empty())
      for (const auto& c : cs)
        for (std::size_t i = 0; i < c.elements.size(); ++i)
          if (c.fractions[i] > 0 && std::find(s.elements.begin(), s.elements.end(), c.elements[i]) == s.elements.end())
            throw DataError(s.candidates + ": candidate '" + c.id + "' uses undeclared element " + c.elements[i]);
    if (cs.empty()) throw DataError(s.candidates + ": no candidates");
    return cs;
  }
  if (s.elements.empty()) throw ConfigError("no candidates given (--candidates or --elements)");
  return enumerate_simplex(s.elements, s.steps);
}

inline fs::path out_path(const Settings& s, const std::string& name) { return fs::path(s.out) / name; }

inline std::string fixed2(const std::optional<double>& x) {
  if (!x) return "n/a";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", *x);
  return buf;
}

inline void line(std::ostream& out, const std::string& label, const std::string& value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%-21s", label.c_str());
  out << buf << value << "\n";
}

// ---- subcommands ----

inline int cmd_ingest(const Invocation& inv, std::ostream& out, std::ostream& err) {
  Settings s = resolve(inv);
  DocumentSet docs = load_documents(s, err);
  auto path = out_path(s, "corpus.tokens");
  io::atomic_write(path, io::tokens_text(docs));
  std::size_t tokens = 0;
  for (const auto& d : docs.documents) tokens += d.tokens.size();
  out << "documents " << docs.size() << "\ntokens " << tokens << "\nwrote " << path.string() << "\n";
  return kOk;
}

inline int cmd_embed_docs(const Invocation& inv, std::ostream& out, std::ostream& err) {
  Settings s = resolve(inv);
  DocumentSet docs = load_documents(s, err);
  TrainStats stats;
  DocModel model = train_doc2vec(docs, s.embedding(), &stats);
  auto base = out_path(s, "docs");
  io::save_doc_model(model, base);
  out << "documents " << model.ids.size() << "\ndim " << model.vectors.cols() << "\n";
  if (!stats.epoch_mean_loss.empty()) out << "final epoch loss " << stats.epoch_mean_loss.back() << "\n";
  out << "wrote " << io::with_suffix(base, ".vec").string() << "\n";
  return kOk;
}

inline std::vector<std::string> doc_ids(const DocumentSet& docs) {
  std::vector<std::string> ids;
  for (const auto& d : docs.documents) ids.push_back(d.id);
  return ids;
}

inline int cmd_select(const Invocation& inv, std::ostream& out, std::ostream& err) {
  Settings s = resolve(inv);
  if (s.batch_size < 1) throw ConfigError("batch_size must be >= 1");
  DocumentSet docs = load_documents(s, err);
  SelectionPlan plan = plan_selection(docs, s.embedding(), s.batch_size);
  auto path = out_path(s, "selection.csv");
  io::atomic_write(path, io::selection_csv(plan.order, doc_ids(docs)));
  out << "documents " << docs.size() << "\ncentral " << docs.documents[plan.central].id << "\nexplained variance "
      << plan.projection.explained_variance[0] << " " << plan.projection.explained_variance[1] << "\nwrote "
      << path.string() << "\n";
  return kOk;
}

inline int cmd_refine(const Invocation& inv, std::ostream& out, std::ostream& err) {
  Settings s = resolve(inv);
  RefineConfig rc = s.refine();
  rc.validate();
  DocumentSet docs = load_documents(s, err);
  auto candidates = load_candidates(s);

  auto observer = [&out](const IterationRecord& r) {
    out << "t=" << r.iteration << " documents=" << r.documents_used;
    if (!r.vocab_complete) {
      out << " vocabulary incomplete\n";
      return;
    }
    out << " centroid=(" << io::format_double((*r.centroid)[0]) << ", " << io::format_double((*r.centroid)[1]) << ")";
    if (r.displacement) out << " displacement=" << io::format_double(*r.displacement);
    out << "\n";
  };
  RefinementResult result = run_refinement(docs, candidates, rc, observer);

  const auto sel = out_path(s, "selection.csv");
  const auto log_csv = out_path(s, "iterations.csv");
  const auto log_dat = out_path(s, "iterations.dat");
  const auto model = out_path(s, "model");
  const auto doc_model = out_path(s, "docs");
  io::atomic_write(sel, io::selection_csv(result.selection.order, doc_ids(docs)));
  io::atomic_write(log_csv, io::iteration_csv(result.records));
  io::atomic_write(log_dat, io::iteration_dat(result.records));
  io::save_model(result.final_model, model);
  io::save_doc_model(result.selection.doc_model, doc_model);

  io::RunManifest manifest;
  for (const auto& [k, v] : settings_entries(s)) manifest.set(k, v);
  manifest.add_input("corpus", s.corpus);
  if (!s.candidates.empty()) manifest.add_input("candidates", s.candidates);
  manifest.set("output.selection", sel.string());
  manifest.set("output.iterations_csv", log_csv.string());
  manifest.set("output.iterations_dat", log_dat.string());
  manifest.set("output.model", model.string());
  manifest.set("output.doc_model", doc_model.string());
  manifest.set("result.iterations", std::to_string(result.records.size()));
  manifest.set("result.converged", result.converged ? "1" : "0");
  manifest.save(out_path(s, "manifest.txt"));

  const auto& last = result.records.back();
  out << (result.converged ? "converged" : "not converged") << " after " << result.records.size()
      << " iterations (" << last.documents_used << " documents)\n";
  if (!result.converged) {
    err << "warning: centroid displacement never fell below " << s.threshold << "\n";
    if (inv.require_convergence) return kNotConverged;
  }
  return kOk;
}

// Similarity coordinates plus ids, from a screen table or a model.
struct Scored {
  std::vector<std::string> ids;
  std::vector<SimilarityPoint> points;
};

inline Scored score_model(const std::string& model_base, const std::vector<Composition>& candidates,
                          const Settings& s) {
  WordModel model = io::load_model(model_base);
  PropertyAnchors anchors;
  anchors.terms = s.anchors;
  Scored sc;
  sc.points = similarity_points(model, candidates, anchors);
  for (const auto& c : candidates) sc.ids.push_back(c.id);
  return sc;
}

inline Scored score_table(const std::string& path) {
  ScreenTable t = load_screen_table(path);
  return {std::move(t.ids), std::move(t.points)};
}

inline std::vector<Composition> id_only(const std::vector<std::string>& ids) {
  std::vector<Composition> cs(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) cs[i].id = ids[i];
  return cs;
}

inline std::optional<MeasuredTable> load_measured_opt(const Invocation& inv) {
  if (inv.measured.empty()) return std::nullopt;
  return load_measured(inv.measured, inv.potential, inv.complete);
}

inline int cmd_screen(const Invocation& inv, std::ostream& out, std::ostream& err) {
  (void)err;
  Settings s = resolve(inv);
  Objectives obj = Objectives::preset(s.preset);
  if (inv.model.empty()) throw ConfigError("screen needs --model (base path of a saved word model)");
  auto candidates = load_candidates(s);
  auto measured = load_measured_opt(inv);
  Scored sc = score_model(inv.model, candidates, s);
  auto front = pareto_front(sc.points, obj);
  ScreenReport rep = screen_report(front, candidates, measured ? &*measured : nullptr);
  auto path = out_path(s, "screen.csv");
  io::atomic_write(path, screen_csv(candidates, sc.points, front, measured ? &*measured : nullptr));

  line(out, "Preset", s.preset);
  line(out, "Entries (Ori)", std::to_string(rep.entries_total));
  line(out, "Entries (Selection)", std::to_string(rep.front.size()));
  if (measured) {
    line(out, "Min (Selection)", fixed2(rep.min_current));
    line(out, "Max (Selection)", fixed2(rep.max_current));
  }
  out << "front:";
  for (auto i : front) out << " " << candidates[i].id;
  out << "\nwrote " << path.string() << "\n";
  return kOk;
}

inline int cmd_report(const Invocation& inv, std::ostream& out, std::ostream& err) {
  (void)err;
  Settings s = resolve(inv);
  Objectives obj = Objectives::preset(s.preset);

  auto source = [&](const std::string& table, const std::string& model, const char* what) -> std::optional<Scored> {
    if (!table.empty() && !model.empty()) throw ConfigError(std::string("give either a table or a model for ") + what);
    if (!table.empty()) return score_table(table);
    if (!model.empty()) return score_model(model, load_candidates(s), s);
    return std::nullopt;
  };
  auto selection = source(inv.screen, inv.model, "the selection front");
  if (!selection) throw ConfigError("report needs --screen TABLE or --model BASE for the selection front");
  auto full = source(inv.full, inv.full_model, "the full-corpus front");
  if (full && full->ids != selection->ids) throw DataError("full-corpus and selection candidates differ");

  auto measured = load_measured_opt(inv);
  const MeasuredTable* m = measured ? &*measured : nullptr;
  const auto candidates = id_only(selection->ids);

  std::vector<std::size_t> everyone(candidates.size());
  for (std::size_t i = 0; i < everyone.size(); ++i) everyone[i] = i;
  MeasuredTable ori_table;
  if (m) {
    ori_table = *m;
    ori_table.complete = false;
  }
  ScreenReport ori = screen_report(everyone, candidates, m ? &ori_table : nullptr);
  ScreenReport sel = screen_report(pareto_front(selection->points, obj), candidates, m);
  std::optional<ScreenReport> fr;
  if (full) fr = screen_report(pareto_front(full->points, obj), candidates, m);

  line(out, "Preset", s.preset);
  if (inv.potential) line(out, "Potential (mV)", io::format_double(*inv.potential));
  line(out, "Entries (Ori)", std::to_string(ori.entries_total));
  if (fr) line(out, "Entries (Full)", std::to_string(fr->front.size()));
  line(out, "Entries (Selection)", std::to_string(sel.front.size()));
  if (m) {
    line(out, "Min (Ori)", fixed2(ori.min_current));
    line(out, "Max (Ori)", fixed2(ori.max_current));
    if (fr) {
      line(out, "Min (Full)", fixed2(fr->min_current));
      line(out, "Max (Full)", fixed2(fr->max_current));
    }
    line(out, "Min (Selection)", fixed2(sel.min_current));
    line(out, "Max (Selection)", fixed2(sel.max_current));
  }
  return kOk;
}

inline int cmd_synth(const Invocation& inv, std::ostream& out, std::ostream& err) {
  (void)err;
  Settings s = resolve(inv);
  auto docs = synth::generate(inv.synth);
  const auto corpus = out_path(s, "synth.csv");
  const auto candidates = out_path(s, "synth_candidates.csv");
  io::atomic_write(corpus, synth::to_csv(docs));

  std::vector<std::string> elements{inv.synth.conductive[0], inv.synth.conductive[1], inv.synth.dielectric[0],
                                    inv.synth.dielectric[1]};
  auto cs = enumerate_simplex(elements, inv.synth_steps);
  std::vector<std::string> header{"id"};
  header.insert(header.end(), elements.begin(), elements.end());
  std::string text = csv::format_row(header);
  for (const auto& c : cs) {
    std::vector<std::string> row{c.id};
    for (double f : c.fractions) row.push_back(io::format_double(f));
    text += csv::format_row(row);
  }
  io::atomic_write(candidates, text);
  out << "documents " << docs.size() << "\ncandidates " << cs.size() << "\nwrote " << corpus.string() << "\nwrote "
      << candidates.string() << "\n";
  return kOk;
}

}  // namespace detail

/// Runs one subcommand. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace detail;
  CLI::App app{"Iterative corpus refinement and Pareto screening for composition-property prediction",
               "corpusrefine"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", std::string(io::kToolVersion));
  Invocation inv;

  using Handler = std::function<int(const Invocation&, std::ostream&, std::ostream&)>;
  std::vector<std::pair<CLI::App*, Handler>> commands;
  auto add = [&](const char* name, const char* help, unsigned groups, Handler h) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_groups(sub, inv, groups);
    commands.emplace_back(sub, std::move(h));
    return sub;
  };

  add("ingest", "preprocess an abstract CSV into <out>/corpus.tokens", kCorpus | kOut, cmd_ingest);
  add("embed-docs", "train document vectors into <out>/docs.{vec,meta}", kCorpus | kEmbedding | kOut,
      cmd_embed_docs);
  add("select", "document map and farthest-point ordering into <out>/selection.csv",
      kCorpus | kEmbedding | kBatch | kOut, cmd_select);
  add("refine", "run the refinement loop; writes logs, models and manifest.txt under <out>",
      kCorpus | kEmbedding | kBatch | kRefine | kCandidates | kOut, cmd_refine);
  auto* screen = add("screen", "Pareto front of the candidates under a saved word model into <out>/screen.csv",
                     kCandidates | kScreen | kOut, cmd_screen);
  screen->add_option("--model", inv.model, "word model base path (e.g. out/model)");
  auto* report = add("report", "Entries/Min/Max summary over full, selection and unscreened candidates",
                     kCandidates | kScreen, cmd_report);
  report->add_option("--screen", inv.screen, "screen table for the selection model");
  report->add_option("--model", inv.model, "selection word model (instead of --screen)");
  report->add_option("--full", inv.full, "screen table for the full-corpus model");
  report->add_option("--full-model", inv.full_model, "full-corpus word model (instead of --full)");
  auto* synth_cmd = add("synth", "write the planted synthetic corpus and its candidate grid under <out>", kOut,
                        cmd_synth);
  synth_cmd->add_option("--docs", inv.synth.documents, "number of abstracts")->capture_default_str();
  synth_cmd->add_option("--rare", inv.synth.rare_documents, "documents mentioning the rare element")
      ->capture_default_str();
  synth_cmd->add_option("--seed", inv.synth.seed, "generator seed")->capture_default_str();
  synth_cmd->add_option("--steps", inv.synth_steps, "candidate grid subdivisions")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kUsage;
  }

  try {
    for (auto& [sub, handler] : commands)
      if (sub->parsed()) return handler(inv, out, err);
    return kUsage;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const OutOfVocabulary& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kDataError;
  }
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace corpusrefine::cli
