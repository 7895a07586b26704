// Copyright 2026 The d2t-edit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "d2t/cli.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <unistd.h>

#include "CLI11.hpp"
#include "d2t/checking.h"
#include "d2t/data.h"
#include "d2t/editing.h"
#include "d2t/errors.h"
#include "d2t/eval.h"
#include "d2t/fusion.h"
#include "d2t/miner.h"
#include "d2t/scoring.h"
#include "d2t/templates.h"

namespace d2t {

namespace {

int ParseInt(const std::string &key, const std::string &value) {
  try {
    size_t used = 0;
    int v = std::stoi(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception &) {
    throw ValidationError("config: " + key + " expects an integer, got '" +
                          value + "'");
  }
}

double ParseDouble(const std::string &key, const std::string &value) {
  try {
    size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception &) {
    throw ValidationError("config: " + key + " expects a number, got '" +
                          value + "'");
  }
}

bool ParseBool(const std::string &key, const std::string &value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ValidationError("config: " + key + " expects true/false, got '" +
                        value + "'");
}

std::vector<std::string> SplitList(const std::string &value) {
  std::vector<std::string> out;
  std::stringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::string_view t = Trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ifstream OpenOrThrow(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return in;
}

std::set<std::string> ReadLines(const std::string &path) {
  std::ifstream in = OpenOrThrow(path);
  std::set<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view t = Trim(line);
    if (!t.empty()) lines.emplace(t);
  }
  return lines;
}

// Value of --config from raw arguments, if any.
std::optional<std::string> FindConfigPath(const std::vector<std::string> &args) {
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

std::vector<std::string> LmCorpus(const RunConfig &cfg,
                                  const Dataset &fallback) {
  std::vector<std::string> corpus;
  const Dataset *source = &fallback;
  Dataset loaded;
  if (!cfg.lm_corpus.empty()) {
    loaded = LoadDataset(cfg.lm_corpus);
    source = &loaded;
  }
  for (const Example &e : source->examples) {
    corpus.insert(corpus.end(), e.references.begin(), e.references.end());
  }
  if (corpus.empty()) {
    throw ValidationError(
        "the ngram scorer needs reference texts: pass --lm-corpus <dataset>");
  }
  return corpus;
}

std::unique_ptr<Scorer> MakeScorer(const RunConfig &cfg,
                                   const Dataset &fallback_corpus) {
  if (cfg.scorer == "remote") {
    if (cfg.scorer_endpoint.empty()) {
      throw ValidationError("--scorer remote needs --scorer-endpoint or " +
                            std::string(kEndpointEnv));
    }
    return std::make_unique<RemoteScorer>(cfg.scorer_endpoint);
  }
  return MakeNGramScorer(LmCorpus(cfg, fallback_corpus), cfg.ngram_order,
                         cfg.ngram_k);
}

std::unique_ptr<FusionModel> MakeFuser(const RunConfig &cfg) {
  if (cfg.fuser == "identity") return std::make_unique<IdentityFusion>();
  if (cfg.fuser == "rules") return std::make_unique<RuleFusion>();
  if (cfg.fuser_endpoint.empty()) {
    throw ValidationError("--fuser remote needs --fuser-endpoint or " +
                          std::string(kEndpointEnv));
  }
  return std::make_unique<RemoteFusion>(cfg.fuser_endpoint);
}

std::unique_ptr<Checker> MakeChecker(const RunConfig &cfg) {
  if (cfg.checker == "slots") {
    if (cfg.slot_patterns.empty()) {
      throw ValidationError("--checker slots needs --slot-patterns <file>");
    }
    return std::make_unique<SlotChecker>(
        std::make_shared<const SlotPatternTable>(
            LoadSlotPatterns(cfg.slot_patterns)));
  }
  return std::make_unique<EntityChecker>();
}

void CheckOneOf(const std::string &what, const std::string &value,
                std::initializer_list<const char *> allowed) {
  for (const char *a : allowed) {
    if (value == a) return;
  }
  std::string list;
  for (const char *a : allowed) list += std::string(list.empty() ? "" : "|") + a;
  throw ValidationError(what + " must be one of " + list + ", got '" + value +
                        "'");
}

}  // namespace

void ApplyConfigText(const std::string &text, RunConfig *config) {
  std::stringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::string_view t = Trim(line);
    if (t.empty()) continue;
    size_t eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError("config line " + std::to_string(line_no) +
                            ": expected key = value");
    }
    std::string key(Trim(t.substr(0, eq)));
    std::string value(Trim(t.substr(eq + 1)));
    std::replace(key.begin(), key.end(), '-', '_');
    if (key == "beam_size") {
      config->beam_size = ParseInt(key, value);
    } else if (key == "vocab_size") {
      config->vocab_size = ParseInt(key, value);
    } else if (key == "strategy") {
      config->strategy = value;
    } else if (key == "checker") {
      config->checker = value;
    } else if (key == "scorer") {
      config->scorer = value;
    } else if (key == "fuser") {
      config->fuser = value;
    } else if (key == "endpoint") {
      config->scorer_endpoint = value;
      config->fuser_endpoint = value;
    } else if (key == "scorer_endpoint") {
      config->scorer_endpoint = value;
    } else if (key == "fuser_endpoint") {
      config->fuser_endpoint = value;
    } else if (key == "ngram_order") {
      config->ngram_order = ParseInt(key, value);
    } else if (key == "ngram_k") {
      config->ngram_k = ParseDouble(key, value);
    } else if (key == "slot_patterns") {
      config->slot_patterns = value;
    } else if (key == "lm_corpus") {
      config->lm_corpus = value;
    } else if (key == "templates") {
      config->templates = SplitList(value);
    } else if (key == "persons") {
      config->persons = value;
    } else if (key == "max_triples") {
      config->max_triples = ParseInt(key, value);
    } else if (key == "pair_start") {
      config->pair_start = ParseBool(key, value);
    } else {
      throw ValidationError("config line " + std::to_string(line_no) +
                            ": unknown key '" + key + "'");
    }
  }
}

void ApplyConfigFile(const std::string &path, RunConfig *config) {
  try {
    ApplyConfigText(ReadFile(path), config);
  } catch (const ValidationError &e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void ValidateRunConfig(const RunConfig &config) {
  if (config.beam_size < 1) throw ValidationError("beam size must be >= 1");
  if (config.vocab_size < 0) throw ValidationError("vocab size must be >= 0");
  if (config.ngram_order < 1) throw ValidationError("ngram order must be >= 1");
  if (!(config.ngram_k > 0.0)) throw ValidationError("ngram k must be > 0");
  if (config.max_triples < 0) throw ValidationError("max triples must be >= 0");
  ParseStrategy(config.strategy);
  CheckOneOf("checker", config.checker, {"entities", "slots"});
  CheckOneOf("scorer", config.scorer, {"ngram", "remote"});
  CheckOneOf("fuser", config.fuser, {"identity", "rules", "remote"});
}

void WriteFileAtomically(const std::string &path,
                         const std::function<void(std::ostream &)> &write) {
  namespace fs = std::filesystem;
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw ValidationError("cannot write " + tmp.string());
      write(out);
      out.flush();
      if (!out) throw ValidationError("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

std::string WordDiff(std::string_view before, std::string_view after) {
  std::vector<std::string> a = Words(before);
  std::vector<std::string> b = Words(after);
  TagSequence tags = AlignTokens(a, b);
  std::vector<std::string> parts;
  std::vector<std::string> removed;
  auto flush_removed = [&] {
    if (!removed.empty()) {
      parts.push_back("[-" + JoinPhrase(removed) + "-]");
      removed.clear();
    }
  };
  for (size_t i = 0; i < tags.tags.size(); ++i) {
    const Tag &tag = tags.tags[i];
    if (!tag.insert.empty()) {
      flush_removed();
      parts.push_back("{+" + JoinPhrase(tag.insert) + "+}");
    }
    if (i == a.size()) break;
    if (tag.base == EditOp::kDelete) {
      removed.push_back(a[i]);
    } else {
      flush_removed();
      parts.push_back(a[i]);
    }
  }
  flush_removed();
  return JoinPhrase(parts);
}

std::string RenderTrace(const std::vector<StepTrace> &steps) {
  std::ostringstream out;
  std::string current_example;
  bool first = true;
  for (const StepTrace &s : steps) {
    if (first || s.example_id != current_example) {
      if (!first) out << '\n';
      out << "Example " << s.example_id << '\n';
      current_example = s.example_id;
      first = false;
    }
    out << "Step #" << s.step << " (triple";
    if (s.triple_indices.size() > 1) out << 's';
    for (size_t k = 0; k < s.triple_indices.size(); ++k) {
      out << (k == 0 ? " " : ", ") << s.triple_indices[k];
    }
    out << ")\n";
    out << "  lexicalization: " << s.lexicalization << '\n';
    if (s.step > 0) {
      out << "  beam: " << s.beam_before.size() << " before filtering, "
          << s.beam_after.size() << " after\n";
      if (s.fallback) {
        out << "  FALLBACK (no fusion)\n";
      } else {
        out << "  edit:  " << WordDiff(s.input, s.chosen) << '\n';
      }
      out << "  added: " << WordDiff(s.previous, s.chosen) << '\n';
    }
    out << "  text:  " << s.chosen << '\n';
  }
  if (!steps.empty()) out << '\n';
  out << steps.size() << (steps.size() == 1 ? " step" : " steps") << '\n';
  return out.str();
}

int RunCli(const std::vector<std::string> &args, std::ostream &out,
           std::ostream &err) {
  RunConfig cfg;
  std::string config_path;

  CLI::App app{"Data-to-text generation by iterative sentence fusion", "d2t"};
  app.require_subcommand(1);
  app.add_option("--config", config_path, "key = value settings file");

  // Paths and per-command values.
  std::string input, format = "jsonl", split = "train", out_path, dataset,
                     mode = "single", allowlist, pairs_path, vocab_path,
                     trace_path, hyp_path, traces_path;
  auto add_backend_flags = [&](CLI::App *sub) {
    sub->add_option("--scorer", cfg.scorer, "ngram|remote");
    sub->add_option("--scorer-endpoint", cfg.scorer_endpoint);
    sub->add_option("--lm-corpus", cfg.lm_corpus,
                    "dataset whose references train the ngram scorer");
    sub->add_option("--ngram-order", cfg.ngram_order);
    sub->add_option("--ngram-k", cfg.ngram_k);
  };
  auto add_checker_flags = [&](CLI::App *sub) {
    sub->add_option("--checker", cfg.checker, "entities|slots");
    sub->add_option("--slot-patterns", cfg.slot_patterns);
  };

  CLI::App *import = app.add_subcommand("import", "convert a dataset to JSONL");
  import->add_option("--format", format, "webnlg|e2e|jsonl")->required();
  import->add_option("--input", input)->required();
  import->add_option("--split", split, "train|dev|test");
  import->add_option("--out", out_path)->required();

  CLI::App *extract =
      app.add_subcommand("extract-templates", "extract lexicalization templates");
  extract->add_option("--dataset", dataset)->required();
  extract->add_option("--mode", mode, "single|pair");
  extract->add_option("--allowlist", allowlist,
                      "template file listing the pair templates to keep");
  extract->add_option("--out", out_path)->required();

  CLI::App *mine = app.add_subcommand("mine-pairs", "build fusion training pairs");
  mine->add_option("--dataset", dataset)->required();
  mine->add_option("--templates", cfg.templates);
  mine->add_option("--strategy", cfg.strategy, "best|best_tgt|all");
  mine->add_option("--out", out_path)->required();
  add_backend_flags(mine);

  CLI::App *disco = app.add_subcommand(
      "filter-discofuse", "select DiscoFuse rows for zero-shot training");
  disco->add_option("--input", input)->required();
  disco->add_option("--out", out_path)->required();

  CLI::App *vocab = app.add_subcommand("build-vocab", "build the phrase vocabulary");
  vocab->add_option("--pairs", pairs_path)->required();
  vocab->add_option("--size", cfg.vocab_size);
  vocab->add_option("--out", out_path)->required();

  CLI::App *feasible = app.add_subcommand(
      "filter-feasible", "keep pairs convertible under a vocabulary");
  feasible->add_option("--pairs", pairs_path)->required();
  feasible->add_option("--vocab", vocab_path)->required();
  feasible->add_option("--out", out_path)->required();

  CLI::App *generate = app.add_subcommand("generate", "decode a dataset");
  generate->add_option("--dataset", dataset)->required();
  generate->add_option("--templates", cfg.templates);
  generate->add_option("--fuser", cfg.fuser, "identity|rules|remote");
  generate->add_option("--fuser-endpoint", cfg.fuser_endpoint);
  generate->add_option("--beam-size", cfg.beam_size);
  generate->add_option("--max-triples", cfg.max_triples);
  generate->add_option("--persons", cfg.persons,
                       "file with one person entity per line");
  bool no_pair_start = false;
  generate->add_flag("--no-pair-start", no_pair_start);
  generate->add_option("--trace", trace_path);
  generate->add_option("--out", out_path, "one text per example (stdout if absent)");
  add_backend_flags(generate);
  add_checker_flags(generate);

  CLI::App *evaluate = app.add_subcommand("evaluate", "score generated texts");
  evaluate->add_option("--hyp", hyp_path)->required();
  evaluate->add_option("--dataset", dataset)->required();
  evaluate->add_option("--traces", traces_path);
  evaluate->add_option("--templates", cfg.templates);
  evaluate->add_option("--out", out_path);
  add_checker_flags(evaluate);

  CLI::App *show = app.add_subcommand("show-trace", "render a trace file");
  show->add_option("trace", trace_path)->required();

  try {
    if (auto path = FindConfigPath(args)) ApplyConfigFile(*path, &cfg);
    if (const char *env = std::getenv(kEndpointEnv); env && *env) {
      cfg.scorer_endpoint = env;
      cfg.fuser_endpoint = env;
    }
  } catch (const ValidationError &e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  std::vector<const char *> argv = {"d2t"};
  for (const std::string &a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitValidation;
  }
  if (no_pair_start) cfg.pair_start = false;

  try {
    ValidateRunConfig(cfg);

    if (*import) {
      Dataset ds;
      if (format == "webnlg") {
        ds = ImportWebNlg(input);
      } else if (format == "e2e") {
        ds = ImportE2e(input);
      } else if (format == "jsonl") {
        ds = LoadJsonl(input);
      } else {
        throw ValidationError("unknown format '" + format + "'");
      }
      ds.split = ParseSplit(split);
      WriteFileAtomically(out_path, [&](std::ostream &o) { WriteJsonl(ds, o); });
      err << "imported " << ds.examples.size() << " examples\n";
    } else if (*extract) {
      Dataset ds = LoadDataset(dataset);
      TemplateStore store;
      if (mode == "single") {
        store = ExtractSingleTemplates(ds);
      } else if (mode == "pair") {
        store = ExtractPairTemplates(ds);
      } else {
        throw ValidationError("--mode must be single or pair");
      }
      if (!allowlist.empty()) {
        std::vector<std::string> paths = {allowlist};
        store = FilterByAllowlist(store, LoadTemplates(paths));
      }
      WriteFileAtomically(out_path,
                          [&](std::ostream &o) { WriteTemplates(store, o); });
      err << "extracted " << store.template_count() << " templates for "
          << store.entries().size() << " keys\n";
    } else if (*mine) {
      Dataset ds = LoadDataset(dataset);
      TemplateStore store = LoadTemplates(cfg.templates);
      auto scorer = MakeScorer(cfg, ds);
      auto pairs = MinePairs(ds, store, *scorer, ParseStrategy(cfg.strategy));
      WriteFileAtomically(out_path, [&](std::ostream &o) { WritePairs(pairs, o); });
      err << "mined " << pairs.size() << " pairs\n";
    } else if (*disco) {
      std::ifstream in = OpenOrThrow(input);
      DiscoFuseResult result = FilterDiscoFuse(ReadDiscoFuseTsv(in));
      WriteFileAtomically(out_path,
                          [&](std::ostream &o) { WritePairs(result.pairs, o); });
      err << "kept " << result.pairs.size() << " rows; dropped "
          << result.dropped_type << " by type, " << result.dropped_connective
          << " by connective, " << result.dropped_unknown
          << " with unknown type\n";
    } else if (*vocab) {
      std::ifstream in = OpenOrThrow(pairs_path);
      std::vector<TextPair> pairs = ToTextPairs(ReadPairs(in));
      PhraseVocabulary v =
          BuildVocabulary(pairs, static_cast<size_t>(cfg.vocab_size));
      WriteFileAtomically(out_path, [&](std::ostream &o) { WriteVocabulary(v, o); });
      err << "vocabulary: " << v.size() << " phrases\n";
    } else if (*feasible) {
      std::ifstream pin = OpenOrThrow(pairs_path);
      std::vector<FusionPair> pairs = ReadPairs(pin);
      std::ifstream vin = OpenOrThrow(vocab_path);
      PhraseVocabulary v = ReadVocabulary(vin);
      std::vector<FusionPair> kept;
      for (const FusionPair &p : pairs) {
        if (Convert(p.source, p.target, v)) kept.push_back(p);
      }
      WriteFileAtomically(out_path, [&](std::ostream &o) { WritePairs(kept, o); });
      err << "kept " << kept.size() << " of " << pairs.size() << " pairs\n";
    } else if (*generate) {
      Dataset ds = LoadDataset(dataset);
      TemplateStore store = LoadTemplates(cfg.templates);
      auto scorer = MakeScorer(cfg, ds);
      auto fuser = MakeFuser(cfg);
      auto checker = MakeChecker(cfg);
      DecoderConfig dc;
      dc.beam_size = cfg.beam_size;
      dc.pair_start = cfg.pair_start;
      if (cfg.max_triples > 0) dc.max_triples = cfg.max_triples;
      if (!cfg.persons.empty()) dc.persons = ReadLines(cfg.persons);

      std::vector<DecodeResult> results;
      results.reserve(ds.examples.size());
      for (const Example &e : ds.examples) {
        results.push_back(Generate(e, store, *scorer, *fuser, *checker, dc));
      }
      auto write_texts = [&](std::ostream &o) {
        for (const DecodeResult &r : results) {
          std::string line = r.text;
          std::replace(line.begin(), line.end(), '\n', ' ');
          o << line << '\n';
        }
      };
      if (!trace_path.empty()) {
        WriteFileAtomically(trace_path, [&](std::ostream &o) {
          for (const DecodeResult &r : results) {
            for (const StepTrace &s : r.steps) WriteTrace(s, o);
          }
        });
      }
      if (out_path.empty()) {
        write_texts(out);
      } else {
        WriteFileAtomically(out_path, write_texts);
      }
    } else if (*evaluate) {
      EvalInputs inputs;
      inputs.dataset = LoadDataset(dataset);
      {
        std::ifstream in = OpenOrThrow(hyp_path);
        std::string line;
        while (std::getline(in, line)) inputs.hypotheses.push_back(line);
      }
      if (!traces_path.empty()) {
        std::ifstream in = OpenOrThrow(traces_path);
        inputs.traces = ReadTrace(in);
      }
      if (!cfg.templates.empty()) inputs.store = LoadTemplates(cfg.templates);
      auto checker = MakeChecker(cfg);
      inputs.checker = checker.get();
      std::string report = ToJson(Report(inputs)).dump(2) + "\n";
      if (out_path.empty()) {
        out << report;
      } else {
        WriteFileAtomically(out_path, [&](std::ostream &o) { o << report; });
      }
    } else if (*show) {
      std::ifstream in = OpenOrThrow(trace_path);
      out << RenderTrace(ReadTrace(in));
    }
  } catch (const TransportError &e) {
    err << "backend error: " << e.what() << '\n';
    return kExitBackend;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitOk;
}

}  // namespace d2t
