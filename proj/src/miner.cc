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

#include "d2t/miner.h"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <tuple>

#include "d2t/checking.h"
#include "d2t/errors.h"
#include "d2t/scoring.h"
#include "json.hpp"

namespace d2t {

namespace {

using json = nlohmann::json;

std::vector<Triple> SortedTriples(std::vector<Triple> triples) {
  std::sort(triples.begin(), triples.end());
  return triples;
}

// Index of the scorer's best reference; ties keep the earliest.
int BestReference(const Example &example, const Scorer &scorer) {
  std::vector<double> scores = scorer.LogScores(example.references);
  int best = 0;
  for (size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = static_cast<int>(i);
  }
  return best;
}

std::vector<std::string> SplitTabs(const std::string &line) {
  std::vector<std::string> cells;
  size_t start = 0;
  while (true) {
    size_t tab = line.find('\t', start);
    cells.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  if (!cells.empty() && !cells.back().empty() && cells.back().back() == '\r') {
    cells.back().pop_back();
  }
  return cells;
}

}  // namespace

std::string_view StrategyName(ReferenceStrategy strategy) {
  switch (strategy) {
    case ReferenceStrategy::kBest: return "best";
    case ReferenceStrategy::kBestTgt: return "best_tgt";
    case ReferenceStrategy::kAll: return "all";
  }
  return "all";
}

ReferenceStrategy ParseStrategy(std::string_view name) {
  if (name == "best") return ReferenceStrategy::kBest;
  if (name == "best_tgt") return ReferenceStrategy::kBestTgt;
  if (name == "all") return ReferenceStrategy::kAll;
  throw ValidationError("unknown reference strategy '" + std::string(name) +
                        "' (expected best, best_tgt or all)");
}

std::vector<FusionPair> MinePairs(const Dataset &dataset,
                                  const TemplateStore &store,
                                  const Scorer &scorer,
                                  ReferenceStrategy strategy) {
  const std::vector<Example> &examples = dataset.examples;
  std::map<std::vector<Triple>, std::vector<size_t>> by_triples;
  for (size_t i = 0; i < examples.size(); ++i) {
    if (examples[i].references.empty()) continue;
    by_triples[SortedTriples(examples[i].triples)].push_back(i);
  }

  std::map<size_t, int> best_ref;
  auto best_of = [&](size_t index) {
    auto it = best_ref.find(index);
    if (it == best_ref.end()) {
      it = best_ref.emplace(index, BestReference(examples[index], scorer)).first;
    }
    return it->second;
  };
  std::map<Triple, std::string> lex_cache;
  auto lex_of = [&](const Triple &t) -> const std::string & {
    auto it = lex_cache.find(t);
    if (it == lex_cache.end()) {
      it = lex_cache
               .emplace(t, SelectLexicalization(store, std::span(&t, 1), scorer)
                               .text)
               .first;
    }
    return it->second;
  };

  std::vector<FusionPair> pairs;
  for (size_t target = 0; target < examples.size(); ++target) {
    const Example &bigger = examples[target];
    if (bigger.references.empty() || bigger.triples.size() < 2) continue;
    for (size_t drop = 0; drop < bigger.triples.size(); ++drop) {
      std::vector<Triple> rest;
      for (size_t k = 0; k < bigger.triples.size(); ++k) {
        if (k != drop) rest.push_back(bigger.triples[k]);
      }
      auto hit = by_triples.find(SortedTriples(std::move(rest)));
      if (hit == by_triples.end()) continue;
      const Triple &extra = bigger.triples[drop];
      for (size_t source : hit->second) {
        const Example &smaller = examples[source];
        const std::string &lex = lex_of(extra);
        std::vector<int> src_refs;
        std::vector<int> tgt_refs;
        if (strategy == ReferenceStrategy::kAll) {
          for (size_t r = 0; r < smaller.references.size(); ++r) {
            src_refs.push_back(static_cast<int>(r));
          }
          for (size_t r = 0; r < bigger.references.size(); ++r) {
            tgt_refs.push_back(static_cast<int>(r));
          }
        } else {
          tgt_refs.push_back(best_of(target));
          if (strategy == ReferenceStrategy::kBest) {
            src_refs.push_back(best_of(source));
          } else {
            for (size_t r = 0; r < smaller.references.size(); ++r) {
              src_refs.push_back(static_cast<int>(r));
            }
          }
        }
        for (int s : src_refs) {
          for (int t : tgt_refs) {
            FusionPair pair;
            pair.source = smaller.references[s] + " " + lex;
            pair.target = bigger.references[t];
            pair.meta = {smaller.id, bigger.id, extra, s, t, ""};
            pairs.push_back(std::move(pair));
          }
        }
      }
    }
  }

  std::sort(pairs.begin(), pairs.end(),
            [](const FusionPair &a, const FusionPair &b) {
              return std::tie(a.meta.source_id, a.meta.target_id,
                              a.meta.source_ref, a.meta.target_ref) <
                     std::tie(b.meta.source_id, b.meta.target_id,
                              b.meta.source_ref, b.meta.target_ref);
            });
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<FusionPair> unique;
  for (FusionPair &p : pairs) {
    if (seen.emplace(p.source, p.target).second) unique.push_back(std::move(p));
  }
  return unique;
}

// ---------------------------------------------------------------------------
// DiscoFuse

const std::vector<std::string> &DiscourseTypes() {
  static const std::vector<std::string> kTypes = {
      "PAIR_ANAPHORA",
      "PAIR_CONN",
      "PAIR_CONN_ANAPHORA",
      "PAIR_NONE",
      "SINGLE_APPOSITION",
      "SINGLE_CATAPHORA",
      "SINGLE_CONN_INNER",
      "SINGLE_CONN_INNER_ANAPHORA",
      "SINGLE_CONN_START",
      "SINGLE_RELATIVE",
      "SINGLE_S_COORD",
      "SINGLE_S_COORD_ANAPHORA",
      "SINGLE_VP_COORD",
  };
  return kTypes;
}

bool IsSelectedType(std::string_view type) {
  static const std::set<std::string, std::less<>> kSelected = {
      "PAIR_ANAPHORA",    "PAIR_NONE",      "SINGLE_APPOSITION",
      "SINGLE_RELATIVE",  "SINGLE_S_COORD", "SINGLE_S_COORD_ANAPHORA",
      "SINGLE_VP_COORD",
  };
  return kSelected.count(type) > 0;
}

bool NeedsConnectiveCheck(std::string_view type) {
  return type == "SINGLE_S_COORD" || type == "SINGLE_S_COORD_ANAPHORA" ||
         type == "SINGLE_VP_COORD";
}

bool KeepDiscoFuseRow(const DiscoFuseRow &row) {
  if (!IsSelectedType(row.discourse_type)) return false;
  if (!NeedsConnectiveCheck(row.discourse_type)) return true;
  std::string conn = ToLowerAscii(Trim(row.connective));
  return conn == "and" || conn == ", and";
}

DiscoFuseResult FilterDiscoFuse(const std::vector<DiscoFuseRow> &rows) {
  const auto &known = DiscourseTypes();
  DiscoFuseResult result;
  for (const DiscoFuseRow &row : rows) {
    if (std::find(known.begin(), known.end(), row.discourse_type) ==
        known.end()) {
      ++result.dropped_unknown;
      continue;
    }
    if (!IsSelectedType(row.discourse_type)) {
      ++result.dropped_type;
      continue;
    }
    if (!KeepDiscoFuseRow(row)) {
      ++result.dropped_connective;
      continue;
    }
    FusionPair pair;
    std::string_view first = Trim(row.first);
    std::string_view second = Trim(row.second);
    pair.source = std::string(first);
    if (!second.empty()) {
      if (!pair.source.empty()) pair.source += ' ';
      pair.source += second;
    }
    pair.target = std::string(Trim(row.fused));
    pair.meta.discourse_type = row.discourse_type;
    result.pairs.push_back(std::move(pair));
  }
  return result;
}

std::vector<DiscoFuseRow> ReadDiscoFuseTsv(std::istream &in) {
  std::string line;
  if (!std::getline(in, line)) return {};
  std::vector<std::string> header = SplitTabs(line);
  auto column = [&](std::string_view name) -> int {
    for (size_t i = 0; i < header.size(); ++i) {
      if (Trim(header[i]) == name) return static_cast<int>(i);
    }
    return -1;
  };
  const int first = column("incoherent_first_sentence");
  const int second = column("incoherent_second_sentence");
  const int fused1 = column("coherent_first_sentence");
  const int fused2 = column("coherent_second_sentence");
  const int type = column("discourse_type");
  const int conn = column("connective_string");
  if (first < 0 || second < 0 || fused1 < 0 || type < 0 || conn < 0) {
    throw ValidationError(
        "discofuse: header must name incoherent_first_sentence, "
        "incoherent_second_sentence, coherent_first_sentence, "
        "discourse_type and connective_string");
  }
  std::vector<DiscoFuseRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    std::vector<std::string> cells = SplitTabs(line);
    auto cell = [&](int col) -> std::string {
      if (col < 0) return {};
      if (col >= static_cast<int>(cells.size())) {
        throw ValidationError("discofuse line " + std::to_string(line_no) +
                              ": missing column " + std::to_string(col));
      }
      return cells[col];
    };
    DiscoFuseRow row;
    row.first = cell(first);
    row.second = cell(second);
    row.fused = std::string(Trim(cell(fused1)));
    std::string tail(Trim(cell(fused2)));
    if (!tail.empty()) row.fused += (row.fused.empty() ? "" : " ") + tail;
    row.discourse_type = std::string(Trim(cell(type)));
    row.connective = cell(conn);
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Pair files

void WritePairs(const std::vector<FusionPair> &pairs, std::ostream &out) {
  for (const FusionPair &p : pairs) {
    json meta = json::object();
    if (!p.meta.source_id.empty() || !p.meta.target_id.empty()) {
      meta["source_id"] = p.meta.source_id;
      meta["target_id"] = p.meta.target_id;
      meta["triple"] = {{"s", p.meta.extra.subject},
                        {"p", p.meta.extra.predicate},
                        {"o", p.meta.extra.object}};
      meta["source_ref"] = p.meta.source_ref;
      meta["target_ref"] = p.meta.target_ref;
    }
    if (!p.meta.discourse_type.empty()) {
      meta["discourse_type"] = p.meta.discourse_type;
    }
    json obj = {{"source", p.source}, {"target", p.target}, {"meta", meta}};
    out << obj.dump() << '\n';
  }
}

std::vector<FusionPair> ReadPairs(std::istream &in) {
  std::vector<FusionPair> pairs;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      json obj = json::parse(line);
      FusionPair p;
      p.source = obj.at("source").get<std::string>();
      p.target = obj.at("target").get<std::string>();
      if (obj.contains("meta")) {
        const json &m = obj["meta"];
        p.meta.source_id = m.value("source_id", std::string());
        p.meta.target_id = m.value("target_id", std::string());
        if (m.contains("triple")) {
          const json &t = m["triple"];
          p.meta.extra = {t.at("s").get<std::string>(),
                          t.at("p").get<std::string>(),
                          t.at("o").get<std::string>()};
        }
        p.meta.source_ref = m.value("source_ref", -1);
        p.meta.target_ref = m.value("target_ref", -1);
        p.meta.discourse_type = m.value("discourse_type", std::string());
      }
      pairs.push_back(std::move(p));
    } catch (const json::exception &e) {
      throw ValidationError("pairs line " + std::to_string(line_no) + ": " +
                            e.what());
    }
  }
  return pairs;
}

std::vector<TextPair> ToTextPairs(const std::vector<FusionPair> &pairs) {
  std::vector<TextPair> out;
  out.reserve(pairs.size());
  for (const FusionPair &p : pairs) out.push_back({p.source, p.target});
  return out;
}

}  // namespace d2t
