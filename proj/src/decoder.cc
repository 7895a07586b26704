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

#include "d2t/decoder.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "d2t/editing.h"
#include "d2t/errors.h"
#include "d2t/scoring.h"
#include "json.hpp"

namespace d2t {

namespace {

using json = nlohmann::json;

json BeamToJson(const std::vector<Hypothesis> &beam) {
  json out = json::array();
  for (const Hypothesis &h : beam) {
    out.push_back({{"text", h.text}, {"score", h.backend_score}});
  }
  return out;
}

std::vector<Hypothesis> BeamFromJson(const json &beam) {
  std::vector<Hypothesis> out;
  for (const json &h : beam) {
    out.push_back({h.at("text").get<std::string>(),
                   h.at("score").get<double>()});
  }
  return out;
}

FusionContext MakeContext(const std::vector<Triple> &triples,
                          const DecoderConfig &config) {
  FusionContext context;
  for (const Triple &t : triples) {
    for (const std::string *e : {&t.subject, &t.object}) {
      if (std::find(context.entities.begin(), context.entities.end(), *e) ==
          context.entities.end()) {
        context.entities.push_back(*e);
      }
    }
  }
  context.persons = config.persons;
  return context;
}

}  // namespace

void ValidateConfig(const DecoderConfig &config) {
  if (config.beam_size < 1) throw ValidationError("beam_size must be >= 1");
  if (config.max_triples && *config.max_triples == 0) {
    throw ValidationError("max_triples must be >= 1");
  }
}

DecodeResult Generate(const Example &example, const TemplateStore &store,
                      const Scorer &scorer, const FusionModel &fuser,
                      const Checker &checker, const DecoderConfig &config) {
  ValidateConfig(config);
  if (example.triples.empty()) {
    throw ValidationError("example '" + example.id + "': empty triple set");
  }
  std::vector<Triple> triples = example.triples;
  if (config.ordering) triples = config.ordering(std::move(triples));
  if (config.max_triples && triples.size() > *config.max_triples) {
    triples.resize(*config.max_triples);
  }
  const FusionContext context = MakeContext(triples, config);

  DecodeResult result;
  auto new_step = [&](int step) {
    StepTrace trace;
    trace.example_id = example.id;
    trace.step = step;
    trace.fuser = fuser.name();
    trace.scorer = scorer.name();
    trace.checker = checker.name();
    return trace;
  };

  // Step 0.
  size_t next = 1;
  StepTrace first = new_step(0);
  Lexicalization lex;
  if (config.pair_start && triples.size() >= 2 &&
      triples[0].subject == triples[1].subject &&
      store.Contains({triples[0].predicate, triples[1].predicate})) {
    lex = SelectLexicalization(store, std::span(triples).first(2), scorer);
    first.triple_indices = {0, 1};
    next = 2;
  } else {
    lex = SelectLexicalization(store, std::span(triples).first(1), scorer);
    first.triple_indices = {0};
  }
  first.lexicalization = lex.text;
  first.input = lex.text;
  first.chosen = lex.text;
  std::string current = lex.text;
  result.steps.push_back(std::move(first));

  for (size_t i = next; i < triples.size(); ++i) {
    StepTrace step = new_step(static_cast<int>(result.steps.size()));
    step.triple_indices = {static_cast<int>(i)};
    step.lexicalization =
        SelectLexicalization(store, std::span(triples).subspan(i, 1), scorer)
            .text;
    step.previous = current;
    step.input = current + " " + step.lexicalization;
    step.beam_before = fuser.Fuse(step.input, config.beam_size, context);

    std::span<const Triple> covered(triples.data(), i + 1);
    std::vector<std::string> survivors;
    for (const Hypothesis &h : step.beam_before) {
      if (checker.Check(h.text, covered).passed()) survivors.push_back(h.text);
    }

    if (survivors.empty()) {
      step.fallback = true;
      step.chosen = step.input;
    } else {
      std::vector<double> scores = scorer.LogScores(survivors);
      size_t best = 0;
      for (size_t k = 0; k < survivors.size(); ++k) {
        step.beam_after.push_back({survivors[k], std::exp(scores[k])});
        if (k == 0) continue;
        if (scores[k] > scores[best]) {
          best = k;
        } else if (scores[k] == scores[best]) {
          size_t len_k = Words(survivors[k]).size();
          size_t len_b = Words(survivors[best]).size();
          if (len_k < len_b ||
              (len_k == len_b && survivors[k] < survivors[best])) {
            best = k;
          }
        }
      }
      step.chosen = survivors[best];
    }
    current = step.chosen;
    result.steps.push_back(std::move(step));
  }
  result.text = current;
  return result;
}

double FallbackRate(std::span<const StepTrace> steps) {
  size_t eligible = 0;
  size_t fallbacks = 0;
  for (const StepTrace &s : steps) {
    if (s.step < 1) continue;
    ++eligible;
    if (s.fallback) ++fallbacks;
  }
  if (eligible == 0) return 0.0;
  return static_cast<double>(fallbacks) / static_cast<double>(eligible);
}

void WriteTrace(const StepTrace &step, std::ostream &out) {
  json obj = {{"example_id", step.example_id},
              {"step", step.step},
              {"triples", step.triple_indices},
              {"lexicalization", step.lexicalization},
              {"previous", step.previous},
              {"input", step.input},
              {"beam_before", BeamToJson(step.beam_before)},
              {"beam_after", BeamToJson(step.beam_after)},
              {"chosen", step.chosen},
              {"fallback", step.fallback},
              {"fuser", step.fuser},
              {"scorer", step.scorer},
              {"checker", step.checker}};
  out << obj.dump() << '\n';
}

std::vector<StepTrace> ReadTrace(std::istream &in) {
  std::vector<StepTrace> steps;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    try {
      json obj = json::parse(line);
      StepTrace s;
      s.example_id = obj.at("example_id").get<std::string>();
      s.step = obj.at("step").get<int>();
      s.triple_indices = obj.value("triples", std::vector<int>{});
      s.lexicalization = obj.at("lexicalization").get<std::string>();
      s.previous = obj.value("previous", std::string());
      s.input = obj.value("input", s.lexicalization);
      s.beam_before = BeamFromJson(obj.value("beam_before", json::array()));
      s.beam_after = BeamFromJson(obj.value("beam_after", json::array()));
      s.chosen = obj.at("chosen").get<std::string>();
      s.fallback = obj.at("fallback").get<bool>();
      s.fuser = obj.value("fuser", std::string());
      s.scorer = obj.value("scorer", std::string());
      s.checker = obj.value("checker", std::string());
      steps.push_back(std::move(s));
    } catch (const json::exception &e) {
      throw ValidationError("trace line " + std::to_string(line_no) + ": " +
                            e.what());
    }
  }
  return steps;
}

}  // namespace d2t
