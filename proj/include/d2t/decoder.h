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

#ifndef D2T_DECODER_H_
#define D2T_DECODER_H_

#include <functional>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "d2t/checking.h"
#include "d2t/data.h"
#include "d2t/fusion.h"
#include "d2t/templates.h"

namespace d2t {

class Scorer;

// One iteration of decoding.
struct StepTrace {
  std::string example_id;
  int step = 0;
  // Triples consumed by this step (two for a pair-template start).
  std::vector<int> triple_indices;
  std::string lexicalization;
  // X_{i-1}; empty at step 0.
  std::string previous;
  // X_{i-1} + " " + lexicalization; the fusion input.
  std::string input;
  std::vector<Hypothesis> beam_before;
  // Hypotheses that passed the checker, with backend_score replaced by the
  // scorer's value in (0, 1].
  std::vector<Hypothesis> beam_after;
  std::string chosen;
  bool fallback = false;
  // Backend names of the run that produced the step.
  std::string fuser;
  std::string scorer;
  std::string checker;

  bool operator==(const StepTrace &) const = default;
};

using TripleOrdering = std::function<std::vector<Triple>(std::vector<Triple>)>;

struct DecoderConfig {
  int beam_size = 10;
  // Use a pair template for (t0, t1) when the store has that ordered key.
  bool pair_start = true;
  std::optional<size_t> max_triples;
  // Entities rendered with "who" by the rule backend.
  std::set<std::string> persons;
  // Identity unless set; triples are never reordered by default.
  TripleOrdering ordering;
};

void ValidateConfig(const DecoderConfig &config);

struct DecodeResult {
  std::string text;
  std::vector<StepTrace> steps;
};

// Lexicalizes t0 (or (t0, t1) with a pair template), then for every further
// triple appends its best lexicalization, fuses, keeps the hypotheses that
// pass the checker against the triples consumed so far and picks the best
// one by scorer value. With no survivor the unfused text is kept (fallback).
// Score ties go to fewer tokens, then lexicographic order.
DecodeResult Generate(const Example &example, const TemplateStore &store,
                      const Scorer &scorer, const FusionModel &fuser,
                      const Checker &checker, const DecoderConfig &config);

// Fallbacks over steps with index >= 1; 0 when there are none.
double FallbackRate(std::span<const StepTrace> steps);

// Trace JSONL: one StepTrace per line.
void WriteTrace(const StepTrace &step, std::ostream &out);
std::vector<StepTrace> ReadTrace(std::istream &in);

}  // namespace d2t

#endif  // D2T_DECODER_H_
