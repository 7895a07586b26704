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

#ifndef D2T_EVAL_H_
#define D2T_EVAL_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "d2t/checking.h"
#include "d2t/data.h"
#include "d2t/decoder.h"
#include "d2t/templates.h"
#include "json.hpp"

namespace d2t {

using ReferenceSet = std::vector<std::string>;

// Lowercased Words(text).
std::vector<std::string> MetricTokens(std::string_view text);

// Corpus BLEU-4: clipped n-gram precisions, closest reference length (ties
// to the shorter), brevity penalty, no smoothing. Throws ValidationError on
// a length mismatch or an empty reference set.
double Bleu(std::span<const std::string> hypotheses,
            std::span<const ReferenceSet> references);

inline constexpr double kRougeBeta = 1.2;

// LCS F-measure of one hypothesis against one reference.
double RougeLPair(std::span<const std::string> hypothesis,
                  std::span<const std::string> reference,
                  double beta = kRougeBeta);

// Mean over examples of the best LCS F-measure among the references.
double RougeL(std::span<const std::string> hypotheses,
              std::span<const ReferenceSet> references,
              double beta = kRougeBeta);

struct EvalReport {
  std::optional<double> bleu;
  std::optional<double> rouge_l;
  double entity_error_rate = 0.0;
  // Absent when no traces were supplied.
  std::optional<double> fallback_rate;
  std::optional<double> templates_per_predicate;
  size_t example_count = 0;
  size_t scored_example_count = 0;
  // Whether the run used neural backends for both fusion and scoring.
  bool comparable_to_published = false;
  std::vector<std::string> notes;
};

struct EvalInputs {
  std::vector<std::string> hypotheses;
  Dataset dataset;
  std::optional<std::vector<StepTrace>> traces;
  std::optional<TemplateStore> store;
  const Checker *checker = nullptr;  // entity matching when null
};

// Metrics use only examples that have references; entity errors count every
// example that fails the checker.
EvalReport Report(const EvalInputs &inputs);

nlohmann::json ToJson(const EvalReport &report);

}  // namespace d2t

#endif  // D2T_EVAL_H_
