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

#include "d2t/eval.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "d2t/editing.h"
#include "d2t/errors.h"

namespace d2t {

namespace {

using NGramCounts = std::map<std::vector<std::string>, int>;

NGramCounts CountNGrams(std::span<const std::string> tokens, size_t n) {
  NGramCounts counts;
  for (size_t i = 0; i + n <= tokens.size(); ++i) {
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<long>(i),
                                      tokens.begin() + static_cast<long>(i + n))];
  }
  return counts;
}

size_t LcsLength(std::span<const std::string> a,
                 std::span<const std::string> b) {
  std::vector<size_t> prev(b.size() + 1, 0);
  std::vector<size_t> cur(b.size() + 1, 0);
  for (size_t i = 1; i <= a.size(); ++i) {
    for (size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

void CheckShapes(std::span<const std::string> hypotheses,
                 std::span<const ReferenceSet> references) {
  if (hypotheses.size() != references.size()) {
    throw ValidationError("metric input: " + std::to_string(hypotheses.size()) +
                          " hypotheses vs " +
                          std::to_string(references.size()) +
                          " reference sets");
  }
  for (size_t i = 0; i < references.size(); ++i) {
    if (references[i].empty()) {
      throw ValidationError("metric input: empty reference set at " +
                            std::to_string(i));
    }
  }
}

}  // namespace

std::vector<std::string> MetricTokens(std::string_view text) {
  std::vector<std::string> words = Words(text);
  for (std::string &w : words) w = ToLowerAscii(w);
  return words;
}

double Bleu(std::span<const std::string> hypotheses,
            std::span<const ReferenceSet> references) {
  constexpr size_t kOrder = 4;
  CheckShapes(hypotheses, references);
  std::array<double, kOrder> matched{};
  std::array<double, kOrder> total{};
  double hyp_len = 0.0;
  double ref_len = 0.0;

  for (size_t i = 0; i < hypotheses.size(); ++i) {
    std::vector<std::string> hyp = MetricTokens(hypotheses[i]);
    std::vector<std::vector<std::string>> refs;
    for (const std::string &r : references[i]) refs.push_back(MetricTokens(r));

    hyp_len += static_cast<double>(hyp.size());
    size_t closest = refs.front().size();
    for (const auto &r : refs) {
      long d = std::labs(static_cast<long>(r.size()) -
                         static_cast<long>(hyp.size()));
      long best = std::labs(static_cast<long>(closest) -
                            static_cast<long>(hyp.size()));
      if (d < best || (d == best && r.size() < closest)) closest = r.size();
    }
    ref_len += static_cast<double>(closest);

    for (size_t n = 1; n <= kOrder; ++n) {
      NGramCounts hyp_counts = CountNGrams(hyp, n);
      NGramCounts max_ref;
      for (const auto &r : refs) {
        for (const auto &[gram, c] : CountNGrams(r, n)) {
          int &slot = max_ref[gram];
          slot = std::max(slot, c);
        }
      }
      for (const auto &[gram, c] : hyp_counts) {
        auto it = max_ref.find(gram);
        if (it != max_ref.end()) matched[n - 1] += std::min(c, it->second);
        total[n - 1] += c;
      }
    }
  }

  if (hyp_len == 0.0) return 0.0;
  double log_sum = 0.0;
  for (size_t n = 0; n < kOrder; ++n) {
    if (matched[n] == 0.0 || total[n] == 0.0) return 0.0;
    log_sum += std::log(matched[n] / total[n]);
  }
  double bp = hyp_len > ref_len ? 1.0 : std::exp(1.0 - ref_len / hyp_len);
  return bp * std::exp(log_sum / kOrder);
}

double RougeLPair(std::span<const std::string> hypothesis,
                  std::span<const std::string> reference, double beta) {
  if (hypothesis.empty() || reference.empty()) return 0.0;
  double lcs = static_cast<double>(LcsLength(hypothesis, reference));
  if (lcs == 0.0) return 0.0;
  double precision = lcs / static_cast<double>(hypothesis.size());
  double recall = lcs / static_cast<double>(reference.size());
  double b2 = beta * beta;
  return (1.0 + b2) * precision * recall / (recall + b2 * precision);
}

double RougeL(std::span<const std::string> hypotheses,
              std::span<const ReferenceSet> references, double beta) {
  CheckShapes(hypotheses, references);
  if (hypotheses.empty()) return 0.0;
  double sum = 0.0;
  for (size_t i = 0; i < hypotheses.size(); ++i) {
    std::vector<std::string> hyp = MetricTokens(hypotheses[i]);
    double best = 0.0;
    for (const std::string &r : references[i]) {
      best = std::max(best, RougeLPair(hyp, MetricTokens(r), beta));
    }
    sum += best;
  }
  return sum / static_cast<double>(hypotheses.size());
}

EvalReport Report(const EvalInputs &inputs) {
  const auto &examples = inputs.dataset.examples;
  if (inputs.hypotheses.size() != examples.size()) {
    throw ValidationError("evaluate: " +
                          std::to_string(inputs.hypotheses.size()) +
                          " outputs for " + std::to_string(examples.size()) +
                          " examples");
  }
  EvalReport report;
  report.example_count = examples.size();

  EntityChecker default_checker;
  const Checker &checker =
      inputs.checker != nullptr ? *inputs.checker : default_checker;
  size_t errors = 0;
  std::vector<std::string> hyps;
  std::vector<ReferenceSet> refs;
  for (size_t i = 0; i < examples.size(); ++i) {
    if (!checker.Check(inputs.hypotheses[i], examples[i].triples).passed()) {
      ++errors;
    }
    if (!examples[i].references.empty()) {
      hyps.push_back(inputs.hypotheses[i]);
      refs.push_back(examples[i].references);
    }
  }
  if (!examples.empty()) {
    report.entity_error_rate =
        static_cast<double>(errors) / static_cast<double>(examples.size());
  }
  report.scored_example_count = hyps.size();
  if (!hyps.empty()) {
    report.bleu = Bleu(hyps, refs);
    report.rouge_l = RougeL(hyps, refs);
  } else {
    report.notes.push_back("no references: BLEU and ROUGE-L not computed");
  }

  if (inputs.traces) {
    report.fallback_rate = FallbackRate(*inputs.traces);
  } else {
    report.notes.push_back("no traces: fallback_rate not available");
  }
  if (inputs.store) {
    report.templates_per_predicate = TemplatesPerPredicate(*inputs.store);
    report.notes.push_back(
        "templates_per_predicate excludes the fallback template");
  }

  bool neural = inputs.traces.has_value() && !inputs.traces->empty();
  if (neural) {
    for (const StepTrace &s : *inputs.traces) {
      if (s.fuser != "remote" || s.scorer != "remote") {
        neural = false;
        break;
      }
    }
  }
  report.comparable_to_published = neural;
  if (!neural) {
    report.notes.push_back(
        "non-comparable: native backends (or no traces); published fallback "
        "rates and template statistics need the neural fusion model, the "
        "neural language-model scorer and the full datasets");
  }
  report.notes.push_back(
      "metrics use the built-in lowercased tokenizer; values differ from the "
      "official challenge scripts");
  return report;
}

nlohmann::json ToJson(const EvalReport &report) {
  auto opt = [](const std::optional<double> &v) -> nlohmann::json {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  return {{"bleu", opt(report.bleu)},
          {"rouge_l", opt(report.rouge_l)},
          {"entity_error_rate", report.entity_error_rate},
          {"fallback_rate", opt(report.fallback_rate)},
          {"templates_per_predicate", opt(report.templates_per_predicate)},
          {"example_count", report.example_count},
          {"scored_example_count", report.scored_example_count},
          {"comparable_to_published", report.comparable_to_published},
          {"notes", report.notes}};
}

}  // namespace d2t
