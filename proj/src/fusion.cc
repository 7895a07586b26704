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

#include "d2t/fusion.h"

#include <algorithm>

#include "d2t/data.h"
#include "d2t/errors.h"
#include "http_client.h"

namespace d2t {

namespace {

bool IsSentenceEnd(char c) { return c == '.' || c == '!' || c == '?'; }

bool IsSpaceChar(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

void CheckRequest(std::string_view text, int beam_size) {
  if (Trim(text).empty()) throw ValidationError("empty input");
  if (beam_size < 1) throw ValidationError("beam_size must be >= 1");
}

// A sentence without its final punctuation mark.
struct Sentence {
  std::string body;
  std::string end;
};

Sentence Parse(std::string_view sentence) {
  std::string_view s = Trim(sentence);
  if (!s.empty() && IsSentenceEnd(s.back())) {
    return {std::string(Trim(s.substr(0, s.size() - 1))),
            std::string(1, s.back())};
  }
  return {std::string(s), ""};
}

bool WordBoundaryAfter(std::string_view text, size_t pos) {
  return pos >= text.size() || IsSpaceChar(text[pos]) || text[pos] == ',';
}

bool WordBoundaryBefore(std::string_view text, size_t pos) {
  return pos == 0 || IsSpaceChar(text[pos - 1]);
}

// The longest known entity the body starts with.
std::string LeadingSubject(std::string_view body,
                           const std::vector<std::string> &entities) {
  std::string best;
  for (const std::string &e : entities) {
    if (e.size() <= best.size() || e.size() > body.size()) continue;
    if (body.compare(0, e.size(), e) == 0 && WordBoundaryAfter(body, e.size())) {
      best = e;
    }
  }
  return best;
}

size_t FindWord(std::string_view text, std::string_view word) {
  for (size_t pos = text.find(word); pos != std::string_view::npos;
       pos = text.find(word, pos + 1)) {
    if (WordBoundaryBefore(text, pos) &&
        WordBoundaryAfter(text, pos + word.size())) {
      return pos;
    }
  }
  return std::string_view::npos;
}

bool StartsWithWord(std::string_view text) {
  return !text.empty() && text.front() != ',' && !IsSentenceEnd(text.front());
}

std::string RelativePronoun(const std::string &subject,
                            const FusionContext &context) {
  return context.persons.count(subject) ? "who" : "which";
}

}  // namespace

std::vector<std::string> SplitSentences(
    std::string_view text, const std::vector<std::string> &entities) {
  std::vector<bool> covered(text.size(), false);
  for (const std::string &e : entities) {
    if (e.empty()) continue;
    for (size_t pos = text.find(e); pos != std::string_view::npos;
         pos = text.find(e, pos + 1)) {
      std::fill(covered.begin() + static_cast<long>(pos),
                covered.begin() + static_cast<long>(pos + e.size()), true);
    }
  }
  std::vector<std::string> sentences;
  size_t start = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    if (!IsSentenceEnd(text[i])) continue;
    bool at_end = i + 1 == text.size();
    if (!at_end && !IsSpaceChar(text[i + 1])) continue;
    if (covered[i] && !at_end) continue;
    std::string_view s = Trim(text.substr(start, i + 1 - start));
    if (!s.empty()) sentences.emplace_back(s);
    start = i + 1;
  }
  std::string_view rest = Trim(text.substr(std::min(start, text.size())));
  if (!rest.empty()) sentences.emplace_back(rest);
  return sentences;
}

std::vector<Hypothesis> IdentityFusion::Fuse(std::string_view text,
                                             int beam_size,
                                             const FusionContext &) const {
  CheckRequest(text, beam_size);
  return {{std::string(text), 0.0}};
}

std::vector<Hypothesis> RuleFusion::Fuse(std::string_view text, int beam_size,
                                         const FusionContext &context) const {
  CheckRequest(text, beam_size);
  std::vector<Hypothesis> out;
  auto add = [&](std::string candidate, double score) {
    for (const Hypothesis &h : out) {
      if (h.text == candidate) return;
    }
    out.push_back({std::move(candidate), score});
  };

  std::vector<std::string> sentences = SplitSentences(text, context.entities);
  if (sentences.size() >= 2) {
    std::string prefix;
    for (size_t i = 0; i + 2 < sentences.size(); ++i) {
      prefix += sentences[i];
      prefix += ' ';
    }
    Sentence first = Parse(sentences[sentences.size() - 2]);
    Sentence second = Parse(sentences.back());
    std::string subj1 = LeadingSubject(first.body, context.entities);
    std::string subj2 = LeadingSubject(second.body, context.entities);
    std::string rest1 =
        subj1.empty() ? "" : std::string(first.body.substr(subj1.size()));
    std::string rest2 =
        subj2.empty() ? "" : std::string(Trim(second.body.substr(subj2.size())));
    const std::string &end2 = second.end.empty() ? first.end : second.end;

    if (!subj1.empty() && subj1 == subj2 && StartsWithWord(rest2) &&
        !Trim(rest1).empty()) {
      // Subject coordination.
      add(prefix + first.body + ", and " + rest2 + end2, 3.0);
      // Relative clause after the shared subject.
      std::string rel = subj1 + ", " + RelativePronoun(subj1, context) + " " +
                        rest2 + (rest1.front() == ',' ? "" : ",") + rest1 +
                        first.end;
      add(prefix + rel, 2.0);
    }

    // Apposition: "B is NP." folded in after B's mention in the first
    // sentence.
    if (!subj2.empty() && rest2.rfind("is ", 0) == 0) {
      std::string np(Trim(rest2.substr(3)));
      size_t pos = FindWord(first.body, subj2);
      if (!np.empty() && pos != std::string::npos) {
        size_t after = pos + subj2.size();
        std::string fused = first.body.substr(0, after) + ", " + np;
        if (after < first.body.size()) {
          if (first.body[after] != ',') fused += ',';
          fused += first.body.substr(after);
        }
        add(prefix + fused + first.end, 1.0);
      }
    }
  }
  add(std::string(text), 0.0);
  std::stable_sort(out.begin(), out.end(),
                   [](const Hypothesis &a, const Hypothesis &b) {
                     return a.backend_score > b.backend_score;
                   });
  if (out.size() > static_cast<size_t>(beam_size)) out.resize(beam_size);
  return out;
}

std::vector<Hypothesis> RemoteFusion::Fuse(std::string_view text,
                                           int beam_size,
                                           const FusionContext &) const {
  CheckRequest(text, beam_size);
  nlohmann::json request = {{"text", std::string(text)},
                            {"beam_size", beam_size}};
  nlohmann::json reply =
      internal::PostJson(endpoint_, "/fuse", request, timeout_seconds_);
  if (!reply.is_object() || !reply.contains("hypotheses") ||
      !reply["hypotheses"].is_array()) {
    throw ProtocolError(endpoint_, "/fuse reply lacks a \"hypotheses\" array");
  }
  const nlohmann::json &items = reply["hypotheses"];
  if (items.size() > static_cast<size_t>(beam_size)) {
    throw ProtocolError(endpoint_, "/fuse returned " +
                                       std::to_string(items.size()) +
                                       " hypotheses for beam size " +
                                       std::to_string(beam_size));
  }
  std::vector<Hypothesis> out;
  for (const nlohmann::json &item : items) {
    if (!item.is_object() || !item.contains("text") ||
        !item["text"].is_string() || !item.contains("score") ||
        !item["score"].is_number()) {
      throw ProtocolError(endpoint_, "malformed hypothesis " + item.dump());
    }
    std::string hyp = item["text"].get<std::string>();
    if (Trim(hyp).empty()) {
      throw ProtocolError(endpoint_, "empty hypothesis text");
    }
    out.push_back({std::move(hyp), item["score"].get<double>()});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const Hypothesis &a, const Hypothesis &b) {
                     return a.backend_score > b.backend_score;
                   });
  return out;
}

}  // namespace d2t
