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

#include "d2t/scoring.h"

#include <cmath>
#include <numeric>

#include "d2t/editing.h"
#include "d2t/errors.h"
#include "http_client.h"

namespace d2t {

namespace {

constexpr std::string_view kStartSymbol = "<s>";

}  // namespace

double MeanLog(std::span<const double> log_probabilities) {
  if (log_probabilities.empty()) throw ValidationError("unscorable");
  double sum = std::accumulate(log_probabilities.begin(),
                               log_probabilities.end(), 0.0);
  return sum / static_cast<double>(log_probabilities.size());
}

double GeometricMean(std::span<const double> probabilities) {
  std::vector<double> logs;
  logs.reserve(probabilities.size());
  for (double p : probabilities) {
    if (!(p > 0.0 && p <= 1.0)) {
      throw ValidationError("probability out of (0, 1]: " + std::to_string(p));
    }
    logs.push_back(std::log(p));
  }
  return std::exp(MeanLog(logs));
}

std::vector<double> ScoreBatch(const Scorer &scorer,
                               std::span<const std::string> texts) {
  std::vector<double> scores = scorer.LogScores(texts);
  for (double &s : scores) s = std::exp(s);
  return scores;
}

double Score(const Scorer &scorer, std::string_view text) {
  std::string one(text);
  return ScoreBatch(scorer, std::span<const std::string>(&one, 1)).front();
}

std::vector<double> TokenModelScorer::LogScores(
    std::span<const std::string> texts) const {
  std::vector<double> out;
  out.reserve(texts.size());
  for (const std::string &text : texts) {
    std::vector<std::string> words = Words(text);
    if (words.empty()) throw ValidationError("unscorable: empty text");
    out.push_back(MeanLog(model_->TokenLogProbs(words)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// NGramModel

NGramModel NGramModel::Train(std::span<const std::string> corpus, int order,
                             double k) {
  if (corpus.empty()) throw ValidationError("n-gram corpus is empty");
  if (order < 1) throw ValidationError("n-gram order must be >= 1");
  if (!(k > 0.0)) throw ValidationError("smoothing constant k must be > 0");

  NGramModel model(order, k);
  for (const std::string &text : corpus) {
    std::vector<std::string> words = Words(text);
    for (size_t i = 0; i < words.size(); ++i) {
      model.vocabulary_.emplace(words[i], 0).first->second++;
      std::span<const std::string> context(words.data(), i);
      ContextCounts &cc = model.counts_[model.ContextKey(context)];
      ++cc.total;
      ++cc.next[words[i]];
    }
  }
  return model;
}

std::string NGramModel::ContextKey(
    std::span<const std::string> context) const {
  std::string key;
  const size_t want = static_cast<size_t>(order_ - 1);
  for (size_t pos = 0; pos < want; ++pos) {
    // Position pos of the (order-1)-wide window ending at the context end.
    size_t missing = want > context.size() ? want - context.size() : 0;
    if (!key.empty()) key += '\x1f';
    if (pos < missing) {
      key += kStartSymbol;
    } else {
      key += context[context.size() - (want - pos)];
    }
  }
  return key;
}

double NGramModel::Probability(std::span<const std::string> context,
                               const std::string &word) const {
  const double classes = static_cast<double>(vocabulary_.size() + 1);
  auto it = counts_.find(ContextKey(context));
  double total = 0.0;
  double count = 0.0;
  if (it != counts_.end()) {
    total = static_cast<double>(it->second.total);
    auto w = it->second.next.find(word);
    if (w != it->second.next.end()) count = static_cast<double>(w->second);
  }
  return (count + k_) / (total + k_ * classes);
}

std::vector<double> NGramModel::TokenLogProbs(
    std::span<const std::string> tokens) const {
  std::vector<double> out;
  out.reserve(tokens.size());
  for (size_t i = 0; i < tokens.size(); ++i) {
    out.push_back(std::log(Probability(tokens.subspan(0, i), tokens[i])));
  }
  return out;
}

std::unique_ptr<Scorer> MakeNGramScorer(std::span<const std::string> corpus,
                                        int order, double k) {
  auto model =
      std::make_shared<const NGramModel>(NGramModel::Train(corpus, order, k));
  return std::make_unique<TokenModelScorer>(std::move(model), "ngram");
}

// ---------------------------------------------------------------------------
// RemoteScorer

std::vector<double> RemoteScorer::RemoteScore(
    std::span<const std::string> texts) const {
  if (texts.empty()) return {};
  nlohmann::json request = {
      {"texts", std::vector<std::string>(texts.begin(), texts.end())}};
  nlohmann::json reply =
      internal::PostJson(endpoint_, "/score", request, timeout_seconds_);
  if (!reply.is_object() || !reply.contains("scores") ||
      !reply["scores"].is_array()) {
    throw ProtocolError(endpoint_, "/score reply lacks a \"scores\" array");
  }
  const nlohmann::json &scores = reply["scores"];
  if (scores.size() != texts.size()) {
    throw ProtocolError(endpoint_, "/score returned " +
                                       std::to_string(scores.size()) +
                                       " scores for " +
                                       std::to_string(texts.size()) + " texts");
  }
  std::vector<double> out;
  out.reserve(scores.size());
  for (const nlohmann::json &s : scores) {
    if (!s.is_number()) throw ProtocolError(endpoint_, "non-numeric score");
    double v = s.get<double>();
    if (!(v > 0.0 && v <= 1.0)) {
      throw ProtocolError(endpoint_,
                          "score out of (0, 1]: " + std::to_string(v));
    }
    out.push_back(v);
  }
  return out;
}

std::vector<double> RemoteScorer::LogScores(
    std::span<const std::string> texts) const {
  for (const std::string &text : texts) {
    if (Words(text).empty()) throw ValidationError("unscorable: empty text");
  }
  std::vector<double> scores = RemoteScore(texts);
  for (double &s : scores) s = std::log(s);
  return scores;
}

}  // namespace d2t
