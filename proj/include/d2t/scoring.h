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

#ifndef D2T_SCORING_H_
#define D2T_SCORING_H_

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace d2t {

// Fluency scorer. The score of a text x_1..x_n is the geometric mean of the
// token conditional probabilities, (prod_i P(x_i | x_1..x_{i-1}))^(1/n).
// Values are carried as logs (the mean log probability) and materialized in
// (0, 1] only at interfaces. Only the n real tokens are scored; there is no
// begin or end-of-text event.
class Scorer {
 public:
  virtual ~Scorer() = default;

  // Mean token log-probability per text, in order. Throws ValidationError
  // ("unscorable") for a text without tokens.
  virtual std::vector<double> LogScores(
      std::span<const std::string> texts) const = 0;

  virtual std::string name() const = 0;
};

// exp(LogScores) for a batch.
std::vector<double> ScoreBatch(const Scorer &scorer,
                               std::span<const std::string> texts);

// A batch of one.
double Score(const Scorer &scorer, std::string_view text);

// exp(mean(log p)). Throws on an empty sequence.
double GeometricMean(std::span<const double> probabilities);
double MeanLog(std::span<const double> log_probabilities);

// Conditional token probabilities for an already tokenized text.
class TokenModel {
 public:
  virtual ~TokenModel() = default;

  // log P(tokens[i] | tokens[0..i-1]) for every i.
  virtual std::vector<double> TokenLogProbs(
      std::span<const std::string> tokens) const = 0;
};

// Scores texts with a TokenModel over Words(text).
class TokenModelScorer : public Scorer {
 public:
  TokenModelScorer(std::shared_ptr<const TokenModel> model, std::string name)
      : model_(std::move(model)), name_(std::move(name)) {}

  std::vector<double> LogScores(
      std::span<const std::string> texts) const override;
  std::string name() const override { return name_; }

 private:
  std::shared_ptr<const TokenModel> model_;
  std::string name_;
};

// Add-k smoothed n-gram model. Each context distributes probability over the
// training vocabulary plus one unknown-token class:
//   P(w | h) = (c(h, w) + k) / (c(h) + k * (|V| + 1))
// Contexts are left-padded with a start symbol that is never predicted.
class NGramModel : public TokenModel {
 public:
  // Throws ValidationError for an empty corpus, order < 1 or k <= 0.
  static NGramModel Train(std::span<const std::string> corpus, int order = 3,
                          double k = 0.1);

  std::vector<double> TokenLogProbs(
      std::span<const std::string> tokens) const override;

  // P(word | context) where context holds the preceding tokens (only the
  // last order-1 are used; missing positions are start symbols).
  double Probability(std::span<const std::string> context,
                     const std::string &word) const;

  int order() const { return order_; }
  double k() const { return k_; }
  size_t vocabulary_size() const { return vocabulary_.size(); }

 private:
  NGramModel(int order, double k) : order_(order), k_(k) {}

  std::string ContextKey(std::span<const std::string> context) const;

  int order_;
  double k_;
  std::unordered_map<std::string, int> vocabulary_;
  // context key -> (total count, word -> count)
  struct ContextCounts {
    long total = 0;
    std::unordered_map<std::string, long> next;
  };
  std::unordered_map<std::string, ContextCounts> counts_;
};

// The native scorer: a trained NGramModel behind TokenModelScorer.
std::unique_ptr<Scorer> MakeNGramScorer(std::span<const std::string> corpus,
                                        int order = 3, double k = 0.1);

// Client for POST {endpoint}/score, request {"texts": [...]}, response
// {"scores": [...]} with geometric-mean values in (0, 1]. A fresh
// connection is used per batch, so concurrent calls never share state.
class RemoteScorer : public Scorer {
 public:
  explicit RemoteScorer(std::string endpoint, double timeout_seconds = 60.0)
      : endpoint_(std::move(endpoint)), timeout_seconds_(timeout_seconds) {}

  std::vector<double> LogScores(
      std::span<const std::string> texts) const override;
  std::string name() const override { return "remote"; }

  // Scores as returned by the server, in (0, 1].
  std::vector<double> RemoteScore(std::span<const std::string> texts) const;

  const std::string &endpoint() const { return endpoint_; }

 private:
  std::string endpoint_;
  double timeout_seconds_;
};

}  // namespace d2t

#endif  // D2T_SCORING_H_
