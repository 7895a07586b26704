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

#ifndef D2T_FUSION_H_
#define D2T_FUSION_H_

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace d2t {

// A fused candidate. backend_score orders the beam before rescoring and is
// not compared across backends.
struct Hypothesis {
  std::string text;
  double backend_score = 0.0;

  bool operator==(const Hypothesis &) const = default;
};

// What the decoder knows about the current example.
struct FusionContext {
  // Entity strings (subjects and objects) of the example.
  std::vector<std::string> entities;
  // Entities referred to with "who" rather than "which".
  std::set<std::string> persons;
};

// Produces at most beam_size hypotheses, ordered by backend_score
// descending.
class FusionModel {
 public:
  virtual ~FusionModel() = default;
  virtual std::vector<Hypothesis> Fuse(std::string_view text, int beam_size,
                                       const FusionContext &context) const = 0;
  virtual std::string name() const = 0;
};

// Returns the input unchanged. Decoding with it yields the template
// concatenation baseline.
class IdentityFusion : public FusionModel {
 public:
  std::vector<Hypothesis> Fuse(std::string_view text, int beam_size,
                               const FusionContext &context) const override;
  std::string name() const override { return "identity"; }
};

// Deterministic rewrites of the last two sentences:
//   coordination  "A x. A y."            -> "A x, and y."
//   relative      "A x. A y."            -> "A, which y, x."  (who for persons)
//   apposition    "... B .... B is z."   -> "... B, z, ...."
// Subjects are recognized by matching the known entity strings at the start
// of a sentence. The unfused input is always the last hypothesis.
class RuleFusion : public FusionModel {
 public:
  std::vector<Hypothesis> Fuse(std::string_view text, int beam_size,
                               const FusionContext &context) const override;
  std::string name() const override { return "rules"; }
};

// Words the rule backend may add beyond the input's own.
inline const std::set<std::string> &RuleConnectives() {
  static const std::set<std::string> kWords = {",", "and", "who", "which"};
  return kWords;
}

// Splits on sentence-final . ! ? followed by whitespace, never inside a
// known entity occurrence.
std::vector<std::string> SplitSentences(std::string_view text,
                                        const std::vector<std::string> &entities);

// Client for POST {endpoint}/fuse, request {"text": str, "beam_size": int},
// response {"hypotheses": [{"text": str, "score": float}, ...]}.
class RemoteFusion : public FusionModel {
 public:
  explicit RemoteFusion(std::string endpoint, double timeout_seconds = 120.0)
      : endpoint_(std::move(endpoint)), timeout_seconds_(timeout_seconds) {}

  std::vector<Hypothesis> Fuse(std::string_view text, int beam_size,
                               const FusionContext &context) const override;
  std::string name() const override { return "remote"; }

  const std::string &endpoint() const { return endpoint_; }

 private:
  std::string endpoint_;
  double timeout_seconds_;
};

}  // namespace d2t

#endif  // D2T_FUSION_H_
