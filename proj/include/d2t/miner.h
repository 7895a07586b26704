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

#ifndef D2T_MINER_H_
#define D2T_MINER_H_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "d2t/data.h"
#include "d2t/editing.h"
#include "d2t/templates.h"

namespace d2t {

class Scorer;

// Provenance of a mined pair. Empty ids for corpus rows without examples.
struct PairMeta {
  std::string source_id;
  std::string target_id;
  Triple extra;
  int source_ref = -1;
  int target_ref = -1;
  // DiscoFuse discourse type, when the pair came from that corpus.
  std::string discourse_type;

  bool operator==(const PairMeta &) const = default;
};

// source = a reference of X, a space, then lex(t); target = a reference of
// X' where X' = X plus the extra triple t.
struct FusionPair {
  std::string source;
  std::string target;
  PairMeta meta;

  bool operator==(const FusionPair &) const = default;
};

// How references of X and X' are combined:
//   kBest     best-scored source reference x best-scored target reference
//   kBestTgt  every source reference x best-scored target reference
//   kAll      every source reference x every target reference
enum class ReferenceStrategy { kBest, kBestTgt, kAll };

std::string_view StrategyName(ReferenceStrategy strategy);
ReferenceStrategy ParseStrategy(std::string_view name);

// For every ordered pair (X, X') with |X'| = |X| + 1 and X's triples all in
// X', emits the strategy's reference combinations. Examples without
// references are skipped. The result is ordered by (X.id, X'.id, source
// reference index, target reference index) and deduplicated on
// (source, target), keeping the first occurrence.
std::vector<FusionPair> MinePairs(const Dataset &dataset,
                                  const TemplateStore &store,
                                  const Scorer &scorer,
                                  ReferenceStrategy strategy);

// One row of a DiscoFuse-style table.
struct DiscoFuseRow {
  std::string first;        // incoherent first sentence
  std::string second;       // incoherent second sentence
  std::string fused;        // coherent text
  std::string discourse_type;
  std::string connective;
};

// The 13 DiscoFuse discourse types.
const std::vector<std::string> &DiscourseTypes();

// True if rows of the type are used at all; for the three coordination types
// only the "and" / ", and" connectives qualify.
bool IsSelectedType(std::string_view type);
bool NeedsConnectiveCheck(std::string_view type);
bool KeepDiscoFuseRow(const DiscoFuseRow &row);

struct DiscoFuseResult {
  std::vector<FusionPair> pairs;
  size_t dropped_type = 0;
  size_t dropped_connective = 0;
  size_t dropped_unknown = 0;
};

DiscoFuseResult FilterDiscoFuse(const std::vector<DiscoFuseRow> &rows);

// Tab-separated with a header naming incoherent_first_sentence,
// incoherent_second_sentence, coherent_first_sentence,
// coherent_second_sentence, discourse_type and connective_string. The fused
// text is the coherent sentences joined by a space.
std::vector<DiscoFuseRow> ReadDiscoFuseTsv(std::istream &in);

// {"source": str, "target": str, "meta": {...}} per line.
void WritePairs(const std::vector<FusionPair> &pairs, std::ostream &out);
std::vector<FusionPair> ReadPairs(std::istream &in);
std::vector<TextPair> ToTextPairs(const std::vector<FusionPair> &pairs);

}  // namespace d2t

#endif  // D2T_MINER_H_
