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

#ifndef D2T_DATA_H_
#define D2T_DATA_H_

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace d2t {

// A (subject, predicate, object) fact. All fields are non-empty.
struct Triple {
  std::string subject;
  std::string predicate;
  std::string object;

  auto operator<=>(const Triple &) const = default;
};

// Throws ValidationError if any field is empty after trimming.
Triple MakeTriple(std::string_view subject, std::string_view predicate,
                  std::string_view object);

std::string ToString(const Triple &triple);

// An ordered triple set plus its reference texts. Triples keep the order in
// which they were imported; decoding consumes them in that order.
struct Example {
  std::string id;
  std::vector<Triple> triples;
  std::vector<std::string> references;

  bool operator==(const Example &) const = default;
};

// Throws ValidationError on an empty or duplicated triple set.
void ValidateExample(const Example &example);

enum class Split { kTrain, kDev, kTest };
enum class Source { kWebNlg, kE2e, kJsonl, kDiscoFuse };

std::string_view SplitName(Split split);
Split ParseSplit(std::string_view name);
std::string_view SourceName(Source source);

struct Dataset {
  std::vector<Example> examples;
  Split split = Split::kTrain;
  Source source = Source::kJsonl;

  bool operator==(const Dataset &) const = default;
};

// Entity normalization applied once at import: underscores become spaces,
// whitespace runs collapse, surrounding straight double quotes are dropped.
std::string NormalizeEntity(std::string_view raw);

// Strips leading and trailing ASCII whitespace.
std::string_view Trim(std::string_view text);

// JSONL interchange: {"id": str, "triples": [{"s","p","o"}], "refs": [str]}.
Dataset LoadJsonl(const std::string &path);
Dataset ReadJsonl(std::istream &in);
void WriteJsonl(const Dataset &dataset, std::ostream &out);

// E2E-style CSV with (mr, ref) columns. The name slot becomes the subject of
// one triple per remaining slot; references sharing an MR are grouped.
Dataset ImportE2e(const std::string &path);
Dataset ReadE2eCsv(std::istream &in);

// Parses "name[Giraffe], eatType[pub]" into (slot, value) items.
std::vector<std::pair<std::string, std::string>> ParseMeaningRepresentation(
    std::string_view mr);

// Enriched WebNLG XML. Entries without a modified triple set are skipped
// with a warning on stderr.
Dataset ImportWebNlg(const std::string &path);
Dataset ReadWebNlgXml(std::istream &in, int *skipped = nullptr);

// Dispatches on extension: .xml (WebNLG), .csv (E2E), anything else JSONL.
Dataset LoadDataset(const std::string &path);

}  // namespace d2t

#endif  // D2T_DATA_H_
