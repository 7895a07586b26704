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

#ifndef D2T_TEMPLATES_H_
#define D2T_TEMPLATES_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "d2t/data.h"

namespace d2t {

class Scorer;

// A predicate, or an ordered predicate pair for two-triple templates.
using TemplateKey = std::vector<std::string>;

enum class TemplateOrigin { kExtracted, kManual, kFallback };

std::string_view OriginName(TemplateOrigin origin);
TemplateOrigin ParseOrigin(std::string_view name);

// Placeholders: <subject> and <object> for single-predicate templates,
// <subject>, <object1> and <object2> for pairs. The fallback additionally
// carries <predicate>.
struct Template {
  TemplateKey key;
  std::string pattern;
  TemplateOrigin origin = TemplateOrigin::kExtracted;
  int64_t frequency = 1;

  size_t arity() const { return key.size(); }
  bool operator==(const Template &) const = default;
};

inline constexpr std::string_view kFallbackPattern =
    "The <predicate> of <subject> is <object>.";

// Throws ValidationError unless every required placeholder occurs exactly
// once and no placeholder of the other arity is present.
void ValidateTemplate(const Template &tmpl);

std::string KeyToString(const TemplateKey &key);

// Predicate-keyed template lists plus the universal fallback. Lists are kept
// ordered by frequency (descending), then pattern.
class TemplateStore {
 public:
  TemplateStore();

  // Adds a template; an identical (key, pattern) entry absorbs its frequency.
  void Add(Template tmpl);
  void Merge(const TemplateStore &other);

  // Templates stored under key; empty if none.
  std::span<const Template> Find(const TemplateKey &key) const;
  bool Contains(const TemplateKey &key) const;

  // Templates usable for key: the stored list, or the fallback for an unseen
  // single predicate. Empty for an unseen pair.
  std::vector<Template> Candidates(const TemplateKey &key) const;

  const Template &fallback() const { return fallback_; }
  const std::map<TemplateKey, std::vector<Template>> &entries() const {
    return entries_;
  }
  size_t template_count() const;

 private:
  std::map<TemplateKey, std::vector<Template>> entries_;
  Template fallback_;
};

// Single-triple examples whose reference contains both entities (case
// sensitive) yield "<subject>/<object>" templates. The longer entity is
// replaced first; only first occurrences are replaced.
TemplateStore ExtractSingleTemplates(const Dataset &dataset);

// Two-triple shared-subject examples yield templates keyed by the ordered
// predicate pair, <object1>/<object2> bound to the first/second triple.
TemplateStore ExtractPairTemplates(const Dataset &dataset);

// Keeps only templates whose (key, pattern) also appears in `allowlist`.
TemplateStore FilterByAllowlist(const TemplateStore &store,
                                const TemplateStore &allowlist);

// Replaces placeholders verbatim. Throws ValidationError on an arity
// mismatch or, for pairs, differing subjects.
std::string Fill(const Template &tmpl, std::span<const Triple> triples);

struct Lexicalization {
  std::string text;
  Template source;
  double log_score = 0.0;
};

// The scorer's best filled candidate for the triples' key. Ties go to the
// more frequent template, then the lexicographically smaller pattern.
Lexicalization SelectLexicalization(const TemplateStore &store,
                                    std::span<const Triple> triples,
                                    const Scorer &scorer);

// Mean number of templates per stored key. The fallback is not counted.
double TemplatesPerPredicate(const TemplateStore &store);

// JSON: [{"key": str | [str, str], "pattern": str, "origin": str,
//         "frequency": int (optional)}]
TemplateStore ReadTemplates(std::istream &in);
void WriteTemplates(const TemplateStore &store, std::ostream &out);
TemplateStore LoadTemplates(std::span<const std::string> paths);

}  // namespace d2t

#endif  // D2T_TEMPLATES_H_
