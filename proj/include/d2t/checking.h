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

#ifndef D2T_CHECKING_H_
#define D2T_CHECKING_H_

#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "d2t/data.h"

namespace d2t {

struct CheckResult {
  // passed() is equivalent to missing.empty().
  std::vector<std::string> missing;

  bool passed() const { return missing.empty(); }
};

// ASCII-lowercased copy. Non-ASCII bytes are left untouched.
std::string ToLowerAscii(std::string_view text);

// Every subject and object must occur in the text as a case-insensitive
// substring. Each absent entity is listed once, in triple order.
CheckResult CheckEntities(std::string_view text,
                          std::span<const Triple> triples);

// Surface patterns certifying one (slot, value). A value of "*" matches any
// value; the token {value} inside a "*" pattern stands for the escaped value.
struct SlotPattern {
  std::string slot;
  std::string value;
  std::vector<std::string> patterns;
};

// Compiled, case-insensitive slot patterns (ECMAScript dialect).
class SlotPatternTable {
 public:
  SlotPatternTable() = default;
  explicit SlotPatternTable(std::vector<SlotPattern> entries);

  // Exact (slot, value) entry first, with values compared
  // case-insensitively, then the (slot, "*") entry. nullopt when neither
  // exists; otherwise whether any pattern matches the text.
  std::optional<bool> Matches(const std::string &slot,
                              const std::string &value,
                              std::string_view text) const;

  size_t size() const { return exact_.size() + wildcard_.size(); }

 private:
  std::map<std::pair<std::string, std::string>, std::vector<std::regex>>
      exact_;
  std::map<std::string, std::vector<std::string>> wildcard_;
};

// File format: optional leading '#' comment lines, then a JSON array of
// {"slot": str, "value": str, "patterns": [str, ...]}.
SlotPatternTable ReadSlotPatterns(std::istream &in);
SlotPatternTable LoadSlotPatterns(const std::string &path);

// Subjects are checked by substring; each (predicate, object) must match one
// of its patterns. Throws ValidationError when the table has no entry for a
// (slot, value).
CheckResult CheckSlots(std::string_view text, std::span<const Triple> triples,
                       const SlotPatternTable &patterns);

// The decoder's beam filter.
class Checker {
 public:
  virtual ~Checker() = default;
  virtual CheckResult Check(std::string_view text,
                            std::span<const Triple> triples) const = 0;
  virtual std::string name() const = 0;
};

class EntityChecker : public Checker {
 public:
  CheckResult Check(std::string_view text,
                    std::span<const Triple> triples) const override {
    return CheckEntities(text, triples);
  }
  std::string name() const override { return "entities"; }
};

class SlotChecker : public Checker {
 public:
  explicit SlotChecker(std::shared_ptr<const SlotPatternTable> table)
      : table_(std::move(table)) {}

  CheckResult Check(std::string_view text,
                    std::span<const Triple> triples) const override {
    return CheckSlots(text, triples, *table_);
  }
  std::string name() const override { return "slots"; }

 private:
  std::shared_ptr<const SlotPatternTable> table_;
};

}  // namespace d2t

#endif  // D2T_CHECKING_H_
