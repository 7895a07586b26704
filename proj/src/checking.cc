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

#include "d2t/checking.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "d2t/errors.h"
#include "json.hpp"

namespace d2t {

namespace {

constexpr std::string_view kValueToken = "{value}";

std::string EscapeRegex(std::string_view text) {
  static constexpr std::string_view kSpecial = R"(\^$.|?*+()[]{}/)";
  std::string out;
  for (char c : text) {
    if (kSpecial.find(c) != std::string_view::npos) out += '\\';
    out += c;
  }
  return out;
}

std::regex Compile(const std::string &pattern) {
  try {
    return std::regex(pattern, std::regex::ECMAScript | std::regex::icase);
  } catch (const std::regex_error &e) {
    throw ValidationError("bad slot pattern '" + pattern + "': " + e.what());
  }
}

bool AnyMatch(const std::vector<std::regex> &patterns, const std::string &text) {
  return std::any_of(patterns.begin(), patterns.end(),
                     [&](const std::regex &re) {
                       return std::regex_search(text, re);
                     });
}

void AddMissing(std::vector<std::string> *missing, const std::string &item) {
  if (std::find(missing->begin(), missing->end(), item) == missing->end()) {
    missing->push_back(item);
  }
}

}  // namespace

std::string ToLowerAscii(std::string_view text) {
  std::string out(text);
  for (char &c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

CheckResult CheckEntities(std::string_view text,
                          std::span<const Triple> triples) {
  const std::string haystack = ToLowerAscii(text);
  CheckResult result;
  for (const Triple &t : triples) {
    for (const std::string *entity : {&t.subject, &t.object}) {
      if (haystack.find(ToLowerAscii(*entity)) == std::string::npos) {
        AddMissing(&result.missing, *entity);
      }
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Slot patterns

SlotPatternTable::SlotPatternTable(std::vector<SlotPattern> entries) {
  for (SlotPattern &entry : entries) {
    if (entry.slot.empty() || entry.value.empty()) {
      throw ValidationError("slot pattern entry with empty slot or value");
    }
    if (entry.patterns.empty()) {
      throw ValidationError("slot pattern " + entry.slot + "=" + entry.value +
                            " has no patterns");
    }
    if (entry.value == "*") {
      for (const std::string &p : entry.patterns) {
        std::string probe = p;
        for (size_t pos = probe.find(kValueToken); pos != std::string::npos;
             pos = probe.find(kValueToken, pos)) {
          probe.replace(pos, kValueToken.size(), "x");
        }
        Compile(probe);
      }
      auto &list = wildcard_[entry.slot];
      list.insert(list.end(), entry.patterns.begin(), entry.patterns.end());
      continue;
    }
    auto &list = exact_[{entry.slot, ToLowerAscii(entry.value)}];
    for (const std::string &p : entry.patterns) list.push_back(Compile(p));
  }
}

std::optional<bool> SlotPatternTable::Matches(const std::string &slot,
                                              const std::string &value,
                                              std::string_view text) const {
  const std::string subject(text);
  auto it = exact_.find({slot, ToLowerAscii(value)});
  if (it != exact_.end()) return AnyMatch(it->second, subject);
  auto wc = wildcard_.find(slot);
  if (wc == wildcard_.end()) return std::nullopt;
  const std::string escaped = EscapeRegex(value);
  std::vector<std::regex> compiled;
  for (std::string p : wc->second) {
    for (size_t pos = p.find(kValueToken); pos != std::string::npos;
         pos = p.find(kValueToken, pos + escaped.size())) {
      p.replace(pos, kValueToken.size(), escaped);
    }
    compiled.push_back(Compile(p));
  }
  return AnyMatch(compiled, subject);
}

SlotPatternTable ReadSlotPatterns(std::istream &in) {
  std::string body;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header && !line.empty() && line[0] == '#') continue;
    header = false;
    body += line;
    body += '\n';
  }
  std::vector<SlotPattern> entries;
  try {
    nlohmann::json doc = nlohmann::json::parse(body);
    if (!doc.is_array()) {
      throw ValidationError("slot pattern file: expected a JSON array");
    }
    for (const auto &entry : doc) {
      entries.push_back({entry.at("slot").get<std::string>(),
                         entry.at("value").get<std::string>(),
                         entry.at("patterns").get<std::vector<std::string>>()});
    }
  } catch (const nlohmann::json::exception &e) {
    throw ValidationError(std::string("slot pattern file: ") + e.what());
  }
  return SlotPatternTable(std::move(entries));
}

SlotPatternTable LoadSlotPatterns(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  try {
    return ReadSlotPatterns(in);
  } catch (const ValidationError &e) {
    throw ValidationError(path + ": " + e.what());
  }
}

CheckResult CheckSlots(std::string_view text, std::span<const Triple> triples,
                       const SlotPatternTable &patterns) {
  const std::string haystack = ToLowerAscii(text);
  CheckResult result;
  for (const Triple &t : triples) {
    if (haystack.find(ToLowerAscii(t.subject)) == std::string::npos) {
      AddMissing(&result.missing, t.subject);
    }
    std::optional<bool> ok = patterns.Matches(t.predicate, t.object, text);
    if (!ok) {
      throw ValidationError("no slot pattern for " + t.predicate + "=" +
                            t.object);
    }
    if (!*ok) AddMissing(&result.missing, t.predicate);
  }
  return result;
}

}  // namespace d2t
