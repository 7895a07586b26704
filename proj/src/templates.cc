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

#include "d2t/templates.h"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>

#include "d2t/errors.h"
#include "d2t/scoring.h"
#include "json.hpp"

namespace d2t {

namespace {

using json = nlohmann::json;

constexpr std::string_view kSubject = "<subject>";
constexpr std::string_view kObject = "<object>";
constexpr std::string_view kObject1 = "<object1>";
constexpr std::string_view kObject2 = "<object2>";
constexpr std::string_view kPredicate = "<predicate>";

constexpr std::string_view kPlaceholders[] = {kSubject, kObject, kObject1,
                                              kObject2, kPredicate};

size_t CountOccurrences(std::string_view text, std::string_view needle) {
  size_t count = 0;
  for (size_t pos = text.find(needle); pos != std::string_view::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

bool TemplateLess(const Template &a, const Template &b) {
  if (a.frequency != b.frequency) return a.frequency > b.frequency;
  return a.pattern < b.pattern;
}

// Text split into literal runs and placeholder slots.
struct Segment {
  std::string text;
  bool placeholder = false;
};

// Replaces the first literal occurrence of each entity by its placeholder,
// longest entity first. nullopt if some entity is absent.
std::optional<std::string> Delexicalize(
    const std::string &reference,
    std::vector<std::pair<std::string, std::string_view>> bindings) {
  std::stable_sort(bindings.begin(), bindings.end(),
                   [](const auto &a, const auto &b) {
                     return a.first.size() > b.first.size();
                   });
  std::vector<Segment> segments = {{reference, false}};
  for (const auto &[entity, placeholder] : bindings) {
    bool replaced = false;
    for (size_t i = 0; i < segments.size() && !replaced; ++i) {
      if (segments[i].placeholder) continue;
      size_t pos = segments[i].text.find(entity);
      if (pos == std::string::npos) continue;
      std::string before = segments[i].text.substr(0, pos);
      std::string after = segments[i].text.substr(pos + entity.size());
      segments[i] = {std::string(placeholder), true};
      segments.insert(segments.begin() + static_cast<long>(i) + 1,
                      {after, false});
      segments.insert(segments.begin() + static_cast<long>(i),
                      {before, false});
      replaced = true;
    }
    if (!replaced) return std::nullopt;
  }
  std::string out;
  for (const Segment &s : segments) out += s.text;
  return out;
}

void AddIfValid(TemplateStore *store, Template tmpl) {
  try {
    ValidateTemplate(tmpl);
  } catch (const ValidationError &) {
    // The reference itself contained placeholder-like text.
    return;
  }
  store->Add(std::move(tmpl));
}

}  // namespace

std::string_view OriginName(TemplateOrigin origin) {
  switch (origin) {
    case TemplateOrigin::kExtracted: return "extracted";
    case TemplateOrigin::kManual: return "manual";
    case TemplateOrigin::kFallback: return "fallback";
  }
  return "extracted";
}

TemplateOrigin ParseOrigin(std::string_view name) {
  if (name == "extracted") return TemplateOrigin::kExtracted;
  if (name == "manual") return TemplateOrigin::kManual;
  if (name == "fallback") return TemplateOrigin::kFallback;
  throw ValidationError("unknown template origin '" + std::string(name) + "'");
}

std::string KeyToString(const TemplateKey &key) {
  std::string out;
  for (const std::string &k : key) {
    if (!out.empty()) out += '+';
    out += k;
  }
  return out;
}

void ValidateTemplate(const Template &tmpl) {
  auto fail = [&](const std::string &why) {
    throw ValidationError("template [" + KeyToString(tmpl.key) + "] '" +
                          tmpl.pattern + "': " + why);
  };
  if (tmpl.key.size() != 1 && tmpl.key.size() != 2) {
    fail("key must name one predicate or a predicate pair");
  }
  for (const std::string &k : tmpl.key) {
    if (k.empty()) fail("empty predicate in key");
  }
  std::vector<std::string_view> required;
  std::vector<std::string_view> forbidden;
  if (tmpl.arity() == 1) {
    required = {kSubject, kObject};
    forbidden = {kObject1, kObject2};
  } else {
    required = {kSubject, kObject1, kObject2};
    forbidden = {kObject, kPredicate};
  }
  for (std::string_view p : required) {
    size_t n = CountOccurrences(tmpl.pattern, p);
    if (n != 1) {
      fail("placeholder " + std::string(p) + " occurs " + std::to_string(n) +
           " times");
    }
  }
  for (std::string_view p : forbidden) {
    if (CountOccurrences(tmpl.pattern, p) > 0) {
      fail("placeholder " + std::string(p) + " not allowed here");
    }
  }
  if (CountOccurrences(tmpl.pattern, kPredicate) > 1) {
    fail("placeholder <predicate> occurs more than once");
  }
}

// ---------------------------------------------------------------------------
// TemplateStore

TemplateStore::TemplateStore()
    : fallback_{{"*"}, std::string(kFallbackPattern),
                TemplateOrigin::kFallback, 0} {}

void TemplateStore::Add(Template tmpl) {
  ValidateTemplate(tmpl);
  std::vector<Template> &list = entries_[tmpl.key];
  auto it = std::find_if(list.begin(), list.end(), [&](const Template &t) {
    return t.pattern == tmpl.pattern;
  });
  if (it != list.end()) {
    it->frequency += tmpl.frequency;
  } else {
    list.push_back(std::move(tmpl));
  }
  std::stable_sort(list.begin(), list.end(), TemplateLess);
}

void TemplateStore::Merge(const TemplateStore &other) {
  for (const auto &[key, list] : other.entries_) {
    for (const Template &t : list) Add(t);
  }
}

std::span<const Template> TemplateStore::Find(const TemplateKey &key) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return {};
  return it->second;
}

bool TemplateStore::Contains(const TemplateKey &key) const {
  return entries_.count(key) > 0;
}

std::vector<Template> TemplateStore::Candidates(const TemplateKey &key) const {
  std::span<const Template> found = Find(key);
  if (!found.empty()) return {found.begin(), found.end()};
  if (key.size() == 1) {
    Template fb = fallback_;
    fb.key = key;
    return {fb};
  }
  return {};
}

size_t TemplateStore::template_count() const {
  size_t n = 0;
  for (const auto &[key, list] : entries_) n += list.size();
  return n;
}

// ---------------------------------------------------------------------------
// Extraction

TemplateStore ExtractSingleTemplates(const Dataset &dataset) {
  TemplateStore store;
  for (const Example &example : dataset.examples) {
    if (example.triples.size() != 1) continue;
    const Triple &t = example.triples.front();
    for (const std::string &ref : example.references) {
      auto pattern =
          Delexicalize(ref, {{t.subject, kSubject}, {t.object, kObject}});
      if (!pattern) continue;
      AddIfValid(&store, {{t.predicate}, *pattern,
                          TemplateOrigin::kExtracted, 1});
    }
  }
  return store;
}

TemplateStore ExtractPairTemplates(const Dataset &dataset) {
  TemplateStore store;
  for (const Example &example : dataset.examples) {
    if (example.triples.size() != 2) continue;
    const Triple &a = example.triples[0];
    const Triple &b = example.triples[1];
    if (a.subject != b.subject || a.object == b.object) continue;
    for (const std::string &ref : example.references) {
      auto pattern = Delexicalize(ref, {{a.subject, kSubject},
                                        {a.object, kObject1},
                                        {b.object, kObject2}});
      if (!pattern) continue;
      AddIfValid(&store, {{a.predicate, b.predicate}, *pattern,
                          TemplateOrigin::kExtracted, 1});
    }
  }
  return store;
}

TemplateStore FilterByAllowlist(const TemplateStore &store,
                                const TemplateStore &allowlist) {
  TemplateStore out;
  for (const auto &[key, list] : store.entries()) {
    std::span<const Template> allowed = allowlist.Find(key);
    for (const Template &t : list) {
      bool ok = std::any_of(allowed.begin(), allowed.end(),
                            [&](const Template &a) {
                              return a.pattern == t.pattern;
                            });
      if (ok) out.Add(t);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Filling and selection

std::string Fill(const Template &tmpl, std::span<const Triple> triples) {
  if (triples.size() != tmpl.arity()) {
    throw ValidationError("template [" + KeyToString(tmpl.key) + "] takes " +
                          std::to_string(tmpl.arity()) + " triple(s), got " +
                          std::to_string(triples.size()));
  }
  if (triples.size() == 2 && triples[0].subject != triples[1].subject) {
    throw ValidationError("pair template needs a shared subject, got '" +
                          triples[0].subject + "' and '" +
                          triples[1].subject + "'");
  }
  auto value_of = [&](std::string_view placeholder) -> const std::string * {
    if (placeholder == kSubject) return &triples[0].subject;
    if (placeholder == kPredicate) return &triples[0].predicate;
    if (triples.size() == 1) {
      if (placeholder == kObject) return &triples[0].object;
    } else {
      if (placeholder == kObject1) return &triples[0].object;
      if (placeholder == kObject2) return &triples[1].object;
    }
    return nullptr;
  };

  const std::string &pattern = tmpl.pattern;
  std::string out;
  size_t pos = 0;
  while (pos < pattern.size()) {
    bool matched = false;
    if (pattern[pos] == '<') {
      for (std::string_view p : kPlaceholders) {
        if (pattern.compare(pos, p.size(), p) == 0) {
          if (const std::string *value = value_of(p)) {
            out += *value;
            pos += p.size();
            matched = true;
          }
          break;
        }
      }
    }
    if (!matched) out += pattern[pos++];
  }
  return out;
}

Lexicalization SelectLexicalization(const TemplateStore &store,
                                    std::span<const Triple> triples,
                                    const Scorer &scorer) {
  TemplateKey key;
  for (const Triple &t : triples) key.push_back(t.predicate);
  std::vector<Template> candidates = store.Candidates(key);
  if (candidates.empty()) {
    throw ValidationError("no template for key [" + KeyToString(key) + "]");
  }
  std::vector<std::string> texts;
  texts.reserve(candidates.size());
  for (const Template &t : candidates) texts.push_back(Fill(t, triples));
  std::vector<double> scores = scorer.LogScores(texts);

  size_t best = 0;
  for (size_t i = 1; i < candidates.size(); ++i) {
    if (scores[i] > scores[best]) {
      best = i;
    } else if (scores[i] == scores[best]) {
      const Template &a = candidates[i];
      const Template &b = candidates[best];
      if (a.frequency > b.frequency ||
          (a.frequency == b.frequency && a.pattern < b.pattern)) {
        best = i;
      }
    }
  }
  return {std::move(texts[best]), std::move(candidates[best]), scores[best]};
}

double TemplatesPerPredicate(const TemplateStore &store) {
  if (store.entries().empty()) return 0.0;
  return static_cast<double>(store.template_count()) /
         static_cast<double>(store.entries().size());
}

// ---------------------------------------------------------------------------
// I/O

TemplateStore ReadTemplates(std::istream &in) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception &e) {
    throw ValidationError(std::string("template file: ") + e.what());
  }
  if (!doc.is_array()) throw ValidationError("template file: expected array");
  TemplateStore store;
  size_t index = 0;
  for (const json &entry : doc) {
    try {
      Template t;
      const json &key = entry.at("key");
      if (key.is_string()) {
        t.key = {key.get<std::string>()};
      } else {
        t.key = key.get<std::vector<std::string>>();
      }
      t.pattern = entry.at("pattern").get<std::string>();
      t.origin = ParseOrigin(entry.value("origin", std::string("manual")));
      t.frequency = entry.value("frequency", int64_t{1});
      if (t.origin == TemplateOrigin::kFallback) continue;
      store.Add(std::move(t));
    } catch (const json::exception &e) {
      throw ValidationError("template entry " + std::to_string(index) + ": " +
                            e.what());
    }
    ++index;
  }
  return store;
}

void WriteTemplates(const TemplateStore &store, std::ostream &out) {
  json doc = json::array();
  for (const auto &[key, list] : store.entries()) {
    for (const Template &t : list) {
      json entry;
      if (key.size() == 1) {
        entry["key"] = key.front();
      } else {
        entry["key"] = key;
      }
      entry["pattern"] = t.pattern;
      entry["origin"] = std::string(OriginName(t.origin));
      entry["frequency"] = t.frequency;
      doc.push_back(std::move(entry));
    }
  }
  out << doc.dump(2) << '\n';
}

TemplateStore LoadTemplates(std::span<const std::string> paths) {
  TemplateStore store;
  for (const std::string &path : paths) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open " + path);
    try {
      store.Merge(ReadTemplates(in));
    } catch (const ValidationError &e) {
      throw ValidationError(path + ": " + e.what());
    }
  }
  return store;
}

}  // namespace d2t
