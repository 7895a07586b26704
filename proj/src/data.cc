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

#include "d2t/data.h"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "d2t/errors.h"
#include "json.hpp"

namespace d2t {

namespace {

using json = nlohmann::json;

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::ifstream OpenInput(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  return in;
}

// Minimal RFC 4180 reader: quoted fields, doubled quotes, embedded newlines.
class CsvReader {
 public:
  explicit CsvReader(std::istream &in) : in_(in) {}

  bool Next(std::vector<std::string> *row) {
    row->clear();
    int c = in_.get();
    if (c == EOF) return false;
    std::string field;
    bool quoted = false;
    for (;; c = in_.get()) {
      if (quoted) {
        if (c == EOF) throw ValidationError("csv: unterminated quoted field");
        if (c == '"') {
          if (in_.peek() == '"') {
            field += '"';
            in_.get();
          } else {
            quoted = false;
          }
        } else {
          field += static_cast<char>(c);
        }
        continue;
      }
      if (c == EOF || c == '\n') {
        if (!field.empty() && field.back() == '\r') field.pop_back();
        row->push_back(std::move(field));
        return true;
      }
      if (c == ',') {
        row->push_back(std::move(field));
        field.clear();
      } else if (c == '"' && field.empty()) {
        quoted = true;
      } else {
        field += static_cast<char>(c);
      }
    }
  }

 private:
  std::istream &in_;
};

}  // namespace

std::string_view Trim(std::string_view text) {
  size_t begin = 0;
  size_t end = text.size();
  while (begin < end && IsSpace(text[begin])) ++begin;
  while (end > begin && IsSpace(text[end - 1])) --end;
  return text.substr(begin, end - begin);
}

Triple MakeTriple(std::string_view subject, std::string_view predicate,
                  std::string_view object) {
  Triple t{std::string(Trim(subject)), std::string(Trim(predicate)),
           std::string(Trim(object))};
  if (t.subject.empty() || t.predicate.empty() || t.object.empty()) {
    throw ValidationError("triple with empty field: (" + t.subject + ", " +
                          t.predicate + ", " + t.object + ")");
  }
  return t;
}

std::string ToString(const Triple &triple) {
  return "(" + triple.subject + ", " + triple.predicate + ", " +
         triple.object + ")";
}

void ValidateExample(const Example &example) {
  if (example.triples.empty()) {
    throw ValidationError("example '" + example.id + "': empty triple set");
  }
  std::set<Triple> seen;
  for (const Triple &t : example.triples) {
    if (Trim(t.subject).empty() || Trim(t.predicate).empty() ||
        Trim(t.object).empty()) {
      throw ValidationError("example '" + example.id +
                            "': triple with empty field " + ToString(t));
    }
    if (!seen.insert(t).second) {
      throw ValidationError("example '" + example.id + "': duplicate triple " +
                            ToString(t));
    }
  }
}

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
  }
  return "train";
}

Split ParseSplit(std::string_view name) {
  if (name == "train") return Split::kTrain;
  if (name == "dev") return Split::kDev;
  if (name == "test") return Split::kTest;
  throw ValidationError("unknown split '" + std::string(name) + "'");
}

std::string_view SourceName(Source source) {
  switch (source) {
    case Source::kWebNlg: return "webnlg";
    case Source::kE2e: return "e2e";
    case Source::kJsonl: return "jsonl";
    case Source::kDiscoFuse: return "discofuse";
  }
  return "jsonl";
}

std::string NormalizeEntity(std::string_view raw) {
  std::string text(Trim(raw));
  std::replace(text.begin(), text.end(), '_', ' ');
  std::string collapsed;
  collapsed.reserve(text.size());
  for (char c : text) {
    if (IsSpace(c)) {
      if (!collapsed.empty() && collapsed.back() != ' ') collapsed += ' ';
    } else {
      collapsed += c;
    }
  }
  std::string_view out = Trim(collapsed);
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') {
    out = Trim(out.substr(1, out.size() - 2));
  }
  return std::string(out);
}

// ---------------------------------------------------------------------------
// JSONL

Dataset ReadJsonl(std::istream &in) {
  Dataset dataset;
  dataset.source = Source::kJsonl;
  std::set<std::string> ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    std::string where = "line " + std::to_string(line_no);
    Example example;
    try {
      json obj = json::parse(line);
      example.id = obj.at("id").get<std::string>();
      for (const json &t : obj.at("triples")) {
        example.triples.push_back(MakeTriple(t.at("s").get<std::string>(),
                                             t.at("p").get<std::string>(),
                                             t.at("o").get<std::string>()));
      }
      if (obj.contains("refs")) {
        example.references = obj.at("refs").get<std::vector<std::string>>();
      }
    } catch (const json::exception &e) {
      throw ValidationError(where + ": malformed record: " + e.what());
    } catch (const ValidationError &e) {
      throw ValidationError(where + ": " + e.what());
    }
    if (example.triples.empty()) {
      throw ValidationError(where + ": empty triple set");
    }
    try {
      ValidateExample(example);
    } catch (const ValidationError &e) {
      throw ValidationError(where + ": " + e.what());
    }
    if (!ids.insert(example.id).second) {
      throw ValidationError(where + ": duplicate id '" + example.id + "'");
    }
    dataset.examples.push_back(std::move(example));
  }
  return dataset;
}

Dataset LoadJsonl(const std::string &path) {
  std::ifstream in = OpenInput(path);
  try {
    return ReadJsonl(in);
  } catch (const ValidationError &e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void WriteJsonl(const Dataset &dataset, std::ostream &out) {
  for (const Example &example : dataset.examples) {
    json triples = json::array();
    for (const Triple &t : example.triples) {
      triples.push_back({{"s", t.subject}, {"p", t.predicate}, {"o", t.object}});
    }
    json obj = {{"id", example.id},
                {"triples", std::move(triples)},
                {"refs", example.references}};
    out << obj.dump() << '\n';
  }
}

// ---------------------------------------------------------------------------
// E2E

std::vector<std::pair<std::string, std::string>> ParseMeaningRepresentation(
    std::string_view mr) {
  std::vector<std::pair<std::string, std::string>> items;
  size_t pos = 0;
  while (true) {
    while (pos < mr.size() && (IsSpace(mr[pos]) || mr[pos] == ',')) ++pos;
    if (pos >= mr.size()) break;
    size_t open = mr.find('[', pos);
    size_t close = open == std::string_view::npos ? open : mr.find(']', open);
    size_t next_comma = mr.find(',', pos);
    if (open == std::string_view::npos || close == std::string_view::npos ||
        (next_comma != std::string_view::npos && next_comma < open)) {
      size_t end = next_comma == std::string_view::npos ? mr.size() : next_comma;
      throw ValidationError("unparseable slot item '" +
                            std::string(Trim(mr.substr(pos, end - pos))) + "'");
    }
    std::string_view slot = Trim(mr.substr(pos, open - pos));
    std::string_view value = Trim(mr.substr(open + 1, close - open - 1));
    if (slot.empty() || value.empty()) {
      throw ValidationError("unparseable slot item '" +
                            std::string(mr.substr(pos, close + 1 - pos)) + "'");
    }
    items.emplace_back(std::string(slot), std::string(value));
    pos = close + 1;
  }
  return items;
}

Dataset ReadE2eCsv(std::istream &in) {
  CsvReader reader(in);
  std::vector<std::string> row;
  Dataset dataset;
  dataset.source = Source::kE2e;
  if (!reader.Next(&row)) return dataset;

  int mr_col = 0;
  int ref_col = 1;
  bool header = false;
  for (size_t i = 0; i < row.size(); ++i) {
    std::string_view name = Trim(row[i]);
    if (name == "mr" || name == "MR") {
      mr_col = static_cast<int>(i);
      header = true;
    } else if (name == "ref") {
      ref_col = static_cast<int>(i);
      header = true;
    }
  }

  std::map<std::string, size_t> by_mr;
  int row_no = header ? 1 : 0;
  auto consume = [&](const std::vector<std::string> &cells) {
    ++row_no;
    if (cells.size() == 1 && Trim(cells[0]).empty()) return;
    if (static_cast<int>(cells.size()) <= std::max(mr_col, ref_col)) {
      throw ValidationError("row " + std::to_string(row_no) +
                            ": expected mr and ref columns");
    }
    const std::string &mr = cells[mr_col];
    auto it = by_mr.find(mr);
    if (it == by_mr.end()) {
      Example example;
      example.id = "e2e-" + std::to_string(dataset.examples.size());
      std::string name;
      std::vector<std::pair<std::string, std::string>> rest;
      try {
        for (auto &[slot, value] : ParseMeaningRepresentation(mr)) {
          if (slot == "name" && name.empty()) {
            name = NormalizeEntity(value);
          } else {
            rest.emplace_back(slot, value);
          }
        }
      } catch (const ValidationError &e) {
        throw ValidationError("row " + std::to_string(row_no) + ": " +
                              e.what());
      }
      if (name.empty()) {
        throw ValidationError("row " + std::to_string(row_no) +
                              ": MR without name slot: " + mr);
      }
      for (auto &[slot, value] : rest) {
        example.triples.push_back(
            MakeTriple(name, slot, NormalizeEntity(value)));
      }
      if (example.triples.empty()) {
        throw ValidationError("row " + std::to_string(row_no) +
                              ": empty triple set");
      }
      ValidateExample(example);
      it = by_mr.emplace(mr, dataset.examples.size()).first;
      dataset.examples.push_back(std::move(example));
    }
    std::string ref(Trim(cells[ref_col]));
    if (!ref.empty()) dataset.examples[it->second].references.push_back(ref);
  };

  if (!header) consume(row);
  while (reader.Next(&row)) consume(row);
  return dataset;
}

Dataset ImportE2e(const std::string &path) {
  std::ifstream in = OpenInput(path);
  try {
    return ReadE2eCsv(in);
  } catch (const ValidationError &e) {
    throw ValidationError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// WebNLG

namespace {

Triple ParseWebNlgTriple(std::string_view text) {
  size_t first = text.find('|');
  size_t second = first == std::string_view::npos ? first
                                                  : text.find('|', first + 1);
  if (second == std::string_view::npos) {
    throw ValidationError("malformed triple '" + std::string(text) + "'");
  }
  return MakeTriple(NormalizeEntity(text.substr(0, first)),
                    Trim(text.substr(first + 1, second - first - 1)),
                    NormalizeEntity(text.substr(second + 1)));
}

}  // namespace

Dataset ReadWebNlgXml(std::istream &in, int *skipped) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_xml(in, tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error &e) {
    throw ValidationError(std::string("xml parse failure: ") + e.what());
  }

  Dataset dataset;
  dataset.source = Source::kWebNlg;
  int skip_count = 0;
  std::set<std::string> ids;

  const pt::ptree *entries = nullptr;
  if (auto b = tree.get_child_optional("benchmark.entries")) {
    entries = &*b;
  } else if (auto e = tree.get_child_optional("entries")) {
    entries = &*e;
  } else {
    throw ValidationError("xml: no <benchmark><entries> element");
  }

  int index = 0;
  for (const auto &[tag, entry] : *entries) {
    if (tag != "entry") continue;
    ++index;
    Example example;
    example.id = entry.get<std::string>("<xmlattr>.eid",
                                        "entry" + std::to_string(index));
    if (!ids.insert(example.id).second) {
      example.id += "#" + std::to_string(index);
      ids.insert(example.id);
    }
    auto set = entry.get_child_optional("modifiedtripleset");
    try {
      if (!set) throw ValidationError("missing modifiedtripleset");
      for (const auto &[ttag, triple] : *set) {
        if (ttag != "mtriple") continue;
        example.triples.push_back(ParseWebNlgTriple(triple.data()));
      }
      ValidateExample(example);
    } catch (const ValidationError &e) {
      std::cerr << "warning: skipping WebNLG entry " << example.id << ": "
                << e.what() << "\n";
      ++skip_count;
      continue;
    }
    for (const auto &[ltag, lex] : entry) {
      if (ltag != "lex") continue;
      std::string text;
      if (auto t = lex.get_child_optional("text")) {
        text = t->data();
      } else {
        text = lex.data();
      }
      text = std::string(Trim(text));
      if (!text.empty()) example.references.push_back(text);
    }
    dataset.examples.push_back(std::move(example));
  }
  if (skip_count > 0) {
    std::cerr << "warning: skipped " << skip_count << " WebNLG entries\n";
  }
  if (skipped != nullptr) *skipped = skip_count;
  return dataset;
}

Dataset ImportWebNlg(const std::string &path) {
  std::ifstream in = OpenInput(path);
  try {
    return ReadWebNlgXml(in);
  } catch (const ValidationError &e) {
    throw ValidationError(path + ": " + e.what());
  }
}

Dataset LoadDataset(const std::string &path) {
  auto ends_with = [&](std::string_view suffix) {
    return path.size() >= suffix.size() &&
           path.compare(path.size() - suffix.size(), suffix.size(), suffix) ==
               0;
  };
  if (ends_with(".xml")) return ImportWebNlg(path);
  if (ends_with(".csv")) return ImportE2e(path);
  return LoadJsonl(path);
}

}  // namespace d2t
