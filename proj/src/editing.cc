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

#include "d2t/editing.h"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>

#include "d2t/data.h"
#include "d2t/errors.h"

namespace d2t {

namespace {

constexpr std::string_view kPunctuation = ".,;:!?\"()";

bool IsPunctChar(char c) {
  return kPunctuation.find(c) != std::string_view::npos;
}

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool IsClosing(std::string_view t) {
  return t == "." || t == "," || t == ";" || t == ":" || t == "!" ||
         t == "?" || t == ")";
}

}  // namespace

bool IsPunctuation(std::string_view token) {
  return token.size() == 1 && IsPunctChar(token[0]);
}

std::vector<Token> Tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) {
      tokens.push_back({std::move(word), TokenKind::kWord});
      word.clear();
    }
  };
  for (char c : text) {
    if (IsSpace(c)) {
      flush();
    } else if (IsPunctChar(c)) {
      flush();
      tokens.push_back({std::string(1, c), TokenKind::kPunctuation});
    } else {
      word += c;
    }
  }
  flush();
  tokens.push_back({std::string(kSentinelSurface), TokenKind::kSentinel});
  return tokens;
}

std::vector<std::string> Words(std::string_view text) {
  std::vector<Token> tokens = Tokenize(text);
  std::vector<std::string> words;
  words.reserve(tokens.size() - 1);
  for (Token &t : tokens) {
    if (t.kind != TokenKind::kSentinel) words.push_back(std::move(t.surface));
  }
  return words;
}

std::string Detokenize(std::span<const std::string> tokens) {
  std::string out;
  bool glue_next = true;  // no space before the first token
  bool quote_open = false;
  for (const std::string &tok : tokens) {
    bool opening = tok == "(" || (tok == "\"" && !quote_open);
    bool closing = IsClosing(tok) || (tok == "\"" && quote_open);
    if (!glue_next && !closing) out += ' ';
    out += tok;
    glue_next = opening;
    if (tok == "\"") quote_open = !quote_open;
  }
  return out;
}

std::string ToString(const Tag &tag) {
  std::string out = tag.base == EditOp::kKeep ? "KEEP" : "DELETE";
  if (!tag.insert.empty()) out += "|" + JoinPhrase(tag.insert);
  return out;
}

std::string ToString(const TagSequence &tags) {
  std::string out;
  for (const Tag &tag : tags.tags) {
    if (!out.empty()) out += ' ';
    out += ToString(tag);
  }
  return out;
}

std::string JoinPhrase(std::span<const std::string> tokens) {
  std::string out;
  for (const std::string &t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

PhraseVocabulary::PhraseVocabulary(std::vector<Entry> entries, size_t capacity)
    : entries_(std::move(entries)), capacity_(capacity) {
  if (entries_.size() > capacity_) {
    throw ValidationError("phrase vocabulary holds " +
                          std::to_string(entries_.size()) +
                          " phrases, capacity is " +
                          std::to_string(capacity_));
  }
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (Trim(entries_[i].phrase).empty()) {
      throw ValidationError("empty phrase in vocabulary");
    }
    if (!index_.emplace(entries_[i].phrase, i).second) {
      throw ValidationError("duplicate phrase '" + entries_[i].phrase + "'");
    }
  }
}

bool PhraseVocabulary::Contains(std::string_view phrase) const {
  return index_.find(std::string(phrase)) != index_.end();
}

TagSequence AlignTokens(std::span<const std::string> source,
                        std::span<const std::string> target) {
  const size_t n = source.size();
  const size_t m = target.size();
  // lcs[i][j] = LCS length of source[i:] and target[j:].
  std::vector<std::vector<int>> lcs(n + 1, std::vector<int>(m + 1, 0));
  for (size_t i = n; i-- > 0;) {
    for (size_t j = m; j-- > 0;) {
      lcs[i][j] = source[i] == target[j]
                      ? lcs[i + 1][j + 1] + 1
                      : std::max(lcs[i + 1][j], lcs[i][j + 1]);
    }
  }

  TagSequence result;
  result.tags.resize(n + 1);
  std::vector<std::string> pending;
  size_t i = 0;
  size_t j = 0;
  while (i < n && j < m) {
    if (source[i] == target[j]) {
      result.tags[i].base = EditOp::kKeep;
      result.tags[i].insert = std::move(pending);
      pending.clear();
      ++i;
      ++j;
    } else if (lcs[i][j + 1] >= lcs[i + 1][j]) {
      // Skipping the target token keeps source[i] available for the
      // earliest possible match.
      pending.push_back(target[j]);
      ++j;
    } else {
      result.tags[i].base = EditOp::kDelete;
      ++i;
    }
  }
  for (; i < n; ++i) result.tags[i].base = EditOp::kDelete;
  for (; j < m; ++j) pending.push_back(target[j]);
  result.tags[n].base = EditOp::kKeep;
  result.tags[n].insert = std::move(pending);
  return result;
}

TagSequence ConvertUnrestricted(std::string_view source,
                                std::string_view target) {
  std::vector<std::string> src = Words(source);
  std::vector<std::string> tgt = Words(target);
  return AlignTokens(src, tgt);
}

std::optional<TagSequence> Convert(std::string_view source,
                                   std::string_view target,
                                   const PhraseVocabulary &vocab) {
  TagSequence tags = ConvertUnrestricted(source, target);
  for (const Tag &tag : tags.tags) {
    if (!tag.insert.empty() && !vocab.Contains(JoinPhrase(tag.insert))) {
      return std::nullopt;
    }
  }
  return tags;
}

std::vector<std::string> RequiredPhrases(const TagSequence &tags) {
  std::vector<std::string> phrases;
  for (const Tag &tag : tags.tags) {
    if (!tag.insert.empty()) phrases.push_back(JoinPhrase(tag.insert));
  }
  return phrases;
}

std::vector<std::string> ApplyTokens(const TagSequence &tags,
                                     std::span<const std::string> source) {
  if (tags.tags.size() != source.size() + 1) {
    throw ValidationError("tag sequence has " +
                          std::to_string(tags.tags.size()) + " tags for " +
                          std::to_string(source.size() + 1) + " tokens");
  }
  std::vector<std::string> out;
  for (size_t i = 0; i < tags.tags.size(); ++i) {
    const Tag &tag = tags.tags[i];
    out.insert(out.end(), tag.insert.begin(), tag.insert.end());
    if (i < source.size() && tag.base == EditOp::kKeep) {
      out.push_back(source[i]);
    }
  }
  return out;
}

std::string Apply(const TagSequence &tags, std::string_view source) {
  std::vector<std::string> src = Words(source);
  return Detokenize(ApplyTokens(tags, src));
}

PhraseVocabulary BuildVocabulary(std::span<const TextPair> pairs,
                                 size_t capacity) {
  std::map<std::string, int64_t> counts;
  for (const TextPair &pair : pairs) {
    TagSequence tags = ConvertUnrestricted(pair.source, pair.target);
    for (std::string &phrase : RequiredPhrases(tags)) ++counts[phrase];
  }
  std::vector<PhraseVocabulary::Entry> entries;
  entries.reserve(counts.size());
  for (auto &[phrase, count] : counts) entries.push_back({phrase, count});
  auto token_count = [](const std::string &phrase) {
    return std::count(phrase.begin(), phrase.end(), ' ') + 1;
  };
  std::sort(entries.begin(), entries.end(),
            [&](const PhraseVocabulary::Entry &a,
                const PhraseVocabulary::Entry &b) {
              if (a.frequency != b.frequency) return a.frequency > b.frequency;
              auto la = token_count(a.phrase);
              auto lb = token_count(b.phrase);
              if (la != lb) return la < lb;
              return a.phrase < b.phrase;
            });
  if (entries.size() > capacity) entries.resize(capacity);
  return PhraseVocabulary(std::move(entries), capacity);
}

FeasibilityResult FilterFeasible(std::span<const TextPair> pairs,
                                 const PhraseVocabulary &vocab) {
  FeasibilityResult result;
  for (const TextPair &pair : pairs) {
    if (Convert(pair.source, pair.target, vocab)) {
      result.kept.push_back(pair);
    } else {
      ++result.dropped;
    }
  }
  return result;
}

void WriteVocabulary(const PhraseVocabulary &vocab, std::ostream &out) {
  for (const auto &entry : vocab.entries()) {
    out << entry.phrase << '\t' << entry.frequency << '\n';
  }
}

PhraseVocabulary ReadVocabulary(std::istream &in) {
  std::vector<PhraseVocabulary::Entry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    PhraseVocabulary::Entry entry;
    size_t tab = line.rfind('\t');
    if (tab == std::string::npos) {
      entry.phrase = line;
    } else {
      entry.phrase = line.substr(0, tab);
      try {
        entry.frequency = std::stoll(line.substr(tab + 1));
      } catch (const std::exception &) {
        throw ValidationError("vocabulary line " + std::to_string(line_no) +
                              ": bad frequency");
      }
    }
    entries.push_back(std::move(entry));
  }
  size_t size = entries.size();
  return PhraseVocabulary(std::move(entries), size);
}

}  // namespace d2t
