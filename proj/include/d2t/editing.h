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

#ifndef D2T_EDITING_H_
#define D2T_EDITING_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace d2t {

// ---------------------------------------------------------------------------
// Tokens

enum class TokenKind { kWord, kPunctuation, kSentinel };

struct Token {
  std::string surface;
  TokenKind kind = TokenKind::kWord;

  bool operator==(const Token &) const = default;
};

inline constexpr std::string_view kSentinelSurface = "<end>";

// Splits on whitespace and detaches each of . , ; : ! ? " ( ) as its own
// token. The result always ends with exactly one sentinel token.
std::vector<Token> Tokenize(std::string_view text);

// Surface strings of Tokenize(text) without the sentinel.
std::vector<std::string> Words(std::string_view text);

bool IsPunctuation(std::string_view token);

// Joins tokens with single spaces, attaching closing punctuation to the
// preceding token and opening brackets/quotes to the following one. For any
// token list produced by Words(), Words(Detokenize(tokens)) == tokens.
std::string Detokenize(std::span<const std::string> tokens);

// ---------------------------------------------------------------------------
// Edit tags

enum class EditOp { kKeep, kDelete };

// KEEP or DELETE the token, optionally preceded by an inserted phrase.
// An empty `insert` means no insertion.
struct Tag {
  EditOp base = EditOp::kKeep;
  std::vector<std::string> insert;

  bool operator==(const Tag &) const = default;
};

// One tag per source token, including the trailing sentinel.
struct TagSequence {
  std::vector<Tag> tags;

  bool operator==(const TagSequence &) const = default;
};

// "KEEP", "DELETE", "KEEP|and", "DELETE|, and".
std::string ToString(const Tag &tag);
std::string ToString(const TagSequence &tags);

// A phrase is stored as its tokens joined by single spaces.
std::string JoinPhrase(std::span<const std::string> tokens);

// The closed set of insertable phrases, ranked by training frequency.
class PhraseVocabulary {
 public:
  struct Entry {
    std::string phrase;
    int64_t frequency = 0;
  };

  PhraseVocabulary() = default;

  // Throws ValidationError on empty phrases, duplicates or size > capacity.
  PhraseVocabulary(std::vector<Entry> entries, size_t capacity);

  bool Contains(std::string_view phrase) const;
  size_t size() const { return entries_.size(); }
  size_t capacity() const { return capacity_; }
  const std::vector<Entry> &entries() const { return entries_; }

 private:
  std::vector<Entry> entries_;
  std::unordered_map<std::string, size_t> index_;
  size_t capacity_ = 0;
};

struct TextPair {
  std::string source;
  std::string target;

  bool operator==(const TextPair &) const = default;
};

// Aligns source and target words through a longest common subsequence and
// returns the tag sequence that rewrites source into target, with no limit
// on the phrases it inserts. Always succeeds.
TagSequence AlignTokens(std::span<const std::string> source,
                        std::span<const std::string> target);
TagSequence ConvertUnrestricted(std::string_view source,
                                std::string_view target);

// As ConvertUnrestricted, but nullopt when some inserted phrase is not in
// the vocabulary.
std::optional<TagSequence> Convert(std::string_view source,
                                   std::string_view target,
                                   const PhraseVocabulary &vocab);

// Every inserted phrase of the sequence, in order.
std::vector<std::string> RequiredPhrases(const TagSequence &tags);

// Realizes tags over source words (the sentinel is implicit and must be
// covered by the last tag). Throws ValidationError on a length mismatch.
std::vector<std::string> ApplyTokens(const TagSequence &tags,
                                     std::span<const std::string> source);
std::string Apply(const TagSequence &tags, std::string_view source);

// The `capacity` most frequent phrases needed by unrestricted conversion of
// the pairs. Ties go to fewer tokens, then lexicographic order.
PhraseVocabulary BuildVocabulary(std::span<const TextPair> pairs,
                                 size_t capacity);

struct FeasibilityResult {
  std::vector<TextPair> kept;
  size_t dropped = 0;
};

FeasibilityResult FilterFeasible(std::span<const TextPair> pairs,
                                 const PhraseVocabulary &vocab);

// "phrase<TAB>frequency" per line.
void WriteVocabulary(const PhraseVocabulary &vocab, std::ostream &out);
PhraseVocabulary ReadVocabulary(std::istream &in);

}  // namespace d2t

#endif  // D2T_EDITING_H_
