// Copyright 2026 The Factoid Authors
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

#ifndef FACTOID_TEXT_H_
#define FACTOID_TEXT_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace factoid {

class KnowledgeGraph;

using EntityId = std::string;    // Freebase MID without URL prefix, e.g. "04b5zb_"
using RelationId = std::string;  // slash-delimited path, e.g. "location/location/containedby"

using TokenSeq = std::vector<std::string>;

// Placeholder token that stands in for an abstracted subject alias.
inline constexpr const char* kPlaceholder = "$e$";

// Half-open token range [start, end).
struct TokenSpan {
  int start = 0;
  int end = 0;

  int length() const { return end - start; }
  bool operator==(const TokenSpan&) const = default;
};

// Lowercases, splits on whitespace, then peels leading and trailing
// punctuation of each chunk into single-character tokens. Punctuation inside
// a chunk (apostrophes, hyphens, ...) stays in place, so "gulliver's" is one
// token while "travels?" is two. Idempotent on its own space-joined output.
TokenSeq tokenize(std::string_view text);

// Tokens joined with single spaces; the canonical key for alias and
// predicate-template lookups. Tokens never contain whitespace.
std::string join_tokens(const TokenSeq& tokens);
std::string join_tokens(const TokenSeq& tokens, int start, int end);

// A question with its subject alias replaced by kPlaceholder.
struct PredicateTemplate {
  TokenSeq tokens;
  int placeholder_pos = 0;

  std::string key() const { return join_tokens(tokens); }
  bool operator==(const PredicateTemplate&) const = default;
};

struct QuestionExample {
  int id = 0;
  std::string raw;
  TokenSeq tokens;  // tokenize(raw)
  EntityId gold_subject;
  RelationId gold_relation;
  EntityId gold_object;
};

struct AliasMatch {
  TokenSpan span;
  TokenSeq alias;  // tokens[span), equal to one of the subject's aliases
};

// Longest contiguous token span of q that equals an alias of q.gold_subject;
// ties broken by leftmost start. Empty when no alias of the gold subject
// occurs in the question (the question never mentions its subject).
std::optional<AliasMatch> match_subject_alias(const QuestionExample& q,
                                              const KnowledgeGraph& kg);

// Replaces tokens[span) with the single placeholder token. Throws
// std::invalid_argument on an out-of-range or empty span.
PredicateTemplate abstract_predicate(const TokenSeq& tokens, TokenSpan span);

enum class IOTag : std::uint8_t { kInside = 0, kOutside = 1 };

char tag_char(IOTag tag);  // 'I' or 'O'

// One span per maximal run of kInside labels, ordered by
// (length descending, start ascending).
std::vector<TokenSpan> spans_from_tags(const std::vector<IOTag>& tags);

// Reads the dataset TSV `subject<TAB>relation<TAB>object<TAB>question`.
// Lines with the wrong field count are rejected; their 1-based numbers are
// appended to *rejected when given, otherwise a DataError is thrown.
std::vector<QuestionExample> read_question_tsv(std::istream& in,
                                               std::vector<int>* rejected = nullptr);

}  // namespace factoid

#endif  // FACTOID_TEXT_H_
