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

#include "factoid/text.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <stdexcept>

#include "factoid/errors.hpp"
#include "factoid/kg.hpp"

namespace factoid {

namespace {

bool is_ascii_punct(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  return u < 128 && std::ispunct(u);
}

std::string lower_ascii(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    unsigned char u = static_cast<unsigned char>(c);
    if (u < 128) c = static_cast<char>(std::tolower(u));
  }
  return out;
}

// Peels leading and trailing punctuation off one whitespace-delimited chunk.
// Whatever remains in the middle stays a single token, so word-internal
// apostrophes and hyphens survive.
void split_chunk(const std::string& chunk, TokenSeq& out) {
  std::size_t begin = 0;
  std::size_t end = chunk.size();
  while (begin < end && is_ascii_punct(chunk[begin])) {
    out.push_back(std::string(1, chunk[begin]));
    ++begin;
  }
  std::size_t core_end = end;
  while (core_end > begin && is_ascii_punct(chunk[core_end - 1])) --core_end;
  if (core_end > begin) out.push_back(chunk.substr(begin, core_end - begin));
  for (std::size_t i = core_end; i < end; ++i) out.push_back(std::string(1, chunk[i]));
}

}  // namespace

TokenSeq tokenize(std::string_view text) {
  std::string lowered = lower_ascii(text);
  TokenSeq tokens;
  std::size_t i = 0;
  while (i < lowered.size()) {
    while (i < lowered.size() && std::isspace(static_cast<unsigned char>(lowered[i]))) ++i;
    std::size_t start = i;
    while (i < lowered.size() && !std::isspace(static_cast<unsigned char>(lowered[i]))) ++i;
    if (i > start) split_chunk(lowered.substr(start, i - start), tokens);
  }
  return tokens;
}

std::string join_tokens(const TokenSeq& tokens, int start, int end) {
  std::string out;
  for (int i = start; i < end; ++i) {
    if (i > start) out += ' ';
    out += tokens[static_cast<std::size_t>(i)];
  }
  return out;
}

std::string join_tokens(const TokenSeq& tokens) {
  return join_tokens(tokens, 0, static_cast<int>(tokens.size()));
}

std::optional<AliasMatch> match_subject_alias(const QuestionExample& q,
                                              const KnowledgeGraph& kg) {
  const std::set<std::string>& aliases = kg.aliases_of(q.gold_subject);
  if (aliases.empty()) return std::nullopt;

  const int n = static_cast<int>(q.tokens.size());
  for (int len = n; len >= 1; --len) {
    for (int start = 0; start + len <= n; ++start) {
      std::string key = join_tokens(q.tokens, start, start + len);
      if (aliases.count(key)) {
        AliasMatch m;
        m.span = TokenSpan{start, start + len};
        m.alias.assign(q.tokens.begin() + start, q.tokens.begin() + start + len);
        return m;
      }
    }
  }
  return std::nullopt;
}

PredicateTemplate abstract_predicate(const TokenSeq& tokens, TokenSpan span) {
  const int n = static_cast<int>(tokens.size());
  if (span.start < 0 || span.start >= span.end || span.end > n) {
    throw std::invalid_argument("abstract_predicate: span [" + std::to_string(span.start) +
                                ", " + std::to_string(span.end) +
                                ") invalid for sentence of length " + std::to_string(n));
  }
  PredicateTemplate tmpl;
  tmpl.tokens.reserve(static_cast<std::size_t>(n - span.length() + 1));
  for (int i = 0; i < span.start; ++i) tmpl.tokens.push_back(tokens[static_cast<std::size_t>(i)]);
  tmpl.placeholder_pos = span.start;
  tmpl.tokens.push_back(kPlaceholder);
  for (int i = span.end; i < n; ++i) tmpl.tokens.push_back(tokens[static_cast<std::size_t>(i)]);
  return tmpl;
}

char tag_char(IOTag tag) { return tag == IOTag::kInside ? 'I' : 'O'; }

std::vector<TokenSpan> spans_from_tags(const std::vector<IOTag>& tags) {
  std::vector<TokenSpan> spans;
  const int n = static_cast<int>(tags.size());
  int i = 0;
  while (i < n) {
    if (tags[static_cast<std::size_t>(i)] == IOTag::kInside) {
      int start = i;
      while (i < n && tags[static_cast<std::size_t>(i)] == IOTag::kInside) ++i;
      spans.push_back(TokenSpan{start, i});
    } else {
      ++i;
    }
  }
  std::stable_sort(spans.begin(), spans.end(), [](const TokenSpan& a, const TokenSpan& b) {
    if (a.length() != b.length()) return a.length() > b.length();
    return a.start < b.start;
  });
  return spans;
}

std::vector<QuestionExample> read_question_tsv(std::istream& in,
                                               std::vector<int>* rejected) {
  std::vector<QuestionExample> examples;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> fields;
    std::size_t pos = 0;
    while (true) {
      std::size_t tab = line.find('\t', pos);
      if (tab == std::string::npos) {
        fields.push_back(line.substr(pos));
        break;
      }
      fields.push_back(line.substr(pos, tab - pos));
      pos = tab + 1;
    }
    if (fields.size() != 4 || fields[0].empty() || fields[1].empty() || fields[3].empty()) {
      if (rejected) {
        rejected->push_back(line_no);
        continue;
      }
      throw DataError("question TSV line " + std::to_string(line_no) +
                      ": expected subject<TAB>relation<TAB>object<TAB>question");
    }
    QuestionExample q;
    q.id = static_cast<int>(examples.size());
    q.gold_subject = fields[0];
    q.gold_relation = fields[1];
    q.gold_object = fields[2];
    q.raw = fields[3];
    q.tokens = tokenize(q.raw);
    examples.push_back(std::move(q));
  }
  return examples;
}

}  // namespace factoid
