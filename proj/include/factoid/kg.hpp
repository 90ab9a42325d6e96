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

#ifndef FACTOID_KG_H_
#define FACTOID_KG_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"

#include "factoid/text.hpp"

namespace factoid {

struct Triple {
  EntityId subject;
  RelationId relation;
  EntityId object;
};

using Tokenizer = std::function<TokenSeq(std::string_view)>;

struct LoadReport {
  std::int64_t triples = 0;   // distinct triples kept
  std::int64_t entities = 0;  // distinct entity ids seen (triples + aliases)
  std::int64_t aliases = 0;   // (entity, alias) pairs kept
  // Aliased entities that never occur in any triple. They stay linkable but
  // can complete no graph query.
  std::int64_t unlinked_alias_entities = 0;

  struct Rejected {
    std::string source;  // "triples" or "aliases"
    int line = 0;        // 1-based
    std::string reason;
  };
  std::vector<Rejected> rejected_lines;

  nlohmann::json to_json() const;
};

// Immutable one-hop triple store with alias, relation, and fact-count
// indexes. Entity and relation ids are interned; all public lookups go
// through the original strings. Safe for concurrent readers once loaded.
class KnowledgeGraph {
 public:
  // Triples TSV: `subject<TAB>relation<TAB>object[ object]*`; an object list
  // of n ids yields n triples. Aliases TSV: `entity<TAB>alias text`; alias
  // text is normalized with `normalize` (the same tokenizer used for
  // questions). URL prefixes must already be stripped by the ingest adapter.
  // Malformed lines are recorded in the report and skipped. Throws DataError
  // when no valid triple is found.
  static KnowledgeGraph load(std::istream& triples_source,
                             std::istream& aliases_source,
                             const Tokenizer& normalize,
                             LoadReport* report = nullptr);

  // Exact-match lookup of a normalized alias token sequence. Empty set on a
  // miss; never partial-matches.
  std::set<EntityId> entities_with_alias(const TokenSeq& alias_tokens) const;
  bool has_alias(const TokenSeq& alias_tokens) const;

  // Union of the relations each subject occurs with. Unknown ids contribute
  // nothing.
  std::set<RelationId> relations_over(const std::set<EntityId>& subjects) const;

  // Number of distinct objects o with (s, r, o) in the graph; 0 when absent.
  int fact_count(const EntityId& subject, const RelationId& relation) const;
  bool has_pair(const EntityId& subject, const RelationId& relation) const;

  // Normalized alias keys (space-joined token sequences) of an entity.
  const std::set<std::string>& aliases_of(const EntityId& entity) const;

  // Deterministic iteration over all distinct (subject, relation) pairs.
  void for_each_pair(
      const std::function<void(const EntityId&, const RelationId&, int count)>& fn) const;

  std::size_t pair_count() const { return fact_counts_.size(); }
  std::size_t triple_count() const { return triple_count_; }
  std::size_t entity_count() const { return entity_names_.size(); }
  int max_alias_token_len() const { return max_alias_token_len_; }

 private:
  KnowledgeGraph() = default;

  static std::uint64_t pair_key(std::uint32_t s, std::uint32_t r) {
    return (static_cast<std::uint64_t>(s) << 32) | r;
  }
  std::int32_t entity_index(const std::string& id) const;
  std::int32_t relation_index(const std::string& path) const;

  std::vector<std::string> entity_names_;
  std::unordered_map<std::string, std::uint32_t> entity_ids_;
  std::vector<std::string> relation_names_;
  std::unordered_map<std::string, std::uint32_t> relation_ids_;

  std::unordered_map<std::uint64_t, int> fact_counts_;         // (s, r) -> |objects|
  std::vector<std::vector<std::uint32_t>> subject_relations_;  // per entity, sorted
  std::unordered_map<std::string, std::vector<std::uint32_t>> alias_entities_;
  std::vector<std::set<std::string>> entity_aliases_;

  std::size_t triple_count_ = 0;
  int max_alias_token_len_ = 0;
};

}  // namespace factoid

#endif  // FACTOID_KG_H_
