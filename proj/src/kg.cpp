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

#include "factoid/kg.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <sstream>

#include "factoid/errors.hpp"

namespace factoid {

namespace {

// Interns `id`, growing the pools on first sight.
std::uint32_t intern(const std::string& id, std::unordered_map<std::string, std::uint32_t>& index,
                     std::vector<std::string>& names) {
  auto it = index.find(id);
  if (it != index.end()) return it->second;
  std::uint32_t next = static_cast<std::uint32_t>(names.size());
  names.push_back(id);
  index.emplace(id, next);
  return next;
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t pos = 0;
  while (true) {
    std::size_t tab = line.find('\t', pos);
    if (tab == std::string::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
}

}  // namespace

nlohmann::json LoadReport::to_json() const {
  nlohmann::json rejected = nlohmann::json::array();
  for (const Rejected& r : rejected_lines) {
    rejected.push_back({{"source", r.source}, {"line", r.line}, {"reason", r.reason}});
  }
  return nlohmann::json{{"schema_version", 1},
                        {"triples", triples},
                        {"entities", entities},
                        {"aliases", aliases},
                        {"unlinked_alias_entities", unlinked_alias_entities},
                        {"rejected_lines", rejected}};
}

KnowledgeGraph KnowledgeGraph::load(std::istream& triples_source,
                                    std::istream& aliases_source,
                                    const Tokenizer& normalize, LoadReport* report) {
  KnowledgeGraph kg;
  LoadReport local;
  LoadReport& rep = report ? *report : local;

  std::vector<std::array<std::uint32_t, 3>> triples;
  std::vector<bool> in_triples;  // per entity index

  auto mark_in_triples = [&](std::uint32_t e) {
    if (in_triples.size() <= e) in_triples.resize(e + 1, false);
    in_triples[e] = true;
  };

  std::string line;
  int line_no = 0;
  while (std::getline(triples_source, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != 3 || fields[0].empty() || fields[1].empty() || fields[2].empty()) {
      rep.rejected_lines.push_back(
          {"triples", line_no, "expected subject<TAB>relation<TAB>object-list"});
      continue;
    }
    std::uint32_t s = intern(fields[0], kg.entity_ids_, kg.entity_names_);
    std::uint32_t r = intern(fields[1], kg.relation_ids_, kg.relation_names_);
    mark_in_triples(s);

    std::istringstream objects(fields[2]);
    std::string object_id;
    bool any = false;
    while (objects >> object_id) {
      std::uint32_t o = intern(object_id, kg.entity_ids_, kg.entity_names_);
      mark_in_triples(o);
      triples.push_back({s, r, o});
      any = true;
    }
    if (!any) {
      rep.rejected_lines.push_back({"triples", line_no, "empty object list"});
    }
  }

  if (triples.empty()) {
    throw DataError("triples source contains no valid triples; refusing to build a graph "
                    "that can complete zero queries");
  }

  // Distinct-object semantics: duplicated distribution lines count once.
  std::sort(triples.begin(), triples.end());
  triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
  kg.triple_count_ = triples.size();

  kg.subject_relations_.resize(kg.entity_names_.size());
  for (const auto& t : triples) {
    ++kg.fact_counts_[pair_key(t[0], t[1])];
    std::vector<std::uint32_t>& rels = kg.subject_relations_[t[0]];
    if (rels.empty() || rels.back() != t[1]) rels.push_back(t[1]);
  }
  // Triples are sorted by (s, r, o), so each subject's relation list is
  // already sorted; duplicates were collapsed by the back() check.

  line_no = 0;
  std::int64_t alias_entries = 0;
  while (std::getline(aliases_source, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> fields = split_tabs(line);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      rep.rejected_lines.push_back({"aliases", line_no, "expected entity<TAB>alias text"});
      continue;
    }
    TokenSeq alias_tokens = normalize(fields[1]);
    if (alias_tokens.empty()) {
      rep.rejected_lines.push_back({"aliases", line_no, "alias empty after normalization"});
      continue;
    }
    std::uint32_t e = intern(fields[0], kg.entity_ids_, kg.entity_names_);
    std::string key = join_tokens(alias_tokens);

    if (kg.entity_aliases_.size() < kg.entity_names_.size()) {
      kg.entity_aliases_.resize(kg.entity_names_.size());
    }
    if (kg.entity_aliases_[e].insert(key).second) {
      kg.alias_entities_[key].push_back(e);
      ++alias_entries;
      kg.max_alias_token_len_ =
          std::max(kg.max_alias_token_len_, static_cast<int>(alias_tokens.size()));
    }
  }
  kg.entity_aliases_.resize(kg.entity_names_.size());

  for (auto& [key, ids] : kg.alias_entities_) {
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  }

  std::int64_t unlinked = 0;
  for (std::size_t e = 0; e < kg.entity_aliases_.size(); ++e) {
    if (kg.entity_aliases_[e].empty()) continue;
    if (e >= in_triples.size() || !in_triples[e]) ++unlinked;
  }

  rep.triples = static_cast<std::int64_t>(kg.triple_count_);
  rep.entities = static_cast<std::int64_t>(kg.entity_names_.size());
  rep.aliases = alias_entries;
  rep.unlinked_alias_entities = unlinked;
  return kg;
}

std::int32_t KnowledgeGraph::entity_index(const std::string& id) const {
  auto it = entity_ids_.find(id);
  return it == entity_ids_.end() ? -1 : static_cast<std::int32_t>(it->second);
}

std::int32_t KnowledgeGraph::relation_index(const std::string& path) const {
  auto it = relation_ids_.find(path);
  return it == relation_ids_.end() ? -1 : static_cast<std::int32_t>(it->second);
}

std::set<EntityId> KnowledgeGraph::entities_with_alias(const TokenSeq& alias_tokens) const {
  std::set<EntityId> out;
  auto it = alias_entities_.find(join_tokens(alias_tokens));
  if (it == alias_entities_.end()) return out;
  for (std::uint32_t e : it->second) out.insert(entity_names_[e]);
  return out;
}

bool KnowledgeGraph::has_alias(const TokenSeq& alias_tokens) const {
  return alias_entities_.count(join_tokens(alias_tokens)) > 0;
}

std::set<RelationId> KnowledgeGraph::relations_over(const std::set<EntityId>& subjects) const {
  std::set<RelationId> out;
  for (const EntityId& s : subjects) {
    std::int32_t e = entity_index(s);
    if (e < 0 || static_cast<std::size_t>(e) >= subject_relations_.size()) continue;
    for (std::uint32_t r : subject_relations_[static_cast<std::size_t>(e)]) {
      out.insert(relation_names_[r]);
    }
  }
  return out;
}

int KnowledgeGraph::fact_count(const EntityId& subject, const RelationId& relation) const {
  std::int32_t s = entity_index(subject);
  std::int32_t r = relation_index(relation);
  if (s < 0 || r < 0) return 0;
  auto it = fact_counts_.find(pair_key(static_cast<std::uint32_t>(s),
                                       static_cast<std::uint32_t>(r)));
  return it == fact_counts_.end() ? 0 : it->second;
}

bool KnowledgeGraph::has_pair(const EntityId& subject, const RelationId& relation) const {
  return fact_count(subject, relation) > 0;
}

const std::set<std::string>& KnowledgeGraph::aliases_of(const EntityId& entity) const {
  static const std::set<std::string> kEmpty;
  std::int32_t e = entity_index(entity);
  if (e < 0 || static_cast<std::size_t>(e) >= entity_aliases_.size()) return kEmpty;
  return entity_aliases_[static_cast<std::size_t>(e)];
}

void KnowledgeGraph::for_each_pair(
    const std::function<void(const EntityId&, const RelationId&, int)>& fn) const {
  for (std::size_t e = 0; e < subject_relations_.size(); ++e) {
    for (std::uint32_t r : subject_relations_[e]) {
      auto it = fact_counts_.find(pair_key(static_cast<std::uint32_t>(e), r));
      fn(entity_names_[e], relation_names_[r], it == fact_counts_.end() ? 0 : it->second);
    }
  }
}

}  // namespace factoid
