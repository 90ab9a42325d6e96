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

#ifndef FACTOID_AUDIT_H_
#define FACTOID_AUDIT_H_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "factoid/kg.hpp"
#include "factoid/text.hpp"

namespace factoid {

// How often each predicate template co-occurs with each gold relation across
// the corpus. Only questions with a gold-subject alias match contribute.
struct PredicateRelationTable {
  std::map<std::string, std::map<RelationId, int>> counts;  // template key -> relation -> n
  int contributing_examples = 0;
  int skipped_no_alias_match = 0;

  const std::map<RelationId, int>* find(const std::string& template_key) const;
  int relation_count(const std::string& template_key, const RelationId& r) const;
};

PredicateRelationTable build_predicate_table(const std::vector<QuestionExample>& corpus,
                                             const KnowledgeGraph& kg);

struct ScoredPair {
  EntityId subject;
  RelationId relation;
  int relation_count = 0;  // dataset co-occurrence count for the template
  int fact_count = 0;      // distinct objects of (subject, relation) in the KG

  bool operator==(const ScoredPair&) const = default;
};

// All subject-relation pairs that accurately interpret one question: entities
// sharing the matched alias crossed with the template's co-occurring
// relations, filtered to pairs present in the KG.
struct InterpretationSet {
  int question_id = 0;
  TokenSpan span;
  TokenSeq alias;
  std::string template_key;
  std::vector<ScoredPair> pairs;  // sorted by (subject, relation)
  std::pair<EntityId, RelationId> gold_pair;

  bool contains(const EntityId& s, const RelationId& r) const;
};

// Empty when the question never mentions its gold subject (the noise case).
std::optional<InterpretationSet> interpretation_set(const QuestionExample& q,
                                                    const KnowledgeGraph& kg,
                                                    const PredicateRelationTable& table);

enum class Verdict { kAnswerable, kAmbiguous, kUnmentionedSubject };

const char* verdict_name(Verdict v);

// No interpretation set -> unmentioned_subject; more than one pair ->
// ambiguous; otherwise answerable.
Verdict verdict_of(const std::optional<InterpretationSet>& iset);

// Which statistic leads when the deterministic guesser ranks pairs; final
// ties always fall to the lexicographically smallest (relation, subject).
enum class GuesserRule {
  kRelationCountThenFactCount,  // default
  kFactCountThenRelationCount,
};

std::optional<ScoredPair> best_guess(const InterpretationSet& iset, GuesserRule rule);

struct QuestionAudit {
  int id = 0;
  Verdict verdict = Verdict::kAnswerable;
  std::optional<InterpretationSet> iset;
  std::optional<ScoredPair> guess;
  double contribution = 0.0;  // distribution-bound contribution
};

struct AuditReport {
  int total = 0;
  int answerable_count = 0;
  int unanswerable_count = 0;  // ambiguous: multiple valid interpretations
  int unmentioned_subject_count = 0;
  double naive_upperbound = 0.0;
  double distribution_upperbound = 0.0;
  double noise_adjusted_upperbound = 0.0;
  std::vector<QuestionAudit> questions;

  nlohmann::json to_json() const;
};

// Per question: answerable contributes 1 everywhere; ambiguous contributes
// 1/|pairs| to the naive bound and (guess == gold) to the others;
// unmentioned-subject contributes 1 except to the noise-adjusted bound.
AuditReport compute_upperbounds(const std::vector<QuestionExample>& split,
                                const KnowledgeGraph& kg,
                                const PredicateRelationTable& table,
                                GuesserRule rule = GuesserRule::kRelationCountThenFactCount);

}  // namespace factoid

#endif  // FACTOID_AUDIT_H_
