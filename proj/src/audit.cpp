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

#include "factoid/audit.hpp"

#include <algorithm>
#include <tuple>

namespace factoid {

const std::map<RelationId, int>* PredicateRelationTable::find(
    const std::string& template_key) const {
  auto it = counts.find(template_key);
  return it == counts.end() ? nullptr : &it->second;
}

int PredicateRelationTable::relation_count(const std::string& template_key,
                                           const RelationId& r) const {
  const std::map<RelationId, int>* relations = find(template_key);
  if (!relations) return 0;
  auto it = relations->find(r);
  return it == relations->end() ? 0 : it->second;
}

PredicateRelationTable build_predicate_table(const std::vector<QuestionExample>& corpus,
                                             const KnowledgeGraph& kg) {
  PredicateRelationTable table;
  for (const QuestionExample& q : corpus) {
    std::optional<AliasMatch> m = match_subject_alias(q, kg);
    if (!m) {
      ++table.skipped_no_alias_match;
      continue;
    }
    PredicateTemplate tmpl = abstract_predicate(q.tokens, m->span);
    ++table.counts[tmpl.key()][q.gold_relation];
    ++table.contributing_examples;
  }
  return table;
}

bool InterpretationSet::contains(const EntityId& s, const RelationId& r) const {
  for (const ScoredPair& p : pairs) {
    if (p.subject == s && p.relation == r) return true;
  }
  return false;
}

std::optional<InterpretationSet> interpretation_set(const QuestionExample& q,
                                                    const KnowledgeGraph& kg,
                                                    const PredicateRelationTable& table) {
  std::optional<AliasMatch> m = match_subject_alias(q, kg);
  if (!m) return std::nullopt;

  InterpretationSet iset;
  iset.question_id = q.id;
  iset.span = m->span;
  iset.alias = m->alias;
  PredicateTemplate tmpl = abstract_predicate(q.tokens, m->span);
  iset.template_key = tmpl.key();
  iset.gold_pair = {q.gold_subject, q.gold_relation};

  // S x R filtered to pairs the graph can complete. entities_with_alias and
  // the table's relation map are both ordered, so the pair list is sorted by
  // (subject, relation) with no extra pass.
  std::set<EntityId> subjects = kg.entities_with_alias(m->alias);
  const std::map<RelationId, int>* relations = table.find(iset.template_key);
  if (relations) {
    for (const EntityId& s : subjects) {
      for (const auto& [r, rel_count] : *relations) {
        int fc = kg.fact_count(s, r);
        if (fc > 0) iset.pairs.push_back(ScoredPair{s, r, rel_count, fc});
      }
    }
  }
  return iset;
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kAnswerable: return "answerable";
    case Verdict::kAmbiguous: return "ambiguous";
    case Verdict::kUnmentionedSubject: return "unmentioned_subject";
  }
  return "?";
}

Verdict verdict_of(const std::optional<InterpretationSet>& iset) {
  if (!iset) return Verdict::kUnmentionedSubject;
  return iset->pairs.size() > 1 ? Verdict::kAmbiguous : Verdict::kAnswerable;
}

std::optional<ScoredPair> best_guess(const InterpretationSet& iset, GuesserRule rule) {
  const ScoredPair* best = nullptr;
  for (const ScoredPair& p : iset.pairs) {
    if (!best) {
      best = &p;
      continue;
    }
    int lead = rule == GuesserRule::kRelationCountThenFactCount
                   ? (p.relation_count != best->relation_count
                          ? p.relation_count - best->relation_count
                          : p.fact_count - best->fact_count)
                   : (p.fact_count != best->fact_count ? p.fact_count - best->fact_count
                                                       : p.relation_count - best->relation_count);
    if (lead > 0) {
      best = &p;
    } else if (lead == 0 &&
               std::tie(p.relation, p.subject) < std::tie(best->relation, best->subject)) {
      best = &p;  // final tie: lexicographically smallest (relation, subject)
    }
  }
  if (!best) return std::nullopt;
  return *best;
}

AuditReport compute_upperbounds(const std::vector<QuestionExample>& split,
                                const KnowledgeGraph& kg, const PredicateRelationTable& table,
                                GuesserRule rule) {
  AuditReport report;
  report.total = static_cast<int>(split.size());

  double naive_sum = 0.0;
  double dist_sum = 0.0;
  double noise_sum = 0.0;

  for (const QuestionExample& q : split) {
    QuestionAudit audit;
    audit.id = q.id;
    audit.iset = interpretation_set(q, kg, table);
    audit.verdict = verdict_of(audit.iset);

    switch (audit.verdict) {
      case Verdict::kUnmentionedSubject:
        ++report.unmentioned_subject_count;
        naive_sum += 1.0;
        dist_sum += 1.0;
        audit.contribution = 1.0;  // distribution-bound accounting
        break;
      case Verdict::kAnswerable:
        ++report.answerable_count;
        naive_sum += 1.0;
        dist_sum += 1.0;
        noise_sum += 1.0;
        audit.guess = best_guess(*audit.iset, rule);
        audit.contribution = 1.0;
        break;
      case Verdict::kAmbiguous: {
        ++report.unanswerable_count;
        audit.guess = best_guess(*audit.iset, rule);
        naive_sum += 1.0 / static_cast<double>(audit.iset->pairs.size());
        const bool hit = audit.guess && audit.guess->subject == q.gold_subject &&
                         audit.guess->relation == q.gold_relation;
        audit.contribution = hit ? 1.0 : 0.0;
        dist_sum += audit.contribution;
        noise_sum += audit.contribution;
        break;
      }
    }
    report.questions.push_back(std::move(audit));
  }

  if (report.total > 0) {
    report.naive_upperbound = naive_sum / report.total;
    report.distribution_upperbound = dist_sum / report.total;
    report.noise_adjusted_upperbound = noise_sum / report.total;
  }
  return report;
}

nlohmann::json AuditReport::to_json() const {
  nlohmann::json questions_json = nlohmann::json::array();
  for (const QuestionAudit& qa : questions) {
    nlohmann::json pairs = nlohmann::json::array();
    if (qa.iset) {
      for (const ScoredPair& p : qa.iset->pairs) {
        pairs.push_back({{"subject", p.subject},
                         {"relation", p.relation},
                         {"rel_count", p.relation_count},
                         {"fact_count", p.fact_count}});
      }
    }
    nlohmann::json entry{{"id", qa.id},
                         {"verdict", verdict_name(qa.verdict)},
                         {"pairs", pairs},
                         {"contribution", qa.contribution}};
    if (qa.iset) {
      entry["gold"] = {{"subject", qa.iset->gold_pair.first},
                       {"relation", qa.iset->gold_pair.second}};
      entry["alias"] = join_tokens(qa.iset->alias);
    }
    if (qa.guess) {
      entry["guess"] = {{"subject", qa.guess->subject}, {"relation", qa.guess->relation}};
    }
    questions_json.push_back(std::move(entry));
  }
  return nlohmann::json{{"schema_version", 1},
                        {"total", total},
                        {"answerable", answerable_count},
                        {"unanswerable", unanswerable_count},
                        {"unmentioned_subject", unmentioned_subject_count},
                        {"naive_upperbound", naive_upperbound},
                        {"distribution_upperbound", distribution_upperbound},
                        {"noise_adjusted_upperbound", noise_adjusted_upperbound},
                        {"questions", questions_json}};
}

}  // namespace factoid
