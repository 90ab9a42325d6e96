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

#include "factoid/pipeline.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

namespace factoid {

namespace {

TokenSeq slice(const TokenSeq& tokens, TokenSpan span) {
  return TokenSeq(tokens.begin() + span.start, tokens.begin() + span.end);
}

// Longest question n-gram that is a KG alias, leftmost on ties.
std::optional<TokenSpan> longest_alias_ngram(const TokenSeq& tokens,
                                             const KnowledgeGraph& kg) {
  const int n = static_cast<int>(tokens.size());
  const int cap = std::min(n, kg.max_alias_token_len());
  for (int len = cap; len >= 1; --len) {
    for (int start = 0; start + len <= n; ++start) {
      if (kg.has_alias(slice(tokens, TokenSpan{start, start + len}))) {
        return TokenSpan{start, start + len};
      }
    }
  }
  return std::nullopt;
}

}  // namespace

Prediction predict(const TokenSeq& tokens, const TaggerModel& tagger,
                   const ClassifierModel& clf, const KnowledgeGraph& kg, int k) {
  if (k < 1) throw std::invalid_argument("predict: k must be >= 1");
  Prediction pred;
  if (tokens.empty()) return pred;

  // Most likely tagged span that is also a KG alias; n-gram fallback after.
  std::optional<TokenSpan> chosen;
  for (const auto& [span, score] : topk_subject_spans(tagger, tokens, k)) {
    if (kg.has_alias(slice(tokens, span))) {
      chosen = span;
      break;
    }
  }
  if (!chosen) chosen = longest_alias_ngram(tokens, kg);
  if (!chosen) return pred;  // nothing in the question links to the KG

  pred.span = *chosen;
  pred.alias = slice(tokens, *chosen);

  std::set<EntityId> subjects = kg.entities_with_alias(pred.alias);
  std::set<RelationId> candidates = kg.relations_over(subjects);
  if (candidates.empty()) return pred;  // alias-only entities, no pair to emit

  Classification cls = classify(clf, abstract_predicate(tokens, *chosen), candidates);
  pred.candidate_probs = cls.probs;
  std::optional<RelationId> r_max = cls.top();
  if (!r_max) return pred;  // no candidate relation known to the model

  // Among subjects supporting r_max, the one with the most facts of that
  // relation wins; ties fall to the lexicographically smallest id.
  const RelationId& relation = *r_max;
  EntityId s_max;
  int best_count = 0;
  for (const EntityId& s : subjects) {  // std::set: id order
    int fc = kg.fact_count(s, relation);
    if (fc > best_count) {
      best_count = fc;
      s_max = s;
    }
  }
  if (best_count == 0) return pred;

  pred.abstained = false;
  pred.subject = s_max;
  pred.relation = relation;
  pred.probability = cls.probs.at(relation);
  return pred;
}

namespace {

void check_aligned(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string("evaluate: ") + what + " length mismatch (" +
                                std::to_string(a) + " vs " + std::to_string(b) + ")");
  }
}

bool strict_correct(const Prediction& p, const QuestionExample& gold) {
  return !p.abstained && p.subject == gold.gold_subject && p.relation == gold.gold_relation;
}

bool any_correct(const Prediction& p, const QuestionExample& gold,
                 const std::optional<InterpretationSet>& iset) {
  if (strict_correct(p, gold)) return true;
  return !p.abstained && iset && iset->contains(p.subject, p.relation);
}

}  // namespace

double evaluate_strict(const std::vector<Prediction>& predictions,
                       const std::vector<QuestionExample>& golds) {
  check_aligned(predictions.size(), golds.size(), "predictions/golds");
  if (predictions.empty()) return 0.0;
  int correct = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (strict_correct(predictions[i], golds[i])) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(predictions.size());
}

double evaluate_any_interpretation(
    const std::vector<Prediction>& predictions, const std::vector<QuestionExample>& golds,
    const std::vector<std::optional<InterpretationSet>>& isets) {
  check_aligned(predictions.size(), golds.size(), "predictions/golds");
  check_aligned(predictions.size(), isets.size(), "predictions/interpretation sets");
  if (predictions.empty()) return 0.0;
  int correct = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (any_correct(predictions[i], golds[i], isets[i])) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(predictions.size());
}

const char* bucket_name(ErrorBucket b) {
  switch (b) {
    case ErrorBucket::kAmbiguousEqualEvidence: return "ambiguous_equal_evidence";
    case ErrorBucket::kNoise: return "noise";
    case ErrorBucket::kSubjectSpan: return "subject_span";
    case ErrorBucket::kLowShot: return "low_shot";
    case ErrorBucket::kOther: return "other";
  }
  return "?";
}

ErrorBucket bucket_error(const Prediction& pred, const QuestionExample& gold,
                         const std::optional<InterpretationSet>& iset,
                         const std::map<RelationId, int>& train_relation_counts) {
  if (!pred.abstained && iset && iset->contains(pred.subject, pred.relation)) {
    return ErrorBucket::kAmbiguousEqualEvidence;
  }
  if (!iset) return ErrorBucket::kNoise;
  if (!pred.span || *pred.span != iset->span) return ErrorBucket::kSubjectSpan;
  auto it = train_relation_counts.find(gold.gold_relation);
  const int seen = it == train_relation_counts.end() ? 0 : it->second;
  if (seen < 10) return ErrorBucket::kLowShot;
  return ErrorBucket::kOther;
}

EvalReport evaluate(const std::vector<Prediction>& predictions,
                    const std::vector<QuestionExample>& golds,
                    const std::vector<std::optional<InterpretationSet>>& isets,
                    const std::map<RelationId, int>& train_relation_counts) {
  check_aligned(predictions.size(), golds.size(), "predictions/golds");
  check_aligned(predictions.size(), isets.size(), "predictions/interpretation sets");

  EvalReport report;
  report.total = static_cast<int>(predictions.size());
  int strict = 0;
  int any = 0;
  int abstained = 0;

  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const Prediction& p = predictions[i];
    const QuestionExample& gold = golds[i];
    EvalReport::Row row;
    row.id = gold.id;
    row.subject = p.abstained ? "-" : p.subject;
    row.relation = p.abstained ? "-" : p.relation;
    row.correct_strict = strict_correct(p, gold);
    row.correct_any = any_correct(p, gold, isets[i]);
    row.bucket = "-";

    if (p.abstained) ++abstained;
    if (row.correct_strict) ++strict;
    if (row.correct_any) ++any;
    if (!row.correct_strict) {
      ++report.error_count;
      ErrorBucket bucket = bucket_error(p, gold, isets[i], train_relation_counts);
      row.bucket = bucket_name(bucket);
      EvalReport::Bucket& b = report.buckets[row.bucket];
      ++b.count;
      if (static_cast<int>(b.sample_ids.size()) < EvalReport::kBucketSamples) {
        b.sample_ids.push_back(gold.id);
      }
    }
    report.rows.push_back(std::move(row));
  }

  if (report.total > 0) {
    report.strict_accuracy = static_cast<double>(strict) / report.total;
    report.any_interpretation_accuracy = static_cast<double>(any) / report.total;
    report.abstention_rate = static_cast<double>(abstained) / report.total;
  }
  return report;
}

std::map<RelationId, int> relation_frequencies(const std::vector<QuestionExample>& split) {
  std::map<RelationId, int> counts;
  for (const QuestionExample& q : split) ++counts[q.gold_relation];
  return counts;
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json buckets_json = nlohmann::json::object();
  for (const auto& [name, bucket] : buckets) {
    buckets_json[name] = {{"count", bucket.count}, {"sample_ids", bucket.sample_ids}};
  }
  return nlohmann::json{{"schema_version", 1},
                        {"total", total},
                        {"strict_accuracy", strict_accuracy},
                        {"any_interpretation_accuracy", any_interpretation_accuracy},
                        {"abstention_rate", abstention_rate},
                        {"errors", {{"total", error_count}, {"buckets", buckets_json}}}};
}

void EvalReport::write_predictions_tsv(std::ostream& out) const {
  for (const Row& row : rows) {
    out << row.id << '\t' << row.subject << '\t' << row.relation << '\t'
        << (row.correct_strict ? 1 : 0) << '\t' << (row.correct_any ? 1 : 0) << '\t'
        << row.bucket << '\n';
  }
}

}  // namespace factoid
