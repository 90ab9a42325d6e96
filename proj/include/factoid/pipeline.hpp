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

#ifndef FACTOID_PIPELINE_H_
#define FACTOID_PIPELINE_H_

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "factoid/audit.hpp"
#include "factoid/classifier.hpp"
#include "factoid/kg.hpp"
#include "factoid/tagger.hpp"
#include "factoid/text.hpp"

namespace factoid {

struct Prediction {
  bool abstained = true;
  EntityId subject;
  RelationId relation;
  std::optional<TokenSpan> span;  // chosen mention span, when any
  TokenSeq alias;                 // chosen alias tokens
  double probability = 0.0;       // classifier probability of `relation`
  std::map<RelationId, double> candidate_probs;  // masked softmax over R
};

// Top-k span recognition -> first span matching a KG alias (longest-n-gram
// fallback when none) -> masked relation classification -> subject chosen by
// fact count, ties by lexicographic id. Abstains rather than guessing when no
// alias or no known relation is found.
Prediction predict(const TokenSeq& tokens, const TaggerModel& tagger,
                   const ClassifierModel& clf, const KnowledgeGraph& kg, int k);

// Fraction of predictions whose (subject, relation) equals gold; abstentions
// count as wrong. Throws std::invalid_argument on length mismatch.
double evaluate_strict(const std::vector<Prediction>& predictions,
                       const std::vector<QuestionExample>& golds);

// A prediction is also correct when it is a member of the question's
// interpretation set; never below strict accuracy.
double evaluate_any_interpretation(
    const std::vector<Prediction>& predictions,
    const std::vector<QuestionExample>& golds,
    const std::vector<std::optional<InterpretationSet>>& isets);

enum class ErrorBucket {
  kAmbiguousEqualEvidence,  // prediction is a valid interpretation
  kNoise,                   // question never mentions its subject
  kSubjectSpan,             // predicted span differs from the gold alias span
  kLowShot,                 // gold relation seen < 10 times in training
  kOther,
};

const char* bucket_name(ErrorBucket b);

// Buckets one strict failure, applying the precedence in declaration order.
ErrorBucket bucket_error(const Prediction& pred, const QuestionExample& gold,
                         const std::optional<InterpretationSet>& iset,
                         const std::map<RelationId, int>& train_relation_counts);

struct EvalReport {
  int total = 0;
  double strict_accuracy = 0.0;
  double any_interpretation_accuracy = 0.0;
  double abstention_rate = 0.0;
  int error_count = 0;

  struct Bucket {
    int count = 0;
    std::vector<int> sample_ids;  // up to kBucketSamples question ids
  };
  static constexpr int kBucketSamples = 5;
  std::map<std::string, Bucket> buckets;

  struct Row {
    int id = 0;
    std::string subject;   // "-" when abstained
    std::string relation;  // "-" when abstained
    bool correct_strict = false;
    bool correct_any = false;
    std::string bucket;  // "-" when correct
  };
  std::vector<Row> rows;

  nlohmann::json to_json() const;
  // `id<TAB>subject<TAB>relation<TAB>correct_strict<TAB>correct_any<TAB>bucket`
  void write_predictions_tsv(std::ostream& out) const;
};

EvalReport evaluate(const std::vector<Prediction>& predictions,
                    const std::vector<QuestionExample>& golds,
                    const std::vector<std::optional<InterpretationSet>>& isets,
                    const std::map<RelationId, int>& train_relation_counts);

// Gold-relation frequencies of a training split, for low-shot bucketing.
std::map<RelationId, int> relation_frequencies(const std::vector<QuestionExample>& split);

}  // namespace factoid

#endif  // FACTOID_PIPELINE_H_
