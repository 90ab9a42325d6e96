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

#ifndef FACTOID_CLASSIFIER_H_
#define FACTOID_CLASSIFIER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "factoid/kg.hpp"
#include "factoid/nn/batchnorm.hpp"
#include "factoid/nn/embedding.hpp"
#include "factoid/nn/lstm.hpp"
#include "factoid/text.hpp"
#include "factoid/trainlog.hpp"

namespace factoid {

// Relation classifier over abstracted predicates: encoder final state ->
// batch norm -> linear scores -> softmax restricted to a candidate set.
struct ClassifierModel {
  nn::EmbeddingTable embeddings;
  nn::BiEncoderParams encoder;
  nn::BatchNormParams bn;           // over the 2H final state
  Eigen::MatrixXd output_weight;    // |relations| x 2H
  Eigen::VectorXd output_bias;      // |relations|
  std::vector<RelationId> relations;  // column -> relation path
  std::unordered_map<RelationId, int> relation_index;

  int hidden() const { return encoder.hidden(); }

  static ClassifierModel init(nn::EmbeddingTable embeddings,
                              std::vector<RelationId> relation_vocab, int hidden_dim,
                              std::uint64_t seed);
};

struct ClfExample {
  PredicateTemplate tmpl;
  std::set<RelationId> candidates;  // the set R; gold is always a member
  RelationId gold;
};

struct ClfDataset {
  std::vector<ClfExample> examples;
  int skipped_no_alias_match = 0;
  int skipped_gold_not_candidate = 0;
};

// For each question with a gold-subject alias match: abstract the alias span,
// collect candidates = relations over all entities sharing the alias, emit
// when the gold relation is among them. Everything else is skipped and
// counted.
ClfDataset build_clf_dataset(const std::vector<QuestionExample>& questions,
                             const KnowledgeGraph& kg);

struct Classification {
  // Probabilities over `allowed` only; they sum to 1 when at least one
  // allowed relation is known to the model. Relations outside `allowed` are
  // simply absent (probability 0).
  std::map<RelationId, double> probs;
  // Allowed relations without a model column; carried with probability 0.
  std::vector<RelationId> unknown_relations;

  // Argmax, ties broken by lexicographic relation path; empty when no
  // allowed relation is known.
  std::optional<RelationId> top() const;
};

// Softmax over the score columns of `allowed` only, batch norm in
// running-stats mode. Throws std::invalid_argument when `allowed` is empty.
Classification classify(const ClassifierModel& model, const PredicateTemplate& tmpl,
                        const std::set<RelationId>& allowed);

struct ClassifierGrads {
  nn::BiEncoderGrads encoder;
  Eigen::VectorXd bn_scale;
  Eigen::VectorXd bn_shift;
  Eigen::MatrixXd output_weight;
  Eigen::VectorXd output_bias;

  void zero_like(const ClassifierModel& m);
};

// Mean candidate-masked NLL over one batch. Train mode normalizes by batch
// statistics (and advances the running estimates); exact gradients for all
// trainable blocks when grads is given.
double classifier_batch_loss(ClassifierModel& model,
                             const std::vector<const ClfExample*>& batch, bool train_mode,
                             ClassifierGrads* grads = nullptr);

struct ClassifierTrainConfig {
  double lr = 1e-4;
  bool amsgrad = true;
  int batch_size = 16;
  int patience = 3;
  int max_epochs = 30;
  std::uint64_t seed = 13;
  int hidden_dim = 128;
};

double classifier_accuracy(const ClassifierModel& model,
                           const std::vector<ClfExample>& examples);

// Minimizes mean NLL of gold under the candidate-masked softmax with
// Adam/AMSGrad, doubling the batch size (capped at the dataset size) on
// validation plateaus; returns the best-validation checkpoint.
ClassifierModel train_classifier(const std::vector<ClfExample>& train,
                                 const std::vector<ClfExample>& val,
                                 nn::EmbeddingTable embeddings,
                                 const ClassifierTrainConfig& config,
                                 std::vector<TrainLogEntry>* log = nullptr);

}  // namespace factoid

#endif  // FACTOID_CLASSIFIER_H_
