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

#ifndef FACTOID_TAGGER_H_
#define FACTOID_TAGGER_H_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "factoid/kg.hpp"
#include "factoid/nn/embedding.hpp"
#include "factoid/nn/lstm.hpp"
#include "factoid/text.hpp"
#include "factoid/trainlog.hpp"

namespace factoid {

inline constexpr int kNumTags = 2;  // label order fixed: I = 0, O = 1

// Emission scores for one sentence: n x 2 matrix, column per tag.
using EmissionMatrix = Eigen::MatrixXd;

// CRF chain weights, separate from how emissions are produced.
struct CrfWeights {
  Eigen::MatrixXd transitions;   // 2 x 2, T[prev][next]
  Eigen::VectorXd start_scores;  // 2
  Eigen::VectorXd end_scores;    // 2
};

// Subject-mention recognizer: frozen embeddings -> bidirectional encoder ->
// linear emission projection -> linear-chain CRF over IO tags.
struct TaggerModel {
  nn::EmbeddingTable embeddings;
  nn::BiEncoderParams encoder;
  Eigen::MatrixXd emission_weight;  // 2 x 2H
  Eigen::VectorXd emission_bias;    // 2
  CrfWeights crf;

  int hidden() const { return encoder.hidden(); }

  // Trainable parameters drawn from a seeded uniform(-0.1, 0.1); the
  // embedding table is taken as given and stays frozen.
  static TaggerModel init(nn::EmbeddingTable embeddings, int hidden_dim,
                          std::uint64_t seed);

  // Per-position tag scores for a sentence; fills the caches when given.
  EmissionMatrix emissions(const TokenSeq& tokens, nn::BiEncoderCache* cache = nullptr) const;
};

struct TagSequence {
  std::vector<IOTag> labels;
  double score = 0.0;  // unnormalized path score
};

// --- CRF core over an explicit emission matrix -----------------------------

// start[y1] + sum_i em(i, yi) + sum_i T[yi][yi+1] + end[yn].
double crf_sequence_score(const EmissionMatrix& emissions, const CrfWeights& w,
                          const std::vector<IOTag>& labels);

// log sum over all 2^n label sequences of exp(path score), via the forward
// recursion in log space.
double crf_log_partition(const EmissionMatrix& emissions, const CrfWeights& w);

struct CrfGrads {
  EmissionMatrix d_emissions;
  Eigen::MatrixXd d_transitions;
  Eigen::VectorXd d_start;
  Eigen::VectorXd d_end;
};

// Negative conditional log likelihood of the gold labels, with exact
// gradients (expected minus observed counts) when grads is given.
double crf_nll_core(const EmissionMatrix& emissions, const CrfWeights& w,
                    const std::vector<IOTag>& gold, CrfGrads* grads = nullptr);

// The k highest-scoring label sequences, scores non-increasing, exact ties
// broken by lexicographic label order with I < O. Fewer than k when 2^n < k.
std::vector<TagSequence> crf_viterbi_topk(const EmissionMatrix& emissions,
                                          const CrfWeights& w, int k);

// --- Model-level operations -------------------------------------------------

double sequence_score(const TaggerModel& model, const TokenSeq& tokens,
                      const std::vector<IOTag>& labels);
double log_partition(const TaggerModel& model, const TokenSeq& tokens);

struct TaggerGrads {
  nn::BiEncoderGrads encoder;
  Eigen::MatrixXd emission_weight;
  Eigen::VectorXd emission_bias;
  Eigen::MatrixXd transitions;
  Eigen::VectorXd start_scores;
  Eigen::VectorXd end_scores;

  void zero_like(const TaggerModel& model);
};

// Loss plus exact gradients for every trainable parameter, chaining the CRF
// gradients through the emission projection and the encoder.
double tagger_nll(const TaggerModel& model, const TokenSeq& tokens,
                  const std::vector<IOTag>& gold, TaggerGrads* grads = nullptr);

std::vector<TagSequence> viterbi_topk(const TaggerModel& model, const TokenSeq& tokens,
                                      int k);

// Spans of the top-k decodes in sequence-score order, deduplicated with
// first-occurrence order kept. All-O decodes contribute nothing.
std::vector<std::pair<TokenSpan, double>> topk_subject_spans(const TaggerModel& model,
                                                             const TokenSeq& tokens,
                                                             int k);

// --- Training ----------------------------------------------------------------

struct TaggerExample {
  TokenSeq tokens;
  std::vector<IOTag> labels;
};

// IO-labels each question via its gold-subject alias match; questions whose
// subject is never mentioned are dropped and counted.
struct TaggerDataset {
  std::vector<TaggerExample> examples;
  int skipped_no_alias_match = 0;
};
TaggerDataset build_tagger_dataset(const std::vector<QuestionExample>& questions,
                                   const KnowledgeGraph& kg);

struct TaggerTrainConfig {
  double lr = 1e-4;
  int patience = 3;
  int max_epochs = 30;
  std::uint64_t seed = 13;
  int hidden_dim = 128;
  bool amsgrad = false;
};

// Exact-span accuracy of the top-1 decode: predicted span set equals the
// gold span set.
double tagger_span_accuracy(const TaggerModel& model,
                            const std::vector<TaggerExample>& examples);

// Minimizes mean NLL with Adam, halving the learning rate on validation
// plateaus; returns the best-validation checkpoint. Deterministic per seed.
TaggerModel train_tagger(const std::vector<TaggerExample>& train,
                         const std::vector<TaggerExample>& val,
                         nn::EmbeddingTable embeddings, const TaggerTrainConfig& config,
                         std::vector<TrainLogEntry>* log = nullptr);

}  // namespace factoid

#endif  // FACTOID_TAGGER_H_
