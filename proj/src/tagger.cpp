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

#include "factoid/tagger.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "factoid/errors.hpp"
#include "factoid/nn/mathutil.hpp"
#include "factoid/nn/optimizer.hpp"
#include "factoid/nn/schedule.hpp"

namespace factoid {

namespace {

int check_lengths(const EmissionMatrix& emissions, const std::vector<IOTag>& labels) {
  const int n = static_cast<int>(emissions.rows());
  if (n == 0) throw std::invalid_argument("crf: empty sentence");
  if (static_cast<int>(labels.size()) != n) {
    throw std::invalid_argument("crf: " + std::to_string(labels.size()) + " labels for " +
                                std::to_string(n) + " tokens");
  }
  return n;
}

int tag_index(IOTag t) { return static_cast<int>(t); }

}  // namespace

TaggerModel TaggerModel::init(nn::EmbeddingTable embeddings, int hidden_dim,
                              std::uint64_t seed) {
  TaggerModel model;
  model.embeddings = std::move(embeddings);
  nn::Rng rng(seed);
  model.encoder.init(model.embeddings.dim(), hidden_dim, rng);
  model.emission_weight.resize(kNumTags, 2 * hidden_dim);
  model.emission_bias.resize(kNumTags);
  nn::fill_uniform(model.emission_weight, -0.1, 0.1, rng);
  nn::fill_uniform(model.emission_bias, -0.1, 0.1, rng);
  // Zero chain weights make the degenerate case a plain per-token scorer.
  model.crf.transitions = Eigen::MatrixXd::Zero(kNumTags, kNumTags);
  model.crf.start_scores = Eigen::VectorXd::Zero(kNumTags);
  model.crf.end_scores = Eigen::VectorXd::Zero(kNumTags);
  return model;
}

EmissionMatrix TaggerModel::emissions(const TokenSeq& tokens, nn::BiEncoderCache* cache) const {
  Eigen::MatrixXd inputs = embeddings.embed(tokens);
  nn::BiEncoderOut enc = nn::bi_encode(encoder, inputs, cache);
  EmissionMatrix em = enc.outputs * emission_weight.transpose();
  em.rowwise() += emission_bias.transpose();
  return em;
}

// --- CRF core ---------------------------------------------------------------

double crf_sequence_score(const EmissionMatrix& emissions, const CrfWeights& w,
                          const std::vector<IOTag>& labels) {
  const int n = check_lengths(emissions, labels);
  double score = w.start_scores[tag_index(labels[0])];
  for (int t = 0; t < n; ++t) {
    score += emissions(t, tag_index(labels[static_cast<std::size_t>(t)]));
    if (t + 1 < n) {
      score += w.transitions(tag_index(labels[static_cast<std::size_t>(t)]),
                             tag_index(labels[static_cast<std::size_t>(t) + 1]));
    }
  }
  score += w.end_scores[tag_index(labels[static_cast<std::size_t>(n) - 1])];
  return score;
}

double crf_log_partition(const EmissionMatrix& emissions, const CrfWeights& w) {
  const int n = static_cast<int>(emissions.rows());
  if (n == 0) throw std::invalid_argument("crf: empty sentence");

  Eigen::VectorXd alpha = w.start_scores + emissions.row(0).transpose();
  Eigen::VectorXd scratch(kNumTags);
  for (int t = 1; t < n; ++t) {
    Eigen::VectorXd next(kNumTags);
    for (int y = 0; y < kNumTags; ++y) {
      for (int p = 0; p < kNumTags; ++p) scratch[p] = alpha[p] + w.transitions(p, y);
      next[y] = nn::log_sum_exp(scratch) + emissions(t, y);
    }
    alpha = next;
  }
  return nn::log_sum_exp(alpha + w.end_scores);
}

double crf_nll_core(const EmissionMatrix& emissions, const CrfWeights& w,
                    const std::vector<IOTag>& gold, CrfGrads* grads) {
  const int n = check_lengths(emissions, gold);

  // Forward and backward lattices in log space.
  Eigen::MatrixXd alpha(n, kNumTags);
  alpha.row(0) = (w.start_scores + emissions.row(0).transpose()).transpose();
  Eigen::VectorXd scratch(kNumTags);
  for (int t = 1; t < n; ++t) {
    for (int y = 0; y < kNumTags; ++y) {
      for (int p = 0; p < kNumTags; ++p) scratch[p] = alpha(t - 1, p) + w.transitions(p, y);
      alpha(t, y) = nn::log_sum_exp(scratch) + emissions(t, y);
    }
  }
  const double log_z = nn::log_sum_exp(alpha.row(n - 1).transpose() + w.end_scores);
  const double loss = log_z - crf_sequence_score(emissions, w, gold);

  if (grads) {
    Eigen::MatrixXd beta(n, kNumTags);
    beta.row(n - 1) = w.end_scores.transpose();
    for (int t = n - 2; t >= 0; --t) {
      for (int y = 0; y < kNumTags; ++y) {
        for (int c = 0; c < kNumTags; ++c) {
          scratch[c] = w.transitions(y, c) + emissions(t + 1, c) + beta(t + 1, c);
        }
        beta(t, y) = nn::log_sum_exp(scratch);
      }
    }

    // Expected minus observed counts.
    grads->d_emissions = Eigen::MatrixXd::Zero(n, kNumTags);
    grads->d_transitions = Eigen::MatrixXd::Zero(kNumTags, kNumTags);
    grads->d_start = Eigen::VectorXd::Zero(kNumTags);
    grads->d_end = Eigen::VectorXd::Zero(kNumTags);

    for (int t = 0; t < n; ++t) {
      for (int y = 0; y < kNumTags; ++y) {
        grads->d_emissions(t, y) = std::exp(alpha(t, y) + beta(t, y) - log_z);
      }
      grads->d_emissions(t, tag_index(gold[static_cast<std::size_t>(t)])) -= 1.0;
    }
    for (int t = 0; t + 1 < n; ++t) {
      for (int p = 0; p < kNumTags; ++p) {
        for (int c = 0; c < kNumTags; ++c) {
          grads->d_transitions(p, c) += std::exp(alpha(t, p) + w.transitions(p, c) +
                                                 emissions(t + 1, c) + beta(t + 1, c) - log_z);
        }
      }
      grads->d_transitions(tag_index(gold[static_cast<std::size_t>(t)]),
                           tag_index(gold[static_cast<std::size_t>(t) + 1])) -= 1.0;
    }
    for (int y = 0; y < kNumTags; ++y) {
      grads->d_start[y] = std::exp(alpha(0, y) + beta(0, y) - log_z);
      grads->d_end[y] = std::exp(alpha(n - 1, y) + beta(n - 1, y) - log_z);
    }
    grads->d_start[tag_index(gold[0])] -= 1.0;
    grads->d_end[tag_index(gold[static_cast<std::size_t>(n) - 1])] -= 1.0;
  }
  return loss;
}

namespace {

// Partial decode: score so far plus the labels that produced it. Ordering is
// (score descending, labels ascending) so exact ties come out with I before O.
struct Candidate {
  double score;
  std::vector<IOTag> labels;

  bool operator<(const Candidate& other) const {
    if (score != other.score) return score > other.score;
    return labels < other.labels;
  }
};

void keep_best(std::vector<Candidate>& cands, int k) {
  std::sort(cands.begin(), cands.end());
  if (static_cast<int>(cands.size()) > k) cands.resize(static_cast<std::size_t>(k));
}

}  // namespace

std::vector<TagSequence> crf_viterbi_topk(const EmissionMatrix& emissions, const CrfWeights& w,
                                          int k) {
  const int n = static_cast<int>(emissions.rows());
  if (n == 0) throw std::invalid_argument("crf: empty sentence");
  if (k < 1) throw std::invalid_argument("crf_viterbi_topk: k must be >= 1");

  // Per ending label, the k best partial paths. Two partials ending on the
  // same label tie exactly when all their completions tie, so pruning each
  // cell to k keeps the global top-k exact, tie-break included.
  std::array<std::vector<Candidate>, kNumTags> beams;
  for (int y = 0; y < kNumTags; ++y) {
    beams[static_cast<std::size_t>(y)].push_back(
        Candidate{w.start_scores[y] + emissions(0, y), {static_cast<IOTag>(y)}});
  }

  for (int t = 1; t < n; ++t) {
    std::array<std::vector<Candidate>, kNumTags> next;
    for (int y = 0; y < kNumTags; ++y) {
      for (int p = 0; p < kNumTags; ++p) {
        for (const Candidate& cand : beams[static_cast<std::size_t>(p)]) {
          Candidate ext;
          ext.score = cand.score + w.transitions(p, y) + emissions(t, y);
          ext.labels = cand.labels;
          ext.labels.push_back(static_cast<IOTag>(y));
          next[static_cast<std::size_t>(y)].push_back(std::move(ext));
        }
      }
      keep_best(next[static_cast<std::size_t>(y)], k);
    }
    beams = std::move(next);
  }

  std::vector<Candidate> finals;
  for (int y = 0; y < kNumTags; ++y) {
    for (const Candidate& cand : beams[static_cast<std::size_t>(y)]) {
      finals.push_back(Candidate{cand.score + w.end_scores[y], cand.labels});
    }
  }
  keep_best(finals, k);

  std::vector<TagSequence> out;
  out.reserve(finals.size());
  for (Candidate& cand : finals) {
    out.push_back(TagSequence{std::move(cand.labels), cand.score});
  }
  return out;
}

// --- Model-level wrappers ----------------------------------------------------

double sequence_score(const TaggerModel& model, const TokenSeq& tokens,
                      const std::vector<IOTag>& labels) {
  return crf_sequence_score(model.emissions(tokens), model.crf, labels);
}

double log_partition(const TaggerModel& model, const TokenSeq& tokens) {
  return crf_log_partition(model.emissions(tokens), model.crf);
}

void TaggerGrads::zero_like(const TaggerModel& model) {
  encoder.zero_like(model.encoder);
  emission_weight = Eigen::MatrixXd::Zero(model.emission_weight.rows(),
                                          model.emission_weight.cols());
  emission_bias = Eigen::VectorXd::Zero(model.emission_bias.size());
  transitions = Eigen::MatrixXd::Zero(kNumTags, kNumTags);
  start_scores = Eigen::VectorXd::Zero(kNumTags);
  end_scores = Eigen::VectorXd::Zero(kNumTags);
}

double tagger_nll(const TaggerModel& model, const TokenSeq& tokens,
                  const std::vector<IOTag>& gold, TaggerGrads* grads) {
  if (!grads) return crf_nll_core(model.emissions(tokens), model.crf, gold);

  nn::BiEncoderCache cache;
  Eigen::MatrixXd inputs = model.embeddings.embed(tokens);
  nn::BiEncoderOut enc = nn::bi_encode(model.encoder, inputs, &cache);
  EmissionMatrix em = enc.outputs * model.emission_weight.transpose();
  em.rowwise() += model.emission_bias.transpose();

  CrfGrads crf_grads;
  const double loss = crf_nll_core(em, model.crf, gold, &crf_grads);

  grads->transitions += crf_grads.d_transitions;
  grads->start_scores += crf_grads.d_start;
  grads->end_scores += crf_grads.d_end;
  grads->emission_weight.noalias() += crf_grads.d_emissions.transpose() * enc.outputs;
  grads->emission_bias += crf_grads.d_emissions.colwise().sum().transpose();

  Eigen::MatrixXd d_outputs = crf_grads.d_emissions * model.emission_weight;
  Eigen::VectorXd d_final = Eigen::VectorXd::Zero(2 * model.hidden());
  nn::bi_encode_backward(model.encoder, cache, d_outputs, d_final, &grads->encoder);
  return loss;
}

std::vector<TagSequence> viterbi_topk(const TaggerModel& model, const TokenSeq& tokens,
                                      int k) {
  return crf_viterbi_topk(model.emissions(tokens), model.crf, k);
}

std::vector<std::pair<TokenSpan, double>> topk_subject_spans(const TaggerModel& model,
                                                             const TokenSeq& tokens, int k) {
  std::vector<std::pair<TokenSpan, double>> out;
  for (const TagSequence& seq : viterbi_topk(model, tokens, k)) {
    for (const TokenSpan& span : spans_from_tags(seq.labels)) {
      bool seen = false;
      for (const auto& [prev, score] : out) {
        if (prev == span) {
          seen = true;
          break;
        }
      }
      if (!seen) out.emplace_back(span, seq.score);
    }
  }
  return out;
}

// --- Training ----------------------------------------------------------------

TaggerDataset build_tagger_dataset(const std::vector<QuestionExample>& questions,
                                   const KnowledgeGraph& kg) {
  TaggerDataset ds;
  for (const QuestionExample& q : questions) {
    std::optional<AliasMatch> m = match_subject_alias(q, kg);
    if (!m || q.tokens.empty()) {
      ++ds.skipped_no_alias_match;
      continue;
    }
    TaggerExample ex;
    ex.tokens = q.tokens;
    ex.labels.assign(q.tokens.size(), IOTag::kOutside);
    for (int i = m->span.start; i < m->span.end; ++i) {
      ex.labels[static_cast<std::size_t>(i)] = IOTag::kInside;
    }
    ds.examples.push_back(std::move(ex));
  }
  return ds;
}

double tagger_span_accuracy(const TaggerModel& model,
                            const std::vector<TaggerExample>& examples) {
  if (examples.empty()) return 0.0;
  int correct = 0;
  for (const TaggerExample& ex : examples) {
    std::vector<TagSequence> top = viterbi_topk(model, ex.tokens, 1);
    if (!top.empty() && spans_from_tags(top[0].labels) == spans_from_tags(ex.labels)) {
      ++correct;
    }
  }
  return static_cast<double>(correct) / static_cast<double>(examples.size());
}

namespace {

std::vector<nn::ParamView> tagger_views(TaggerModel& model, TaggerGrads& grads) {
  return {
      {"encoder.fwd.w_input", model.encoder.fwd.w_input.data(), grads.encoder.fwd.w_input.data(),
       model.encoder.fwd.w_input.size()},
      {"encoder.fwd.w_hidden", model.encoder.fwd.w_hidden.data(),
       grads.encoder.fwd.w_hidden.data(), model.encoder.fwd.w_hidden.size()},
      {"encoder.fwd.bias", model.encoder.fwd.bias.data(), grads.encoder.fwd.bias.data(),
       model.encoder.fwd.bias.size()},
      {"encoder.bwd.w_input", model.encoder.bwd.w_input.data(), grads.encoder.bwd.w_input.data(),
       model.encoder.bwd.w_input.size()},
      {"encoder.bwd.w_hidden", model.encoder.bwd.w_hidden.data(),
       grads.encoder.bwd.w_hidden.data(), model.encoder.bwd.w_hidden.size()},
      {"encoder.bwd.bias", model.encoder.bwd.bias.data(), grads.encoder.bwd.bias.data(),
       model.encoder.bwd.bias.size()},
      {"emission.weight", model.emission_weight.data(), grads.emission_weight.data(),
       model.emission_weight.size()},
      {"emission.bias", model.emission_bias.data(), grads.emission_bias.data(),
       model.emission_bias.size()},
      {"crf.transitions", model.crf.transitions.data(), grads.transitions.data(),
       model.crf.transitions.size()},
      {"crf.start", model.crf.start_scores.data(), grads.start_scores.data(),
       model.crf.start_scores.size()},
      {"crf.end", model.crf.end_scores.data(), grads.end_scores.data(),
       model.crf.end_scores.size()},
  };
}

}  // namespace

TaggerModel train_tagger(const std::vector<TaggerExample>& train,
                         const std::vector<TaggerExample>& val,
                         nn::EmbeddingTable embeddings, const TaggerTrainConfig& config,
                         std::vector<TrainLogEntry>* log) {
  if (train.empty()) throw DataError("train_tagger: empty training set");
  for (const TaggerExample& ex : train) {
    bool any_inside = false;
    for (IOTag t : ex.labels) any_inside |= (t == IOTag::kInside);
    if (ex.tokens.empty() || ex.labels.size() != ex.tokens.size() || !any_inside) {
      throw DataError("train_tagger: example without a subject mention; the dataset "
                      "builder should have dropped it");
    }
  }

  TaggerModel model = TaggerModel::init(std::move(embeddings), config.hidden_dim, config.seed);
  const std::vector<TaggerExample>& val_set = val.empty() ? train : val;

  nn::AdamConfig adam;
  adam.lr = config.lr;
  adam.amsgrad = config.amsgrad;
  nn::AdamOptimizer optimizer(adam);
  nn::PlateauScheduler plateau(config.patience);
  nn::Rng shuffle_rng(config.seed + 1);

  TaggerModel best = model;
  double best_acc = -1.0;

  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  TaggerGrads grads;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    shuffle_rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t idx : order) {
      const TaggerExample& ex = train[idx];
      grads.zero_like(model);
      double loss = tagger_nll(model, ex.tokens, ex.labels, &grads);
      if (!std::isfinite(loss)) {
        throw NumericError("train_tagger: non-finite loss at epoch " + std::to_string(epoch));
      }
      loss_sum += loss;
      optimizer.step(tagger_views(model, grads));
    }

    TrainLogEntry entry;
    entry.epoch = epoch;
    entry.train_loss = loss_sum / static_cast<double>(train.size());
    entry.val_accuracy = tagger_span_accuracy(model, val_set);
    if (entry.val_accuracy > best_acc) {
      best_acc = entry.val_accuracy;
      best = model;
    }
    if (plateau.observe(entry.val_accuracy)) {
      optimizer.set_lr(optimizer.lr() / 2.0);
      entry.event = "halve_lr";
    }
    entry.lr = optimizer.lr();
    if (log) log->push_back(entry);
  }
  return config.max_epochs > 0 ? best : model;
}

}  // namespace factoid
