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

#include "factoid/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "factoid/errors.hpp"
#include "factoid/nn/mathutil.hpp"
#include "factoid/nn/optimizer.hpp"
#include "factoid/nn/schedule.hpp"

namespace factoid {

ClassifierModel ClassifierModel::init(nn::EmbeddingTable embeddings,
                                      std::vector<RelationId> relation_vocab, int hidden_dim,
                                      std::uint64_t seed) {
  if (relation_vocab.empty()) {
    throw DataError("classifier needs at least one relation column");
  }
  ClassifierModel model;
  model.embeddings = std::move(embeddings);
  model.relations = std::move(relation_vocab);
  std::sort(model.relations.begin(), model.relations.end());
  model.relations.erase(std::unique(model.relations.begin(), model.relations.end()),
                        model.relations.end());
  for (std::size_t i = 0; i < model.relations.size(); ++i) {
    model.relation_index.emplace(model.relations[i], static_cast<int>(i));
  }

  nn::Rng rng(seed);
  model.encoder.init(model.embeddings.dim(), hidden_dim, rng);
  model.bn.init(2 * hidden_dim);
  model.output_weight.resize(static_cast<Eigen::Index>(model.relations.size()), 2 * hidden_dim);
  model.output_bias.resize(static_cast<Eigen::Index>(model.relations.size()));
  nn::fill_uniform(model.output_weight, -0.1, 0.1, rng);
  nn::fill_uniform(model.output_bias, -0.1, 0.1, rng);
  return model;
}

ClfDataset build_clf_dataset(const std::vector<QuestionExample>& questions,
                             const KnowledgeGraph& kg) {
  ClfDataset ds;
  for (const QuestionExample& q : questions) {
    std::optional<AliasMatch> m = match_subject_alias(q, kg);
    if (!m) {
      ++ds.skipped_no_alias_match;
      continue;
    }
    std::set<EntityId> subjects = kg.entities_with_alias(m->alias);
    std::set<RelationId> candidates = kg.relations_over(subjects);
    if (!candidates.count(q.gold_relation)) {
      ++ds.skipped_gold_not_candidate;
      continue;
    }
    ClfExample ex;
    ex.tmpl = abstract_predicate(q.tokens, m->span);
    ex.candidates = std::move(candidates);
    ex.gold = q.gold_relation;
    ds.examples.push_back(std::move(ex));
  }
  return ds;
}

std::optional<RelationId> Classification::top() const {
  std::optional<RelationId> best;
  double best_p = -1.0;
  for (const auto& [relation, p] : probs) {  // std::map: lexicographic order
    if (p > best_p) {
      best_p = p;
      best = relation;
    }
  }
  return best;
}

namespace {

// Scores for one template with batch norm in running-stats mode.
Eigen::VectorXd infer_scores(const ClassifierModel& model, const PredicateTemplate& tmpl) {
  Eigen::MatrixXd inputs = model.embeddings.embed(tmpl.tokens);
  nn::BiEncoderOut enc = nn::bi_encode(model.encoder, inputs);
  Eigen::MatrixXd normed = nn::batchnorm_infer(model.bn, enc.final_state.transpose());
  return model.output_weight * normed.row(0).transpose() + model.output_bias;
}

}  // namespace

Classification classify(const ClassifierModel& model, const PredicateTemplate& tmpl,
                        const std::set<RelationId>& allowed) {
  if (allowed.empty()) {
    throw std::invalid_argument("classify: empty candidate relation set");
  }
  Eigen::VectorXd scores = infer_scores(model, tmpl);

  Classification result;
  std::vector<std::pair<RelationId, double>> known;
  for (const RelationId& r : allowed) {
    auto it = model.relation_index.find(r);
    if (it == model.relation_index.end()) {
      result.unknown_relations.push_back(r);
      result.probs[r] = 0.0;
    } else {
      known.emplace_back(r, scores[it->second]);
    }
  }
  if (known.empty()) return result;  // caller sees all-zero probabilities

  Eigen::VectorXd zs(static_cast<Eigen::Index>(known.size()));
  for (std::size_t i = 0; i < known.size(); ++i) zs[static_cast<Eigen::Index>(i)] = known[i].second;
  const double log_z = nn::log_sum_exp(zs);
  for (std::size_t i = 0; i < known.size(); ++i) {
    result.probs[known[i].first] = std::exp(known[i].second - log_z);
  }
  return result;
}

double classifier_accuracy(const ClassifierModel& model,
                           const std::vector<ClfExample>& examples) {
  if (examples.empty()) return 0.0;
  int correct = 0;
  for (const ClfExample& ex : examples) {
    std::optional<RelationId> top = classify(model, ex.tmpl, ex.candidates).top();
    if (top && *top == ex.gold) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(examples.size());
}

void ClassifierGrads::zero_like(const ClassifierModel& m) {
  encoder.zero_like(m.encoder);
  bn_scale = Eigen::VectorXd::Zero(m.bn.scale.size());
  bn_shift = Eigen::VectorXd::Zero(m.bn.shift.size());
  output_weight = Eigen::MatrixXd::Zero(m.output_weight.rows(), m.output_weight.cols());
  output_bias = Eigen::VectorXd::Zero(m.output_bias.size());
}

namespace {

std::vector<nn::ParamView> classifier_views(ClassifierModel& model, ClassifierGrads& grads) {
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
      {"bn.scale", model.bn.scale.data(), grads.bn_scale.data(), model.bn.scale.size()},
      {"bn.shift", model.bn.shift.data(), grads.bn_shift.data(), model.bn.shift.size()},
      {"output.weight", model.output_weight.data(), grads.output_weight.data(),
       model.output_weight.size()},
      {"output.bias", model.output_bias.data(), grads.output_bias.data(),
       model.output_bias.size()},
  };
}

}  // namespace

double classifier_batch_loss(ClassifierModel& model,
                             const std::vector<const ClfExample*>& batch, bool train_mode,
                             ClassifierGrads* grads) {
  const int b = static_cast<int>(batch.size());
  const int h2 = 2 * model.hidden();

  std::vector<nn::BiEncoderCache> caches(static_cast<std::size_t>(b));
  Eigen::MatrixXd finals(b, h2);
  for (int i = 0; i < b; ++i) {
    Eigen::MatrixXd inputs = model.embeddings.embed(batch[static_cast<std::size_t>(i)]->tmpl.tokens);
    nn::BiEncoderOut enc =
        nn::bi_encode(model.encoder, inputs, grads ? &caches[static_cast<std::size_t>(i)] : nullptr);
    finals.row(i) = enc.final_state.transpose();
  }

  nn::BatchNormCache bn_cache;
  Eigen::MatrixXd normed = train_mode ? nn::batchnorm_train(model.bn, finals, &bn_cache)
                                      : nn::batchnorm_infer(model.bn, finals);

  double loss_sum = 0.0;
  Eigen::MatrixXd d_normed = Eigen::MatrixXd::Zero(b, h2);
  for (int i = 0; i < b; ++i) {
    const ClfExample& ex = *batch[static_cast<std::size_t>(i)];
    Eigen::VectorXd scores = model.output_weight * normed.row(i).transpose() + model.output_bias;

    std::vector<int> cols;
    int gold_col = -1;
    for (const RelationId& r : ex.candidates) {
      auto it = model.relation_index.find(r);
      if (it == model.relation_index.end()) continue;
      if (r == ex.gold) gold_col = static_cast<int>(cols.size());
      cols.push_back(it->second);
    }
    if (gold_col < 0) {
      throw DataError("classifier training example whose gold relation has no column");
    }
    Eigen::VectorXd masked(static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
      masked[static_cast<Eigen::Index>(c)] = scores[cols[c]];
    }
    const double log_z = nn::log_sum_exp(masked);
    loss_sum += log_z - masked[gold_col];

    if (grads) {
      // dscore = softmax - onehot(gold), only over candidate columns.
      for (std::size_t c = 0; c < cols.size(); ++c) {
        double d = std::exp(masked[static_cast<Eigen::Index>(c)] - log_z) -
                   (static_cast<int>(c) == gold_col ? 1.0 : 0.0);
        d /= static_cast<double>(b);  // mean over the batch
        grads->output_weight.row(cols[c]) += d * normed.row(i);
        grads->output_bias[cols[c]] += d;
        d_normed.row(i) += d * model.output_weight.row(cols[c]);
      }
    }
  }

  if (grads) {
    Eigen::MatrixXd d_finals;
    if (train_mode) {
      d_finals = nn::batchnorm_backward(model.bn, bn_cache, d_normed, &grads->bn_scale,
                                        &grads->bn_shift);
    } else {
      Eigen::RowVectorXd factor =
          ((model.bn.running_var.transpose().array() + model.bn.epsilon).rsqrt() *
           model.bn.scale.transpose().array())
              .matrix();
      d_finals = d_normed.array().rowwise() * factor.array();
    }
    for (int i = 0; i < b; ++i) {
      Eigen::MatrixXd d_outputs = Eigen::MatrixXd::Zero(caches[static_cast<std::size_t>(i)].inputs.rows(), h2);
      nn::bi_encode_backward(model.encoder, caches[static_cast<std::size_t>(i)], d_outputs,
                             d_finals.row(i).transpose(), &grads->encoder);
    }
  }
  return loss_sum / static_cast<double>(b);
}

ClassifierModel train_classifier(const std::vector<ClfExample>& train,
                                 const std::vector<ClfExample>& val,
                                 nn::EmbeddingTable embeddings,
                                 const ClassifierTrainConfig& config,
                                 std::vector<TrainLogEntry>* log) {
  if (train.empty()) throw DataError("train_classifier: empty training set");

  std::vector<RelationId> vocab;
  for (const ClfExample& ex : train) {
    for (const RelationId& r : ex.candidates) vocab.push_back(r);
  }
  ClassifierModel model = ClassifierModel::init(std::move(embeddings), std::move(vocab),
                                                config.hidden_dim, config.seed);
  const std::vector<ClfExample>& val_set = val.empty() ? train : val;

  nn::AdamConfig adam;
  adam.lr = config.lr;
  adam.amsgrad = config.amsgrad;
  nn::AdamOptimizer optimizer(adam);
  nn::PlateauScheduler plateau(config.patience);
  nn::Rng shuffle_rng(config.seed + 1);

  const int n = static_cast<int>(train.size());
  int batch_size = std::min(std::max(config.batch_size, 2), n < 2 ? 2 : n);

  ClassifierModel best = model;
  double best_acc = -1.0;

  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  ClassifierGrads grads;
  for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
    shuffle_rng.shuffle(order);

    double loss_sum = 0.0;
    int batches = 0;
    std::size_t begin = 0;
    while (begin < order.size()) {
      std::size_t end = std::min(begin + static_cast<std::size_t>(batch_size), order.size());
      // A trailing singleton has no batch variance; fold it into this batch.
      if (order.size() - end == 1) end = order.size();
      std::vector<const ClfExample*> batch;
      batch.reserve(end - begin);
      for (std::size_t i = begin; i < end; ++i) batch.push_back(&train[order[i]]);
      begin = end;
      if (batch.size() < 2) break;  // only possible when the dataset itself is a singleton

      grads.zero_like(model);
      double loss = classifier_batch_loss(model, batch, /*train_mode=*/true, &grads);
      if (!std::isfinite(loss)) {
        throw NumericError("train_classifier: non-finite loss at epoch " +
                           std::to_string(epoch));
      }
      loss_sum += loss;
      ++batches;
      optimizer.step(classifier_views(model, grads));
    }

    TrainLogEntry entry;
    entry.epoch = epoch;
    entry.train_loss = batches > 0 ? loss_sum / batches : 0.0;
    entry.val_accuracy = classifier_accuracy(model, val_set);
    entry.batch_size = batch_size;
    if (entry.val_accuracy > best_acc) {
      best_acc = entry.val_accuracy;
      best = model;
    }
    if (plateau.observe(entry.val_accuracy)) {
      batch_size = std::min(batch_size * 2, n);  // capped at the dataset size
      entry.event = "double_batch";
    }
    if (log) log->push_back(entry);
  }
  return config.max_epochs > 0 ? best : model;
}

}  // namespace factoid
