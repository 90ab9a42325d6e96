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

#include "factoid/checkpoint.hpp"

#include <fstream>
#include <istream>
#include <ostream>

#include "json.hpp"

#include "factoid/errors.hpp"

namespace factoid {

namespace {

using nlohmann::json;

json matrix_json(const Eigen::MatrixXd& m) {
  json data = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) data.push_back(m(r, c));
  }
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Eigen::MatrixXd matrix_from(const json& j) {
  const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
  const json& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) {
    throw DataError("checkpoint matrix block has wrong element count");
  }
  Eigen::MatrixXd m(rows, cols);
  std::size_t i = 0;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = data.at(i++).get<double>();
  }
  return m;
}

json vector_json(const Eigen::VectorXd& v) {
  json data = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) data.push_back(v[i]);
  return data;
}

Eigen::VectorXd vector_from(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j.at(i).get<double>();
  return v;
}

json cell_json(const nn::LstmCellParams& p) {
  return json{{"w_input", matrix_json(p.w_input)},
              {"w_hidden", matrix_json(p.w_hidden)},
              {"bias", vector_json(p.bias)}};
}

nn::LstmCellParams cell_from(const json& j) {
  nn::LstmCellParams p;
  p.w_input = matrix_from(j.at("w_input"));
  p.w_hidden = matrix_from(j.at("w_hidden"));
  p.bias = vector_from(j.at("bias"));
  return p;
}

json parse_checkpoint(std::istream& in, const char* expected_kind) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError(std::string("checkpoint is not valid JSON: ") + e.what());
  }
  if (j.value("version", -1) != kCheckpointVersion) {
    throw DataError("checkpoint version mismatch; expected " +
                    std::to_string(kCheckpointVersion));
  }
  if (j.value("kind", "") != expected_kind) {
    throw DataError(std::string("checkpoint kind is not '") + expected_kind + "'");
  }
  return j;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open checkpoint: " + path);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write checkpoint: " + path);
  return out;
}

}  // namespace

void save_tagger(std::ostream& out, const TaggerModel& model) {
  json j{{"version", kCheckpointVersion},
         {"kind", "tagger"},
         {"labels", {"I", "O"}},
         {"hidden", model.hidden()},
         {"embeddings", model.embeddings.to_json()},
         {"encoder", {{"fwd", cell_json(model.encoder.fwd)}, {"bwd", cell_json(model.encoder.bwd)}}},
         {"emission_weight", matrix_json(model.emission_weight)},
         {"emission_bias", vector_json(model.emission_bias)},
         {"transitions", matrix_json(model.crf.transitions)},
         {"start_scores", vector_json(model.crf.start_scores)},
         {"end_scores", vector_json(model.crf.end_scores)}};
  out << j.dump(2) << '\n';
}

TaggerModel load_tagger(std::istream& in) {
  json j = parse_checkpoint(in, "tagger");
  TaggerModel model;
  model.embeddings = nn::EmbeddingTable::from_json(j.at("embeddings"));
  model.encoder.fwd = cell_from(j.at("encoder").at("fwd"));
  model.encoder.bwd = cell_from(j.at("encoder").at("bwd"));
  model.emission_weight = matrix_from(j.at("emission_weight"));
  model.emission_bias = vector_from(j.at("emission_bias"));
  model.crf.transitions = matrix_from(j.at("transitions"));
  model.crf.start_scores = vector_from(j.at("start_scores"));
  model.crf.end_scores = vector_from(j.at("end_scores"));
  return model;
}

void save_classifier(std::ostream& out, const ClassifierModel& model) {
  json j{{"version", kCheckpointVersion},
         {"kind", "classifier"},
         {"hidden", model.hidden()},
         {"relations", model.relations},
         {"embeddings", model.embeddings.to_json()},
         {"encoder", {{"fwd", cell_json(model.encoder.fwd)}, {"bwd", cell_json(model.encoder.bwd)}}},
         {"bn",
          {{"scale", vector_json(model.bn.scale)},
           {"shift", vector_json(model.bn.shift)},
           {"running_mean", vector_json(model.bn.running_mean)},
           {"running_var", vector_json(model.bn.running_var)},
           {"epsilon", model.bn.epsilon},
           {"momentum", model.bn.momentum}}},
         {"output_weight", matrix_json(model.output_weight)},
         {"output_bias", vector_json(model.output_bias)}};
  out << j.dump(2) << '\n';
}

ClassifierModel load_classifier(std::istream& in) {
  json j = parse_checkpoint(in, "classifier");
  ClassifierModel model;
  model.embeddings = nn::EmbeddingTable::from_json(j.at("embeddings"));
  model.encoder.fwd = cell_from(j.at("encoder").at("fwd"));
  model.encoder.bwd = cell_from(j.at("encoder").at("bwd"));
  const json& bn = j.at("bn");
  model.bn.scale = vector_from(bn.at("scale"));
  model.bn.shift = vector_from(bn.at("shift"));
  model.bn.running_mean = vector_from(bn.at("running_mean"));
  model.bn.running_var = vector_from(bn.at("running_var"));
  model.bn.epsilon = bn.at("epsilon").get<double>();
  model.bn.momentum = bn.at("momentum").get<double>();
  model.output_weight = matrix_from(j.at("output_weight"));
  model.output_bias = vector_from(j.at("output_bias"));
  model.relations = j.at("relations").get<std::vector<RelationId>>();
  for (std::size_t i = 0; i < model.relations.size(); ++i) {
    model.relation_index.emplace(model.relations[i], static_cast<int>(i));
  }
  return model;
}

void save_tagger_file(const std::string& path, const TaggerModel& model) {
  auto out = open_out(path);
  save_tagger(out, model);
}

TaggerModel load_tagger_file(const std::string& path) {
  auto in = open_in(path);
  return load_tagger(in);
}

void save_classifier_file(const std::string& path, const ClassifierModel& model) {
  auto out = open_out(path);
  save_classifier(out, model);
}

ClassifierModel load_classifier_file(const std::string& path) {
  auto in = open_in(path);
  return load_classifier(in);
}

}  // namespace factoid
