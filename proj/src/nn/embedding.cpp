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

#include "factoid/nn/embedding.hpp"

#include <charconv>
#include <istream>
#include <sstream>

#include "factoid/errors.hpp"

namespace factoid::nn {

namespace {

bool parse_double(const std::string& s, double* out) {
  const char* begin = s.data();
  const char* end = begin + s.size();
  auto [ptr, ec] = std::from_chars(begin, end, *out);
  return ec == std::errc() && ptr == end;
}

bool looks_like_header(const std::vector<std::string>& fields) {
  if (fields.size() != 2) return false;
  for (const std::string& f : fields) {
    for (char c : f) {
      if (c < '0' || c > '9') return false;
    }
    if (f.empty()) return false;
  }
  return true;
}

std::vector<std::string> split_spaces(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string f;
  while (in >> f) fields.push_back(std::move(f));
  return fields;
}

}  // namespace

EmbeddingTable EmbeddingTable::load(std::istream& in) {
  std::vector<std::pair<std::string, Eigen::VectorXd>> rows;
  std::string line;
  int line_no = 0;
  int dim = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::vector<std::string> fields = split_spaces(line);
    if (line_no == 1 && looks_like_header(fields)) continue;  // fastText-style "count dim"
    if (fields.size() < 2) {
      throw DataError("embedding file line " + std::to_string(line_no) +
                      ": expected `word v1 ... vD`");
    }
    int d = static_cast<int>(fields.size()) - 1;
    if (dim < 0) dim = d;
    if (d != dim) {
      throw DataError("embedding file line " + std::to_string(line_no) + ": dimension " +
                      std::to_string(d) + " differs from " + std::to_string(dim));
    }
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) {
      if (!parse_double(fields[static_cast<std::size_t>(i) + 1], &v[i])) {
        throw DataError("embedding file line " + std::to_string(line_no) +
                        ": bad number `" + fields[static_cast<std::size_t>(i) + 1] + "`");
      }
    }
    rows.emplace_back(fields[0], std::move(v));
  }
  if (rows.empty()) throw DataError("embedding file holds no vectors");
  return from_rows(rows);
}

EmbeddingTable EmbeddingTable::from_rows(
    const std::vector<std::pair<std::string, Eigen::VectorXd>>& rows) {
  if (rows.empty()) throw DataError("embedding table needs at least one vector");
  EmbeddingTable table;
  const int dim = static_cast<int>(rows.front().second.size());
  std::vector<const Eigen::VectorXd*> kept;
  for (const auto& [word, vec] : rows) {
    if (static_cast<int>(vec.size()) != dim) {
      throw DataError("embedding row `" + word + "` has inconsistent dimension");
    }
    if (table.vocab_.count(word)) continue;  // first occurrence wins
    table.vocab_.emplace(word, static_cast<int>(kept.size()));
    table.words_.push_back(word);
    kept.push_back(&vec);
  }
  table.vectors_.resize(static_cast<Eigen::Index>(kept.size()), dim);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    table.vectors_.row(static_cast<Eigen::Index>(i)) = kept[i]->transpose();
  }
  table.unk_ = table.vectors_.colwise().mean();
  return table;
}

Eigen::MatrixXd EmbeddingTable::embed(const TokenSeq& tokens) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(tokens.size()), dim());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    auto it = vocab_.find(tokens[i]);
    if (it == vocab_.end()) {
      out.row(static_cast<Eigen::Index>(i)) = unk_.transpose();
    } else {
      out.row(static_cast<Eigen::Index>(i)) = vectors_.row(it->second);
    }
  }
  return out;
}

nlohmann::json EmbeddingTable::to_json() const {
  nlohmann::json vectors = nlohmann::json::array();
  for (Eigen::Index r = 0; r < vectors_.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < vectors_.cols(); ++c) row.push_back(vectors_(r, c));
    vectors.push_back(std::move(row));
  }
  return nlohmann::json{{"dim", dim()}, {"words", words_}, {"vectors", vectors}};
}

EmbeddingTable EmbeddingTable::from_json(const nlohmann::json& j) {
  const int dim = j.at("dim").get<int>();
  const auto& words = j.at("words");
  const auto& vectors = j.at("vectors");
  std::vector<std::pair<std::string, Eigen::VectorXd>> rows;
  rows.reserve(words.size());
  for (std::size_t i = 0; i < words.size(); ++i) {
    Eigen::VectorXd v(dim);
    const auto& row = vectors.at(i);
    for (int c = 0; c < dim; ++c) v[c] = row.at(static_cast<std::size_t>(c)).get<double>();
    rows.emplace_back(words.at(i).get<std::string>(), std::move(v));
  }
  return from_rows(rows);
}

}  // namespace factoid::nn
