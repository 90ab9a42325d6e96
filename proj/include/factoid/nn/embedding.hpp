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

#ifndef FACTOID_NN_EMBEDDING_H_
#define FACTOID_NN_EMBEDDING_H_

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "json.hpp"

#include "factoid/text.hpp"

namespace factoid::nn {

// Frozen word-vector table. Unknown tokens map to the arithmetic mean of all
// loaded vectors; no gradient ever flows into the table.
class EmbeddingTable {
 public:
  // Text format: one `word v1 v2 ... vD` entry per line, space-separated.
  // A leading `count dim` header line is tolerated and skipped. Duplicate
  // words keep their first vector. Throws DataError on an empty table or an
  // inconsistent dimension.
  static EmbeddingTable load(std::istream& in);
  static EmbeddingTable from_rows(
      const std::vector<std::pair<std::string, Eigen::VectorXd>>& rows);

  int dim() const { return static_cast<int>(vectors_.cols()); }
  std::size_t size() const { return vocab_.size(); }
  bool contains(const std::string& word) const { return vocab_.count(word) > 0; }
  const Eigen::VectorXd& unk_vector() const { return unk_; }

  // One row per token, in order; unknown tokens get the unk vector.
  Eigen::MatrixXd embed(const TokenSeq& tokens) const;

  nlohmann::json to_json() const;
  static EmbeddingTable from_json(const nlohmann::json& j);

 private:
  std::unordered_map<std::string, int> vocab_;
  std::vector<std::string> words_;  // row -> word, in load order
  Eigen::MatrixXd vectors_;         // |vocab| x D
  Eigen::VectorXd unk_;
};

}  // namespace factoid::nn

#endif  // FACTOID_NN_EMBEDDING_H_
