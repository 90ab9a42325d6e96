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

#ifndef FACTOID_CONFIG_H_
#define FACTOID_CONFIG_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "factoid/audit.hpp"

namespace factoid {

// Everything a run needs, read from a `key = value` file (# comments, blank
// lines ignored). Command-line flags override file values.
struct RunConfig {
  // Raw distribution files (inputs to `ingest`).
  std::string raw_triples;
  std::string raw_aliases;
  std::string raw_train;
  std::string raw_valid;
  std::string raw_test;

  // Normalized data directory; ingest writes triples.tsv, aliases.tsv,
  // train.tsv, valid.tsv, test.tsv here and every other command reads them.
  std::string data_dir = "data";

  std::string tagger_embeddings;      // GloVe-style text vectors
  std::string classifier_embeddings;  // fastText-style text vectors
  std::string checkpoint_dir = "checkpoints";
  std::string report_dir = "reports";

  struct Tagger {
    double lr = 1e-4;
    int patience = 3;
    int epochs = 30;
    int hidden = 128;
    std::uint64_t seed = 13;
    int k = 10;  // top-k decode width
  } tagger;

  struct Classifier {
    double lr = 1e-4;
    bool amsgrad = true;
    int batch = 16;
    int patience = 3;
    int epochs = 30;
    int hidden = 128;
    std::uint64_t seed = 13;
  } classifier;

  struct Audit {
    std::string table_scope = "all";  // "all" | "train"
    std::string guesser = "relcount_factcount";  // | "factcount_relcount"
  } audit;

  GuesserRule guesser_rule() const;

  std::string triples_tsv() const { return data_dir + "/triples.tsv"; }
  std::string aliases_tsv() const { return data_dir + "/aliases.tsv"; }
  std::string split_tsv(const std::string& split) const {
    return data_dir + "/" + split + ".tsv";
  }
};

// Parses a config file; unknown keys are ConfigErrors so typos cannot pass
// silently.
RunConfig parse_config(std::istream& in);
RunConfig parse_config_file(const std::string& path);

// Applies `key=value` overrides (same keys as the file).
void apply_override(RunConfig& config, const std::string& key, const std::string& value);

// Range checks every numeric field; path existence is checked per command.
void validate_config(const RunConfig& config);

// The documented key list, for --help and the README.
std::vector<std::string> config_keys();

}  // namespace factoid

#endif  // FACTOID_CONFIG_H_
