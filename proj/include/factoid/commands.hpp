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

#ifndef FACTOID_COMMANDS_H_
#define FACTOID_COMMANDS_H_

#include <string>
#include <vector>

#include "json.hpp"

#include "factoid/audit.hpp"
#include "factoid/config.hpp"
#include "factoid/pipeline.hpp"

namespace factoid {

// Paths a command needs to exist before it runs; empty when satisfied.
std::vector<std::string> missing_inputs(const RunConfig& config, const std::string& command);

struct IngestResult {
  nlohmann::json report;  // split sizes, rejected lines, KG load report
  std::string report_path;
};
// Normalizes the raw distribution (strips Freebase URL prefixes) into the
// data directory, loads the graph once to verify it, writes the report.
IngestResult cmd_ingest(const RunConfig& config);

struct TrainResult {
  std::string checkpoint_path;
  std::string log_path;
  double best_val_accuracy = 0.0;
};
TrainResult cmd_train_tagger(const RunConfig& config);
TrainResult cmd_train_classifier(const RunConfig& config);

struct AuditResult {
  AuditReport report;
  std::string report_path;
};
AuditResult cmd_audit(const RunConfig& config, const std::string& split);

struct EvalResult {
  EvalReport report;
  std::string report_path;
  std::string predictions_path;
};
// `allow_test` guards the held-out split; jobs > 1 fans prediction out over
// threads (shared state is immutable during evaluation).
EvalResult cmd_eval(const RunConfig& config, const std::string& split, bool allow_test,
                    int jobs);

// Single-question prediction as JSON: pair, span, alias, candidate
// probabilities.
nlohmann::json cmd_predict(const RunConfig& config, const std::string& question);

// Strips "www.freebase.com/m/" and "www.freebase.com/" (official
// distribution forms) off one id.
std::string strip_freebase_prefix(const std::string& id);

}  // namespace factoid

#endif  // FACTOID_COMMANDS_H_
