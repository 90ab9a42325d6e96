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

#ifndef FACTOID_TRAINLOG_H_
#define FACTOID_TRAINLOG_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace factoid {

// One training epoch. The tagger log carries lr, the classifier log carries
// batch_size; `event` is set on the epoch where a plateau action fired.
struct TrainLogEntry {
  int epoch = 0;
  double train_loss = 0.0;
  double val_accuracy = 0.0;
  double lr = 0.0;
  int batch_size = 0;
  std::string event;
};

nlohmann::json tagger_log_json(const TrainLogEntry& e);
nlohmann::json classifier_log_json(const TrainLogEntry& e);

// JSON lines, one entry per epoch.
void write_train_log(std::ostream& out, const std::vector<TrainLogEntry>& log,
                     bool classifier);

}  // namespace factoid

#endif  // FACTOID_TRAINLOG_H_
