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

#include "factoid/trainlog.hpp"

#include <ostream>

namespace factoid {

nlohmann::json tagger_log_json(const TrainLogEntry& e) {
  nlohmann::json j{{"epoch", e.epoch},
                   {"train_loss", e.train_loss},
                   {"val_accuracy", e.val_accuracy},
                   {"lr", e.lr}};
  if (!e.event.empty()) j["event"] = e.event;
  return j;
}

nlohmann::json classifier_log_json(const TrainLogEntry& e) {
  nlohmann::json j{{"epoch", e.epoch},
                   {"loss", e.train_loss},
                   {"val_accuracy", e.val_accuracy},
                   {"batch_size", e.batch_size}};
  if (!e.event.empty()) j["event"] = e.event;
  return j;
}

void write_train_log(std::ostream& out, const std::vector<TrainLogEntry>& log,
                     bool classifier) {
  for (const TrainLogEntry& e : log) {
    out << (classifier ? classifier_log_json(e) : tagger_log_json(e)).dump() << '\n';
  }
}

}  // namespace factoid
