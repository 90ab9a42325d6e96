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

#ifndef FACTOID_CHECKPOINT_H_
#define FACTOID_CHECKPOINT_H_

#include <iosfwd>
#include <string>

#include "factoid/classifier.hpp"
#include "factoid/tagger.hpp"

namespace factoid {

// Versioned JSON containers holding every parameter block plus the frozen
// embedding table, so a checkpoint alone reproduces inference bit for bit.
// Doubles round-trip exactly (shortest-representation printing) and keys are
// ordered, so identical models serialize to identical bytes.
inline constexpr int kCheckpointVersion = 1;

void save_tagger(std::ostream& out, const TaggerModel& model);
TaggerModel load_tagger(std::istream& in);

void save_classifier(std::ostream& out, const ClassifierModel& model);
ClassifierModel load_classifier(std::istream& in);

void save_tagger_file(const std::string& path, const TaggerModel& model);
TaggerModel load_tagger_file(const std::string& path);
void save_classifier_file(const std::string& path, const ClassifierModel& model);
ClassifierModel load_classifier_file(const std::string& path);

}  // namespace factoid

#endif  // FACTOID_CHECKPOINT_H_
