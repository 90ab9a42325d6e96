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

#include "factoid/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <istream>

#include "factoid/errors.hpp"

namespace factoid {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + key + "': '" + v + "' is not a number");
  }
  return out;
}

std::int64_t to_int(const std::string& key, const std::string& v) {
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError("config key '" + key + "': '" + v + "' is not an integer");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config key '" + key + "': '" + v + "' is not a boolean");
}

using Setter = std::function<void(RunConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> kSetters = {
      {"raw.triples", [](RunConfig& c, const std::string&, const std::string& v) { c.raw_triples = v; }},
      {"raw.aliases", [](RunConfig& c, const std::string&, const std::string& v) { c.raw_aliases = v; }},
      {"raw.train", [](RunConfig& c, const std::string&, const std::string& v) { c.raw_train = v; }},
      {"raw.valid", [](RunConfig& c, const std::string&, const std::string& v) { c.raw_valid = v; }},
      {"raw.test", [](RunConfig& c, const std::string&, const std::string& v) { c.raw_test = v; }},
      {"data.dir", [](RunConfig& c, const std::string&, const std::string& v) { c.data_dir = v; }},
      {"embeddings.tagger",
       [](RunConfig& c, const std::string&, const std::string& v) { c.tagger_embeddings = v; }},
      {"embeddings.classifier",
       [](RunConfig& c, const std::string&, const std::string& v) { c.classifier_embeddings = v; }},
      {"checkpoints.dir",
       [](RunConfig& c, const std::string&, const std::string& v) { c.checkpoint_dir = v; }},
      {"reports.dir", [](RunConfig& c, const std::string&, const std::string& v) { c.report_dir = v; }},
      {"tagger.lr",
       [](RunConfig& c, const std::string& k, const std::string& v) { c.tagger.lr = to_double(k, v); }},
      {"tagger.patience",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.tagger.patience = static_cast<int>(to_int(k, v));
       }},
      {"tagger.epochs",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.tagger.epochs = static_cast<int>(to_int(k, v));
       }},
      {"tagger.hidden",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.tagger.hidden = static_cast<int>(to_int(k, v));
       }},
      {"tagger.seed",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.tagger.seed = static_cast<std::uint64_t>(to_int(k, v));
       }},
      {"tagger.k",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.tagger.k = static_cast<int>(to_int(k, v));
       }},
      {"classifier.lr",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.classifier.lr = to_double(k, v);
       }},
      {"classifier.amsgrad",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.classifier.amsgrad = to_bool(k, v);
       }},
      {"classifier.batch",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.classifier.batch = static_cast<int>(to_int(k, v));
       }},
      {"classifier.patience",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.classifier.patience = static_cast<int>(to_int(k, v));
       }},
      {"classifier.epochs",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.classifier.epochs = static_cast<int>(to_int(k, v));
       }},
      {"classifier.hidden",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.classifier.hidden = static_cast<int>(to_int(k, v));
       }},
      {"classifier.seed",
       [](RunConfig& c, const std::string& k, const std::string& v) {
         c.classifier.seed = static_cast<std::uint64_t>(to_int(k, v));
       }},
      {"audit.table_scope",
       [](RunConfig& c, const std::string&, const std::string& v) { c.audit.table_scope = v; }},
      {"audit.guesser",
       [](RunConfig& c, const std::string&, const std::string& v) { c.audit.guesser = v; }},
  };
  return kSetters;
}

}  // namespace

GuesserRule RunConfig::guesser_rule() const {
  if (audit.guesser == "relcount_factcount") return GuesserRule::kRelationCountThenFactCount;
  if (audit.guesser == "factcount_relcount") return GuesserRule::kFactCountThenRelationCount;
  throw ConfigError("audit.guesser must be relcount_factcount or factcount_relcount, got '" +
                    audit.guesser + "'");
}

void apply_override(RunConfig& config, const std::string& key, const std::string& value) {
  auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(config, key, value);
}

RunConfig parse_config(std::istream& in) {
  RunConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    apply_override(config, trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
  return config;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return parse_config(in);
}

void validate_config(const RunConfig& config) {
  if (config.tagger.lr <= 0 || config.classifier.lr <= 0) {
    throw ConfigError("learning rates must be > 0");
  }
  if (config.tagger.patience < 1 || config.classifier.patience < 1) {
    throw ConfigError("patience must be >= 1");
  }
  if (config.tagger.k < 1) throw ConfigError("tagger.k must be >= 1");
  if (config.tagger.epochs < 0 || config.classifier.epochs < 0) {
    throw ConfigError("epochs must be >= 0");
  }
  if (config.tagger.hidden < 1 || config.classifier.hidden < 1) {
    throw ConfigError("hidden sizes must be >= 1");
  }
  if (config.classifier.batch < 2) {
    throw ConfigError("classifier.batch must be >= 2 (batch norm needs batch statistics)");
  }
  if (config.audit.table_scope != "all" && config.audit.table_scope != "train") {
    throw ConfigError("audit.table_scope must be 'all' or 'train', got '" +
                      config.audit.table_scope + "'");
  }
  config.guesser_rule();  // validates audit.guesser
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [key, setter] : setters()) keys.push_back(key);
  return keys;
}

}  // namespace factoid
