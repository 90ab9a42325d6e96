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

#ifndef FACTOID_NN_OPTIMIZER_H_
#define FACTOID_NN_OPTIMIZER_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace factoid::nn {

// A named view over one flat parameter block and its gradient. Eigen
// matrices are contiguous, so .data()/.size() supply the view.
struct ParamView {
  std::string name;
  double* value = nullptr;
  const double* grad = nullptr;
  Eigen::Index size = 0;
};

struct AdamConfig {
  double lr = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  bool amsgrad = false;
};

// Adam with bias correction. With amsgrad set, the denominator uses the
// elementwise running maximum of the bias-corrected second moment, so the
// effective step size never grows when the raw estimate shrinks.
class AdamOptimizer {
 public:
  explicit AdamOptimizer(const AdamConfig& config);

  // One update over all blocks; the step counter advances once per call.
  // Throws NumericError naming the block on a non-finite gradient.
  void step(const std::vector<ParamView>& blocks);

  std::int64_t step_count() const { return t_; }
  double lr() const { return config_.lr; }
  void set_lr(double lr) { config_.lr = lr; }
  const AdamConfig& config() const { return config_; }

 private:
  struct Moments {
    Eigen::ArrayXd m;
    Eigen::ArrayXd v;
    Eigen::ArrayXd vhat_max;
  };

  AdamConfig config_;
  std::int64_t t_ = 0;
  std::map<std::string, Moments> state_;
};

}  // namespace factoid::nn

#endif  // FACTOID_NN_OPTIMIZER_H_
