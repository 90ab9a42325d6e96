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

#include "factoid/nn/optimizer.hpp"

#include <cmath>

#include "factoid/errors.hpp"

namespace factoid::nn {

AdamOptimizer::AdamOptimizer(const AdamConfig& config) : config_(config) {}

void AdamOptimizer::step(const std::vector<ParamView>& blocks) {
  for (const ParamView& block : blocks) {
    for (Eigen::Index i = 0; i < block.size; ++i) {
      if (!std::isfinite(block.grad[i])) {
        throw NumericError("non-finite gradient in parameter block '" + block.name + "'");
      }
    }
  }
  ++t_;
  const double bc1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));

  for (const ParamView& block : blocks) {
    Moments& mom = state_[block.name];
    if (mom.m.size() != block.size) {
      mom.m = Eigen::ArrayXd::Zero(block.size);
      mom.v = Eigen::ArrayXd::Zero(block.size);
      if (config_.amsgrad) mom.vhat_max = Eigen::ArrayXd::Zero(block.size);
    }
    Eigen::Map<Eigen::ArrayXd> value(block.value, block.size);
    Eigen::Map<const Eigen::ArrayXd> grad(block.grad, block.size);

    mom.m = config_.beta1 * mom.m + (1.0 - config_.beta1) * grad;
    mom.v = config_.beta2 * mom.v + (1.0 - config_.beta2) * grad.square();
    Eigen::ArrayXd m_hat = mom.m / bc1;
    Eigen::ArrayXd v_hat = mom.v / bc2;
    if (config_.amsgrad) {
      mom.vhat_max = mom.vhat_max.max(v_hat);
      value -= config_.lr * m_hat / (mom.vhat_max.sqrt() + config_.epsilon);
    } else {
      value -= config_.lr * m_hat / (v_hat.sqrt() + config_.epsilon);
    }
  }
}

}  // namespace factoid::nn
