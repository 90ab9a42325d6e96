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

#ifndef FACTOID_NN_BATCHNORM_H_
#define FACTOID_NN_BATCHNORM_H_

#include <Eigen/Core>

namespace factoid::nn {

struct BatchNormParams {
  Eigen::VectorXd scale;  // gamma, trainable
  Eigen::VectorXd shift;  // beta, trainable
  Eigen::VectorXd running_mean;
  Eigen::VectorXd running_var;
  double epsilon = 1e-5;
  double momentum = 0.1;  // running = (1 - momentum) * running + momentum * batch

  int features() const { return static_cast<int>(scale.size()); }
  void init(int features);
};

struct BatchNormCache {
  Eigen::MatrixXd x_hat;    // B x F
  Eigen::VectorXd inv_std;  // 1 / sqrt(var + eps), per feature
};

// Train mode: normalizes by batch statistics (biased variance), updates the
// running statistics (unbiased variance), returns scale * x_hat + shift.
// Throws std::invalid_argument when the batch has fewer than 2 rows.
Eigen::MatrixXd batchnorm_train(BatchNormParams& params, const Eigen::MatrixXd& batch,
                                BatchNormCache* cache = nullptr);

// Infer mode: pure function of (params, input) using running statistics.
Eigen::MatrixXd batchnorm_infer(const BatchNormParams& params,
                                const Eigen::MatrixXd& batch);

// Backward through batchnorm_train. Returns d_input and accumulates
// d_scale / d_shift.
Eigen::MatrixXd batchnorm_backward(const BatchNormParams& params,
                                   const BatchNormCache& cache,
                                   const Eigen::MatrixXd& d_out,
                                   Eigen::VectorXd* d_scale, Eigen::VectorXd* d_shift);

}  // namespace factoid::nn

#endif  // FACTOID_NN_BATCHNORM_H_
