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

#include "factoid/nn/batchnorm.hpp"

#include <stdexcept>

namespace factoid::nn {

void BatchNormParams::init(int features) {
  scale = Eigen::VectorXd::Ones(features);
  shift = Eigen::VectorXd::Zero(features);
  running_mean = Eigen::VectorXd::Zero(features);
  running_var = Eigen::VectorXd::Ones(features);
}

Eigen::MatrixXd batchnorm_train(BatchNormParams& params, const Eigen::MatrixXd& batch,
                                BatchNormCache* cache) {
  const Eigen::Index b = batch.rows();
  if (b < 2) {
    throw std::invalid_argument(
        "batchnorm_train: batch of size " + std::to_string(b) +
        " has no defined variance normalization; need >= 2 rows");
  }
  const Eigen::Index f = batch.cols();
  if (f != params.features()) {
    throw std::invalid_argument("batchnorm_train: feature count mismatch");
  }

  Eigen::RowVectorXd mean = batch.colwise().mean();
  Eigen::MatrixXd centered = batch.rowwise() - mean;
  // Biased variance normalizes the batch; the running estimate is unbiased.
  Eigen::RowVectorXd var = centered.array().square().colwise().mean();
  Eigen::RowVectorXd inv_std = (var.array() + params.epsilon).rsqrt();

  Eigen::MatrixXd x_hat = centered.array().rowwise() * inv_std.array();
  Eigen::MatrixXd out =
      (x_hat.array().rowwise() * params.scale.transpose().array()).rowwise() +
      params.shift.transpose().array();

  const double m = params.momentum;
  Eigen::RowVectorXd var_unbiased = var * (static_cast<double>(b) / static_cast<double>(b - 1));
  params.running_mean = (1.0 - m) * params.running_mean + m * mean.transpose();
  params.running_var = (1.0 - m) * params.running_var + m * var_unbiased.transpose();

  if (cache) {
    cache->x_hat = x_hat;
    cache->inv_std = inv_std.transpose();
  }
  return out;
}

Eigen::MatrixXd batchnorm_infer(const BatchNormParams& params, const Eigen::MatrixXd& batch) {
  if (batch.cols() != params.features()) {
    throw std::invalid_argument("batchnorm_infer: feature count mismatch");
  }
  Eigen::RowVectorXd inv_std =
      (params.running_var.transpose().array() + params.epsilon).rsqrt();
  Eigen::MatrixXd x_hat =
      (batch.rowwise() - params.running_mean.transpose()).array().rowwise() * inv_std.array();
  return (x_hat.array().rowwise() * params.scale.transpose().array()).rowwise() +
         params.shift.transpose().array();
}

Eigen::MatrixXd batchnorm_backward(const BatchNormParams& params, const BatchNormCache& cache,
                                   const Eigen::MatrixXd& d_out, Eigen::VectorXd* d_scale,
                                   Eigen::VectorXd* d_shift) {
  const double b = static_cast<double>(d_out.rows());
  if (d_scale) *d_scale += (d_out.array() * cache.x_hat.array()).colwise().sum().transpose();
  if (d_shift) *d_shift += d_out.colwise().sum().transpose();

  Eigen::MatrixXd d_xhat = d_out.array().rowwise() * params.scale.transpose().array();
  Eigen::RowVectorXd sum_d = d_xhat.colwise().sum();
  Eigen::RowVectorXd sum_dx = (d_xhat.array() * cache.x_hat.array()).colwise().sum();

  Eigen::MatrixXd d_input =
      ((d_xhat * b).rowwise() - sum_d).array() -
      (cache.x_hat.array().rowwise() * sum_dx.array());
  d_input.array().rowwise() *= (cache.inv_std.transpose().array() / b);
  return d_input;
}

}  // namespace factoid::nn
