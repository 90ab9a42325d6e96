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

#include "factoid/nn/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace factoid::nn {

namespace {

double rel_error(double analytic, double numeric) {
  double diff = std::abs(analytic - numeric);
  if (diff <= 1e-8) return 0.0;  // finite-difference noise floor
  return diff / std::max(std::abs(analytic), std::abs(numeric));
}

}  // namespace

GradCheckReport grad_check(const std::function<double()>& loss_fn,
                           const std::vector<GradCheckBlock>& blocks, double h,
                           int max_coords_per_block, Rng* rng) {
  GradCheckReport report;
  for (const GradCheckBlock& block : blocks) {
    std::vector<Eigen::Index> coords;
    if (max_coords_per_block > 0 && block.size > max_coords_per_block) {
      if (!rng) {
        throw std::invalid_argument("grad_check: subsampling requires an rng");
      }
      // Sample without replacement from the block.
      std::vector<Eigen::Index> all(static_cast<std::size_t>(block.size));
      for (Eigen::Index i = 0; i < block.size; ++i) all[static_cast<std::size_t>(i)] = i;
      rng->shuffle(all);
      coords.assign(all.begin(), all.begin() + max_coords_per_block);
    } else {
      coords.resize(static_cast<std::size_t>(block.size));
      for (Eigen::Index i = 0; i < block.size; ++i) coords[static_cast<std::size_t>(i)] = i;
    }

    for (Eigen::Index i : coords) {
      const double saved = block.value[i];
      block.value[i] = saved + h;
      const double up = loss_fn();
      block.value[i] = saved - h;
      const double down = loss_fn();
      block.value[i] = saved;

      const double numeric = (up - down) / (2.0 * h);
      const double err = rel_error(block.analytic_grad[i], numeric);
      ++report.coords_checked;
      if (err > report.max_rel_error) {
        report.max_rel_error = err;
        report.worst_block = block.name;
        report.worst_index = i;
      }
    }
  }
  return report;
}

}  // namespace factoid::nn
