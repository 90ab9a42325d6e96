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

#ifndef FACTOID_NN_GRADCHECK_H_
#define FACTOID_NN_GRADCHECK_H_

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "factoid/nn/random.hpp"

namespace factoid::nn {

struct GradCheckBlock {
  std::string name;
  double* value = nullptr;
  const double* analytic_grad = nullptr;
  Eigen::Index size = 0;
};

struct GradCheckReport {
  double max_rel_error = 0.0;
  std::string worst_block;
  Eigen::Index worst_index = 0;
  int coords_checked = 0;

  bool within(double tolerance) const { return max_rel_error < tolerance; }
};

// Central finite differences against the supplied analytic gradients.
// loss_fn must recompute the loss from the current parameter values and be
// deterministic. Parameters are restored after each probe. When
// max_coords_per_block > 0 and a block is larger, a random subsample of
// coordinates is checked (rng required); otherwise every coordinate is.
//
// Relative error per coordinate: |a - n| / max(|a|, |n|), treated as 0 when
// |a - n| <= 1e-8 so finite-difference noise on zero gradients cannot fail
// the check.
GradCheckReport grad_check(const std::function<double()>& loss_fn,
                           const std::vector<GradCheckBlock>& blocks,
                           double h = 1e-5, int max_coords_per_block = 0,
                           Rng* rng = nullptr);

}  // namespace factoid::nn

#endif  // FACTOID_NN_GRADCHECK_H_
