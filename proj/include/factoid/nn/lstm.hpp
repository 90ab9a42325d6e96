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

#ifndef FACTOID_NN_LSTM_H_
#define FACTOID_NN_LSTM_H_

#include <vector>

#include <Eigen/Core>

#include "factoid/nn/random.hpp"

namespace factoid::nn {

// One gated recurrent cell. Gate blocks are stacked in the order
// input, forget, candidate, output: w_input is 4H x D, w_hidden 4H x H,
// bias 4H.
struct LstmCellParams {
  Eigen::MatrixXd w_input;
  Eigen::MatrixXd w_hidden;
  Eigen::VectorXd bias;

  int hidden() const { return static_cast<int>(w_hidden.cols()); }
  int input_dim() const { return static_cast<int>(w_input.cols()); }
  void init(int input_dim, int hidden_dim, Rng& rng);
};

struct LstmCellGrads {
  Eigen::MatrixXd w_input;
  Eigen::MatrixXd w_hidden;
  Eigen::VectorXd bias;

  void zero_like(const LstmCellParams& p);
};

// Single-layer bidirectional encoder.
struct BiEncoderParams {
  LstmCellParams fwd;
  LstmCellParams bwd;

  int hidden() const { return fwd.hidden(); }
  void init(int input_dim, int hidden_dim, Rng& rng);
};

struct BiEncoderGrads {
  LstmCellGrads fwd;
  LstmCellGrads bwd;

  void zero_like(const BiEncoderParams& p);
  void add(const BiEncoderGrads& other);
  void scale(double s);
};

// Forward intermediates kept for the backward pass.
struct BiEncoderCache {
  Eigen::MatrixXd inputs;  // n x D
  struct Direction {
    std::vector<Eigen::VectorXd> gates;   // per step: 4H pre-activation outputs (i,f,g,o)
    std::vector<Eigen::VectorXd> cells;   // per step: c_t
    std::vector<Eigen::VectorXd> hidden;  // per step: h_t
  };
  Direction fwd, bwd;  // in processing order (bwd runs right to left)
};

struct BiEncoderOut {
  Eigen::MatrixXd outputs;      // n x 2H; row t = [h_fwd_t, h_bwd_t]
  Eigen::VectorXd final_state;  // [h_fwd_last, h_bwd_last] (2H)
};

// Runs both directions over `inputs` (n x D, one row per position). Throws
// std::invalid_argument on an empty sequence. Pass a cache to enable
// bi_encode_backward.
BiEncoderOut bi_encode(const BiEncoderParams& params, const Eigen::MatrixXd& inputs,
                       BiEncoderCache* cache = nullptr);

// Exact gradients for all cell parameters and the inputs, given upstream
// gradients for the per-position outputs (n x 2H) and the final state (2H).
// Returns d_inputs (n x D) and accumulates into *grads.
Eigen::MatrixXd bi_encode_backward(const BiEncoderParams& params,
                                   const BiEncoderCache& cache,
                                   const Eigen::MatrixXd& d_outputs,
                                   const Eigen::VectorXd& d_final,
                                   BiEncoderGrads* grads);

}  // namespace factoid::nn

#endif  // FACTOID_NN_LSTM_H_
