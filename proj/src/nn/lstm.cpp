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

#include "factoid/nn/lstm.hpp"

#include <cmath>
#include <stdexcept>

#include "factoid/nn/mathutil.hpp"

namespace factoid::nn {

void LstmCellParams::init(int input_dim, int hidden_dim, Rng& rng) {
  w_input.resize(4 * hidden_dim, input_dim);
  w_hidden.resize(4 * hidden_dim, hidden_dim);
  bias.resize(4 * hidden_dim);
  fill_uniform(w_input, -0.1, 0.1, rng);
  fill_uniform(w_hidden, -0.1, 0.1, rng);
  fill_uniform(bias, -0.1, 0.1, rng);
}

void LstmCellGrads::zero_like(const LstmCellParams& p) {
  w_input = Eigen::MatrixXd::Zero(p.w_input.rows(), p.w_input.cols());
  w_hidden = Eigen::MatrixXd::Zero(p.w_hidden.rows(), p.w_hidden.cols());
  bias = Eigen::VectorXd::Zero(p.bias.size());
}

void BiEncoderParams::init(int input_dim, int hidden_dim, Rng& rng) {
  fwd.init(input_dim, hidden_dim, rng);
  bwd.init(input_dim, hidden_dim, rng);
}

void BiEncoderGrads::zero_like(const BiEncoderParams& p) {
  fwd.zero_like(p.fwd);
  bwd.zero_like(p.bwd);
}

void BiEncoderGrads::add(const BiEncoderGrads& other) {
  fwd.w_input += other.fwd.w_input;
  fwd.w_hidden += other.fwd.w_hidden;
  fwd.bias += other.fwd.bias;
  bwd.w_input += other.bwd.w_input;
  bwd.w_hidden += other.bwd.w_hidden;
  bwd.bias += other.bwd.bias;
}

void BiEncoderGrads::scale(double s) {
  fwd.w_input *= s;
  fwd.w_hidden *= s;
  fwd.bias *= s;
  bwd.w_input *= s;
  bwd.w_hidden *= s;
  bwd.bias *= s;
}

namespace {

// One direction over the sequence. `reverse` walks positions right to left;
// the cache is stored in processing order.
void run_direction(const LstmCellParams& p, const Eigen::MatrixXd& inputs, bool reverse,
                   BiEncoderCache::Direction* cache) {
  const int n = static_cast<int>(inputs.rows());
  const int h_dim = p.hidden();
  Eigen::VectorXd h = Eigen::VectorXd::Zero(h_dim);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(h_dim);
  cache->gates.assign(static_cast<std::size_t>(n), Eigen::VectorXd());
  cache->cells.assign(static_cast<std::size_t>(n), Eigen::VectorXd());
  cache->hidden.assign(static_cast<std::size_t>(n), Eigen::VectorXd());

  for (int t = 0; t < n; ++t) {
    const int pos = reverse ? n - 1 - t : t;
    Eigen::VectorXd z = p.w_input * inputs.row(pos).transpose() + p.w_hidden * h + p.bias;
    Eigen::VectorXd gates(4 * h_dim);
    for (int k = 0; k < h_dim; ++k) {
      gates[k] = sigmoid(z[k]);                            // input gate
      gates[h_dim + k] = sigmoid(z[h_dim + k]);            // forget gate
      gates[2 * h_dim + k] = std::tanh(z[2 * h_dim + k]);  // candidate
      gates[3 * h_dim + k] = sigmoid(z[3 * h_dim + k]);    // output gate
    }
    Eigen::VectorXd c_next(h_dim);
    Eigen::VectorXd h_next(h_dim);
    for (int k = 0; k < h_dim; ++k) {
      c_next[k] = gates[h_dim + k] * c[k] + gates[k] * gates[2 * h_dim + k];
      h_next[k] = gates[3 * h_dim + k] * std::tanh(c_next[k]);
    }
    cache->gates[static_cast<std::size_t>(t)] = std::move(gates);
    cache->cells[static_cast<std::size_t>(t)] = c_next;
    cache->hidden[static_cast<std::size_t>(t)] = h_next;
    c = std::move(c_next);
    h = std::move(h_next);
  }
}

// Backpropagation through one direction. d_hidden_ext holds the upstream
// gradient per processing step (final-state gradient already folded into the
// last step). Accumulates parameter grads and the input gradient rows.
void backprop_direction(const LstmCellParams& p, const Eigen::MatrixXd& inputs, bool reverse,
                        const BiEncoderCache::Direction& cache,
                        const std::vector<Eigen::VectorXd>& d_hidden_ext,
                        LstmCellGrads* grads, Eigen::MatrixXd* d_inputs) {
  const int n = static_cast<int>(inputs.rows());
  const int h_dim = p.hidden();
  Eigen::VectorXd dh_rec = Eigen::VectorXd::Zero(h_dim);
  Eigen::VectorXd dc_rec = Eigen::VectorXd::Zero(h_dim);

  for (int t = n - 1; t >= 0; --t) {
    const int pos = reverse ? n - 1 - t : t;
    const Eigen::VectorXd& gates = cache.gates[static_cast<std::size_t>(t)];
    const auto i_gate = gates.segment(0, h_dim);
    const auto f_gate = gates.segment(h_dim, h_dim);
    const auto g_cand = gates.segment(2 * h_dim, h_dim);
    const auto o_gate = gates.segment(3 * h_dim, h_dim);
    const Eigen::VectorXd& c_t = cache.cells[static_cast<std::size_t>(t)];
    const Eigen::VectorXd c_prev =
        t > 0 ? cache.cells[static_cast<std::size_t>(t) - 1] : Eigen::VectorXd::Zero(h_dim);
    const Eigen::VectorXd h_prev =
        t > 0 ? cache.hidden[static_cast<std::size_t>(t) - 1] : Eigen::VectorXd::Zero(h_dim);

    Eigen::ArrayXd tanh_c = c_t.array().tanh();
    Eigen::ArrayXd dh = (d_hidden_ext[static_cast<std::size_t>(t)] + dh_rec).array();
    Eigen::ArrayXd d_o = dh * tanh_c;
    Eigen::ArrayXd dc = dc_rec.array() + dh * o_gate.array() * (1.0 - tanh_c.square());
    Eigen::ArrayXd d_i = dc * g_cand.array();
    Eigen::ArrayXd d_f = dc * c_prev.array();
    Eigen::ArrayXd d_g = dc * i_gate.array();

    Eigen::VectorXd dz(4 * h_dim);
    dz.segment(0, h_dim) = (d_i * i_gate.array() * (1.0 - i_gate.array())).matrix();
    dz.segment(h_dim, h_dim) = (d_f * f_gate.array() * (1.0 - f_gate.array())).matrix();
    dz.segment(2 * h_dim, h_dim) = (d_g * (1.0 - g_cand.array().square())).matrix();
    dz.segment(3 * h_dim, h_dim) = (d_o * o_gate.array() * (1.0 - o_gate.array())).matrix();

    grads->w_input.noalias() += dz * inputs.row(pos);
    grads->w_hidden.noalias() += dz * h_prev.transpose();
    grads->bias += dz;
    d_inputs->row(pos) += (p.w_input.transpose() * dz).transpose();
    dh_rec.noalias() = p.w_hidden.transpose() * dz;
    dc_rec = (dc * f_gate.array()).matrix();
  }
}

}  // namespace

BiEncoderOut bi_encode(const BiEncoderParams& params, const Eigen::MatrixXd& inputs,
                       BiEncoderCache* cache) {
  const int n = static_cast<int>(inputs.rows());
  if (n == 0) throw std::invalid_argument("bi_encode: empty input sequence");
  const int h_dim = params.hidden();

  BiEncoderCache local;
  BiEncoderCache& c = cache ? *cache : local;
  c.inputs = inputs;
  run_direction(params.fwd, inputs, /*reverse=*/false, &c.fwd);
  run_direction(params.bwd, inputs, /*reverse=*/true, &c.bwd);

  BiEncoderOut out;
  out.outputs.resize(n, 2 * h_dim);
  for (int pos = 0; pos < n; ++pos) {
    out.outputs.row(pos).head(h_dim) =
        c.fwd.hidden[static_cast<std::size_t>(pos)].transpose();
    out.outputs.row(pos).tail(h_dim) =
        c.bwd.hidden[static_cast<std::size_t>(n - 1 - pos)].transpose();
  }
  out.final_state.resize(2 * h_dim);
  out.final_state.head(h_dim) = c.fwd.hidden[static_cast<std::size_t>(n) - 1];
  out.final_state.tail(h_dim) = c.bwd.hidden[static_cast<std::size_t>(n) - 1];
  return out;
}

Eigen::MatrixXd bi_encode_backward(const BiEncoderParams& params, const BiEncoderCache& cache,
                                   const Eigen::MatrixXd& d_outputs,
                                   const Eigen::VectorXd& d_final, BiEncoderGrads* grads) {
  const int n = static_cast<int>(cache.inputs.rows());
  const int h_dim = params.hidden();
  if (d_outputs.rows() != n || d_outputs.cols() != 2 * h_dim) {
    throw std::invalid_argument("bi_encode_backward: d_outputs shape mismatch");
  }
  if (d_final.size() != 2 * h_dim) {
    throw std::invalid_argument("bi_encode_backward: d_final size mismatch");
  }

  std::vector<Eigen::VectorXd> d_h_fwd(static_cast<std::size_t>(n));
  std::vector<Eigen::VectorXd> d_h_bwd(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) {
    d_h_fwd[static_cast<std::size_t>(t)] = d_outputs.row(t).head(h_dim).transpose();
    // Backward direction's processing step t sits at position n-1-t.
    d_h_bwd[static_cast<std::size_t>(t)] = d_outputs.row(n - 1 - t).tail(h_dim).transpose();
  }
  d_h_fwd[static_cast<std::size_t>(n) - 1] += d_final.head(h_dim);
  d_h_bwd[static_cast<std::size_t>(n) - 1] += d_final.tail(h_dim);

  Eigen::MatrixXd d_inputs = Eigen::MatrixXd::Zero(n, cache.inputs.cols());
  backprop_direction(params.fwd, cache.inputs, /*reverse=*/false, cache.fwd, d_h_fwd, &grads->fwd,
                     &d_inputs);
  backprop_direction(params.bwd, cache.inputs, /*reverse=*/true, cache.bwd, d_h_bwd, &grads->bwd,
                     &d_inputs);
  return d_inputs;
}

}  // namespace factoid::nn
