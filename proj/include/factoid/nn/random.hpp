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

#ifndef FACTOID_NN_RANDOM_H_
#define FACTOID_NN_RANDOM_H_

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

namespace factoid::nn {

// mt19937_64 with hand-rolled draws so that a seed pins the exact byte
// sequence of every trained checkpoint, independent of the standard
// library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform double in [lo, hi).
  double uniform(double lo, double hi) {
    double unit = (gen_() >> 11) * 0x1.0p-53;
    return lo + unit * (hi - lo);
  }

  // Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n) { return gen_() % n; }

  // Fisher-Yates; deterministic for a given seed.
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

// Fills column-major, so the draw order is pinned by the matrix shape.
inline void fill_uniform(Eigen::Ref<Eigen::MatrixXd> m, double lo, double hi, Rng& rng) {
  double* data = m.data();
  for (Eigen::Index i = 0; i < m.size(); ++i) data[i] = rng.uniform(lo, hi);
}

}  // namespace factoid::nn

#endif  // FACTOID_NN_RANDOM_H_
