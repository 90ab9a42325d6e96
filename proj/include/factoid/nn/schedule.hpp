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

#ifndef FACTOID_NN_SCHEDULE_H_
#define FACTOID_NN_SCHEDULE_H_

#include <stdexcept>
#include <vector>

namespace factoid::nn {

// Fires when the best validation accuracy so far has not strictly improved
// for `patience` consecutive epochs; the window resets after each trigger.
// What fires (halve the learning rate, double the batch size) is the
// caller's business.
class PlateauScheduler {
 public:
  explicit PlateauScheduler(int patience) : patience_(patience) {
    if (patience < 1) throw std::invalid_argument("plateau patience must be >= 1");
  }

  // Call once per epoch; true means the action should fire now.
  bool observe(double val_accuracy) {
    if (val_accuracy > best_) {
      best_ = val_accuracy;
      stale_epochs_ = 0;
      return false;
    }
    if (++stale_epochs_ >= patience_) {
      stale_epochs_ = 0;
      return true;
    }
    return false;
  }

  double best() const { return best_; }

 private:
  int patience_;
  int stale_epochs_ = 0;
  double best_ = -1e300;
};

// Replays a per-epoch accuracy history; returns the 1-based epochs after
// which a trigger fires.
inline std::vector<int> plateau_trigger_epochs(const std::vector<double>& history,
                                               int patience) {
  PlateauScheduler sched(patience);
  std::vector<int> fired;
  for (std::size_t i = 0; i < history.size(); ++i) {
    if (sched.observe(history[i])) fired.push_back(static_cast<int>(i) + 1);
  }
  return fired;
}

}  // namespace factoid::nn

#endif  // FACTOID_NN_SCHEDULE_H_
