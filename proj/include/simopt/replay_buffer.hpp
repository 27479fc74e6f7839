// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The simopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "simopt/rng.hpp"

namespace simopt {

struct Transition
{
    Eigen::VectorXf state;
    Eigen::VectorXf action;
    float reward = 0.0f;
    Eigen::VectorXf next_state;
};

/// Fixed-capacity FIFO of transitions. Storage grows on demand up to the
/// capacity, then the oldest entry is overwritten.
class ReplayBuffer
{
  public:
    struct Batch
    {
        Eigen::MatrixXf states;       // state_dim x n
        Eigen::MatrixXf actions;      // action_dim x n
        Eigen::VectorXf rewards;      // n
        Eigen::MatrixXf next_states;  // state_dim x n
    };

    ReplayBuffer(std::size_t capacity, int state_dim, int action_dim);

    void add(const Transition& t);

    std::size_t size() const { return count_; }
    std::size_t capacity() const { return capacity_; }
    int state_dim() const { return state_dim_; }
    int action_dim() const { return action_dim_; }

    /// i-th oldest stored transition, 0 <= i < size().
    Transition at(std::size_t i) const;

    /// n distinct transitions drawn uniformly.
    Batch sample(std::size_t n, Rng& rng) const;

  private:
    std::size_t slot_of(std::size_t i) const;

    std::size_t capacity_;
    int state_dim_;
    int action_dim_;
    std::size_t next_ = 0;
    std::size_t count_ = 0;
    std::vector<float> states_;
    std::vector<float> actions_;
    std::vector<float> rewards_;
    std::vector<float> next_states_;
};

}  // namespace simopt
