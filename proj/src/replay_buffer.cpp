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

#include "simopt/replay_buffer.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

namespace simopt {

ReplayBuffer::ReplayBuffer(std::size_t capacity, int state_dim, int action_dim)
    : capacity_(capacity), state_dim_(state_dim), action_dim_(action_dim)
{
    if (capacity == 0) throw std::invalid_argument("ReplayBuffer: capacity must be positive");
    if (state_dim < 1 || action_dim < 1) throw std::invalid_argument("ReplayBuffer: dims must be positive");
}

void ReplayBuffer::add(const Transition& t)
{
    if (t.state.size() != state_dim_ || t.next_state.size() != state_dim_ || t.action.size() != action_dim_)
        throw std::invalid_argument("ReplayBuffer: transition dimension mismatch");
    const std::size_t slot = next_;
    if (slot == rewards_.size()) {
        states_.resize(states_.size() + state_dim_);
        actions_.resize(actions_.size() + action_dim_);
        next_states_.resize(next_states_.size() + state_dim_);
        rewards_.push_back(0.0f);
    }
    std::copy_n(t.state.data(), state_dim_, states_.begin() + slot * state_dim_);
    std::copy_n(t.action.data(), action_dim_, actions_.begin() + slot * action_dim_);
    std::copy_n(t.next_state.data(), state_dim_, next_states_.begin() + slot * state_dim_);
    rewards_[slot] = t.reward;
    next_ = (next_ + 1) % capacity_;
    count_ = std::min(count_ + 1, capacity_);
}

std::size_t ReplayBuffer::slot_of(std::size_t i) const
{
    // Before wrap-around next_ == count_, so this reduces to i.
    return (next_ + capacity_ - count_ + i) % capacity_;
}

Transition ReplayBuffer::at(std::size_t i) const
{
    if (i >= count_) throw std::out_of_range("ReplayBuffer: index out of range");
    const std::size_t slot = slot_of(i);
    Transition t;
    t.state = Eigen::Map<const Eigen::VectorXf>(states_.data() + slot * state_dim_, state_dim_);
    t.action = Eigen::Map<const Eigen::VectorXf>(actions_.data() + slot * action_dim_, action_dim_);
    t.next_state = Eigen::Map<const Eigen::VectorXf>(next_states_.data() + slot * state_dim_, state_dim_);
    t.reward = rewards_[slot];
    return t;
}

ReplayBuffer::Batch ReplayBuffer::sample(std::size_t n, Rng& rng) const
{
    if (n > count_) throw std::invalid_argument("ReplayBuffer: batch larger than stored transitions");
    // Floyd's algorithm: n distinct indices in [0, count_).
    std::vector<std::size_t> picked;
    picked.reserve(n);
    std::unordered_set<std::size_t> seen;
    seen.reserve(2 * n);
    for (std::size_t j = count_ - n; j < count_; ++j) {
        std::uniform_int_distribution<std::size_t> u(0, j);
        std::size_t t = u(rng);
        if (!seen.insert(t).second) {
            t = j;
            seen.insert(t);
        }
        picked.push_back(t);
    }

    Batch b;
    const auto cols = static_cast<Eigen::Index>(n);
    b.states.resize(state_dim_, cols);
    b.actions.resize(action_dim_, cols);
    b.next_states.resize(state_dim_, cols);
    b.rewards.resize(cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        const std::size_t slot = picked[c];
        b.states.col(c) = Eigen::Map<const Eigen::VectorXf>(states_.data() + slot * state_dim_, state_dim_);
        b.actions.col(c) = Eigen::Map<const Eigen::VectorXf>(actions_.data() + slot * action_dim_, action_dim_);
        b.next_states.col(c) =
            Eigen::Map<const Eigen::VectorXf>(next_states_.data() + slot * state_dim_, state_dim_);
        b.rewards(c) = rewards_[slot];
    }
    return b;
}

}  // namespace simopt
