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

#include <cstdint>
#include <optional>
#include <vector>

#include "simopt/environment.hpp"
#include "simopt/neural.hpp"
#include "simopt/record.hpp"
#include "simopt/replay_buffer.hpp"

namespace simopt {

/// TD3 hyperparameters. DDPG is the same loop with twin critics, policy
/// delay and target smoothing switched off (see Td3Config::ddpg).
struct Td3Config
{
    double discount = 0.9;
    std::size_t buffer_capacity = 1'000'000;
    int batch_size = 256;
    double exploration_noise = 0.02;
    double smoothing_noise = 0.04;
    double smoothing_clip = 0.1;
    int policy_delay = 2;
    int episodes = 100;
    int steps_per_episode = 6000;
    double actor_lr = 3e-4;
    double critic_lr = 3e-4;
    double actor_tau = 0.005;
    double critic_tau = 0.005;
    bool twin_critics = true;
    int warmup_steps = -1;  // < 0 -> 10 * batch_size
    std::vector<int> hidden = {400, 300};
    ChannelMode channel_mode = ChannelMode::PerEpisode;
    bool normalize_reward = true;

    static Td3Config ddpg(Td3Config base);

    int effective_warmup() const { return warmup_steps < 0 ? 10 * batch_size : warmup_steps; }
    void validate() const;
};

class Td3Agent
{
  public:
    using Matrix = Mlp::Matrix;
    using Vector = Mlp::Vector;

    Td3Agent(int state_dim, int action_dim, const Td3Config& config, Rng& init_rng);

    /// Deterministic policy output mu(s).
    VectorXd act(const VectorXd& state) const;

    /// mu(s) + N(0, sigma_1^2), clipped to [-1, 1].
    VectorXd explore(const VectorXd& state, Rng& rng) const;

    /// y = scale * r + discount * min(Q1'(s', a'), Q2'(s', a')) with the
    /// smoothed target action a' = clip(mu'(s') + clip(eps, +-c), -1, 1).
    Eigen::VectorXf compute_targets(const ReplayBuffer::Batch& batch, Rng& rng) const;

    /// One critic update; every policy_delay-th call also updates the actor
    /// and soft-updates all target networks.
    void update(const ReplayBuffer::Batch& batch, Rng& rng);

    std::int64_t critic_updates() const { return critic_updates_; }
    std::int64_t actor_updates() const { return actor_updates_; }

    float reward_scale() const { return reward_scale_; }
    void set_reward_scale(float s) { reward_scale_ = s; }

    const Td3Config& config() const { return config_; }
    const Mlp& actor() const { return actor_; }
    const Mlp& critic1() const { return critic1_; }
    const Mlp& critic2() const { return critic2_; }
    const Mlp& target_actor() const { return target_actor_; }
    const Mlp& target_critic1() const { return target_critic1_; }
    const Mlp& target_critic2() const { return target_critic2_; }
    Mlp& mutable_critic1() { return critic1_; }
    Mlp& mutable_critic2() { return critic2_; }
    Mlp& mutable_target_critic1() { return target_critic1_; }
    Mlp& mutable_target_critic2() { return target_critic2_; }

  private:
    // Batch-sized buffers kept between updates.
    struct Workspace
    {
        Mlp::Cache actor, critic1, critic2, target_actor, target_critic1, target_critic2;
        Mlp::Gradients actor_grads, critic1_grads, critic2_grads;
        Matrix input, next_input, actor_input, next_actions, dq, action_grad;
    };

    void critic_input(const Matrix& states, const Matrix& actions, Matrix& out) const;
    void update_critic(Mlp& critic, Mlp::Cache& cache, Mlp::Gradients& grads, const Matrix& input,
                       const Eigen::VectorXf& targets);
    void update_actor(const Matrix& states);

    Td3Config config_;
    int state_dim_;
    int action_dim_;
    Mlp actor_, critic1_, critic2_;
    Mlp target_actor_, target_critic1_, target_critic2_;
    std::int64_t critic_updates_ = 0;
    std::int64_t actor_updates_ = 0;
    float reward_scale_ = 1.0f;
    mutable Workspace workspace_;
};

struct TrainOutcome
{
    Td3Agent agent;
    RunRecord record;
};

/// Runs the episodic training loop. Randomness comes from substreams of
/// master_seed (channel, init, exploration, replay, phase).
TrainOutcome td3_train(SimEnvironment& env, const Td3Config& config, std::uint64_t master_seed);

TrainOutcome ddpg_train(SimEnvironment& env, const Td3Config& config, std::uint64_t master_seed);

/// Sum rate reached by the greedy policy on each channel: start from a
/// random configuration and apply `steps` noise-free actions.
std::vector<double> evaluate_policy(const Td3Agent& agent, SimEnvironment& env,
                                    const std::vector<ChannelRealization>& channels, int steps, Rng& phase_rng);

}  // namespace simopt
