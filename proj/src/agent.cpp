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

#include "simopt/agent.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>
#include <string>

namespace simopt {

Td3Config Td3Config::ddpg(Td3Config base)
{
    base.twin_critics = false;
    base.policy_delay = 1;
    base.smoothing_noise = 0.0;
    return base;
}

void Td3Config::validate() const
{
    if (!(discount >= 0.0 && discount <= 1.0)) throw std::invalid_argument("Td3Config: discount must be in [0, 1]");
    if (buffer_capacity == 0) throw std::invalid_argument("Td3Config: buffer capacity must be positive");
    if (batch_size < 1) throw std::invalid_argument("Td3Config: batch size must be positive");
    if (policy_delay < 1) throw std::invalid_argument("Td3Config: policy delay must be >= 1");
    if (episodes < 0 || steps_per_episode < 0) throw std::invalid_argument("Td3Config: negative episode/step count");
    if (exploration_noise < 0.0 || smoothing_noise < 0.0 || smoothing_clip < 0.0)
        throw std::invalid_argument("Td3Config: noise parameters must be nonnegative");
    if (actor_lr < 0.0 || critic_lr < 0.0) throw std::invalid_argument("Td3Config: learning rates must be nonnegative");
    if (!(actor_tau >= 0.0 && actor_tau <= 1.0) || !(critic_tau >= 0.0 && critic_tau <= 1.0))
        throw std::invalid_argument("Td3Config: soft-update rates must be in [0, 1]");
    if (hidden.empty()) throw std::invalid_argument("Td3Config: need at least one hidden layer");
}

namespace {

std::vector<int> layer_dims(int in, const std::vector<int>& hidden, int out)
{
    std::vector<int> dims{in};
    dims.insert(dims.end(), hidden.begin(), hidden.end());
    dims.push_back(out);
    return dims;
}

}  // namespace

Td3Agent::Td3Agent(int state_dim, int action_dim, const Td3Config& config, Rng& init_rng)
    : config_(config), state_dim_(state_dim), action_dim_(action_dim)
{
    config_.validate();
    const auto actor_dims = layer_dims(state_dim, config.hidden, action_dim);
    const auto critic_dims = layer_dims(state_dim + action_dim, config.hidden, 1);
    actor_ = Mlp::create(actor_dims, Activation::Tanh, Activation::Tanh, init_rng, 0.1);
    critic1_ = Mlp::create(critic_dims, Activation::Tanh, Activation::Linear, init_rng);
    critic2_ = Mlp::create(critic_dims, Activation::Tanh, Activation::Linear, init_rng);
    target_actor_ = actor_;
    target_critic1_ = critic1_;
    target_critic2_ = critic2_;
    target_actor_.reset_optimizer();
    target_critic1_.reset_optimizer();
    target_critic2_.reset_optimizer();
}

VectorXd Td3Agent::act(const VectorXd& state) const
{
    Vector s = state.cast<float>();
    return actor_.forward(s).cast<double>();
}

VectorXd Td3Agent::explore(const VectorXd& state, Rng& rng) const
{
    VectorXd a = act(state);
    std::normal_distribution<double> noise(0.0, config_.exploration_noise);
    for (Eigen::Index i = 0; i < a.size(); ++i) {
        const double eps = config_.exploration_noise > 0.0 ? noise(rng) : 0.0;
        a(i) = std::clamp(a(i) + eps, -1.0, 1.0);
    }
    return a;
}

void Td3Agent::critic_input(const Matrix& states, const Matrix& actions, Matrix& out) const
{
    out.resize(state_dim_ + action_dim_, states.cols());
    out.topRows(state_dim_) = states;
    out.bottomRows(action_dim_) = actions;
}

Eigen::VectorXf Td3Agent::compute_targets(const ReplayBuffer::Batch& batch, Rng& rng) const
{
    Workspace& ws = workspace_;
    Matrix& next_actions = ws.next_actions;
    next_actions = target_actor_.forward_batch(batch.next_states, ws.target_actor);
    if (config_.smoothing_noise > 0.0) {
        std::normal_distribution<float> noise(0.0f, static_cast<float>(config_.smoothing_noise));
        const float clip = static_cast<float>(config_.smoothing_clip);
        for (Eigen::Index i = 0; i < next_actions.size(); ++i) {
            const float eps = std::clamp(noise(rng), -clip, clip);
            next_actions.data()[i] = std::clamp(next_actions.data()[i] + eps, -1.0f, 1.0f);
        }
    }
    critic_input(batch.next_states, next_actions, ws.next_input);
    Eigen::VectorXf q = target_critic1_.forward_batch(ws.next_input, ws.target_critic1).row(0).transpose();
    if (config_.twin_critics)
        q = q.cwiseMin(target_critic2_.forward_batch(ws.next_input, ws.target_critic2).row(0).transpose());
    return reward_scale_ * batch.rewards + static_cast<float>(config_.discount) * q;
}

void Td3Agent::update_critic(Mlp& critic, Mlp::Cache& cache, Mlp::Gradients& grads, const Matrix& input,
                             const Eigen::VectorXf& targets)
{
    const Matrix& q = critic.forward_batch(input, cache);
    const float n = static_cast<float>(input.cols());
    // d/dQ of mean (Q - y)^2.
    workspace_.dq = (2.0f / n) * (q.row(0) - targets.transpose());
    critic.backward(cache, workspace_.dq, grads);
    critic.adam_step(grads, static_cast<float>(config_.critic_lr));
}

void Td3Agent::update_actor(const Matrix& states)
{
    Workspace& ws = workspace_;
    const Matrix& actions = actor_.forward_batch(states, ws.actor);
    critic_input(states, actions, ws.actor_input);
    critic1_.forward_batch(ws.actor_input, ws.critic1);
    // Ascend mean Q1(s, mu(s)) by descending its negative.
    ws.dq.setConstant(1, states.cols(), -1.0f / static_cast<float>(states.cols()));
    ws.action_grad = critic1_.input_gradient(ws.critic1, ws.dq).bottomRows(action_dim_);
    actor_.backward(ws.actor, ws.action_grad, ws.actor_grads);
    actor_.adam_step(ws.actor_grads, static_cast<float>(config_.actor_lr));
}

void Td3Agent::update(const ReplayBuffer::Batch& batch, Rng& rng)
{
    const Eigen::VectorXf y = compute_targets(batch, rng);
    Workspace& ws = workspace_;
    critic_input(batch.states, batch.actions, ws.input);
    update_critic(critic1_, ws.critic1, ws.critic1_grads, ws.input, y);
    if (config_.twin_critics) update_critic(critic2_, ws.critic2, ws.critic2_grads, ws.input, y);
    ++critic_updates_;

    if (critic_updates_ % config_.policy_delay == 0) {
        update_actor(batch.states);
        ++actor_updates_;
        target_actor_.soft_update_from(actor_, static_cast<float>(config_.actor_tau));
        target_critic1_.soft_update_from(critic1_, static_cast<float>(config_.critic_tau));
        if (config_.twin_critics)
            target_critic2_.soft_update_from(critic2_, static_cast<float>(config_.critic_tau));
    }
}

namespace {

TrainOutcome train_loop(SimEnvironment& env, const Td3Config& config, std::uint64_t master_seed,
                        const std::string& algorithm)
{
    config.validate();
    const auto started = std::chrono::steady_clock::now();

    Rng init_rng = make_substream(master_seed, stream::kInit);
    Rng channel_rng = make_substream(master_seed, stream::kChannel);
    Rng explore_rng = make_substream(master_seed, stream::kExploration);
    Rng replay_rng = make_substream(master_seed, stream::kReplay);
    Rng smoothing_rng = make_substream(master_seed, stream::kSmoothing);
    Rng phase_rng = make_substream(master_seed, stream::kPhase);

    TrainOutcome out{Td3Agent(env.state_dim(), env.action_dim(), config, init_rng), RunRecord{}};
    Td3Agent& agent = out.agent;
    RunRecord& rec = out.record;
    rec.algorithm = algorithm;
    rec.seed = master_seed;
    rec.trace.reserve(static_cast<std::size_t>(config.episodes) * config.steps_per_episode);

    ReplayBuffer buffer(config.buffer_capacity, env.state_dim(), env.action_dim());
    const std::int64_t warmup = config.effective_warmup();
    std::uniform_real_distribution<double> uniform_action(-1.0, 1.0);
    std::int64_t total = 0;
    double warmup_sum = 0.0;

    for (int ep = 0; ep < config.episodes; ++ep) {
        if (ep == 0 || config.channel_mode == ChannelMode::PerEpisode) env.resample_channel(channel_rng);
        env.reset_configuration(phase_rng);
        VectorXd state = env.encode_state();
        double episode_sum = 0.0;

        for (int t = 0; t < config.steps_per_episode; ++t, ++total) {
            VectorXd action;
            if (total < warmup) {
                action.resize(env.action_dim());
                for (Eigen::Index i = 0; i < action.size(); ++i) action(i) = uniform_action(explore_rng);
            } else {
                action = agent.explore(state, explore_rng);
            }
            StepResult step = env.step(action);
            if (!std::isfinite(step.reward))
                throw std::runtime_error(algorithm + ": non-finite reward at episode " + std::to_string(ep) +
                                         ", step " + std::to_string(t));

            buffer.add(Transition{state.cast<float>(), action.cast<float>(), static_cast<float>(step.reward),
                                  step.next_state.cast<float>()});
            rec.trace.push_back({ep, t, step.reward});
            episode_sum += step.reward;

            if (total < warmup) {
                warmup_sum += step.reward;
                if (total + 1 == warmup && config.normalize_reward && warmup_sum > 0.0)
                    agent.set_reward_scale(static_cast<float>(static_cast<double>(warmup) / warmup_sum));
            } else if (buffer.size() >= static_cast<std::size_t>(config.batch_size)) {
                agent.update(buffer.sample(config.batch_size, replay_rng), smoothing_rng);
            }
            state = std::move(step.next_state);
        }
        rec.episode_means.push_back(config.steps_per_episode > 0 ? episode_sum / config.steps_per_episode : 0.0);
    }

    rec.critic_updates = agent.critic_updates();
    rec.actor_updates = agent.actor_updates();
    rec.reward_scale = agent.reward_scale();
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
}

}  // namespace

TrainOutcome td3_train(SimEnvironment& env, const Td3Config& config, std::uint64_t master_seed)
{
    return train_loop(env, config, master_seed, "td3");
}

TrainOutcome ddpg_train(SimEnvironment& env, const Td3Config& config, std::uint64_t master_seed)
{
    return train_loop(env, Td3Config::ddpg(config), master_seed, "ddpg");
}

std::vector<double> evaluate_policy(const Td3Agent& agent, SimEnvironment& env,
                                    const std::vector<ChannelRealization>& channels, int steps, Rng& phase_rng)
{
    std::vector<double> rates;
    rates.reserve(channels.size());
    for (const auto& ch : channels) {
        env.set_channel(ch);
        env.reset_configuration(phase_rng);
        double rate = env.current_sum_rate();
        for (int t = 0; t < steps; ++t) rate = env.step(agent.act(env.encode_state())).reward;
        rates.push_back(rate);
    }
    return rates;
}

}  // namespace simopt
