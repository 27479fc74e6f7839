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

#include <doctest.h>

#include <cmath>
#include <set>

#include "simopt/agent.hpp"
#include "test_helpers.hpp"

using namespace simopt;
using simopt::testing::small_geometry;

namespace {

Transition tagged(int tag, int sdim, int adim)
{
    return {Eigen::VectorXf::Constant(sdim, float(tag)), Eigen::VectorXf::Constant(adim, float(tag)), float(tag),
            Eigen::VectorXf::Constant(sdim, float(tag) + 0.5f)};
}

Td3Config tiny_config()
{
    Td3Config c;
    c.episodes = 3;
    c.steps_per_episode = 40;
    c.batch_size = 8;
    c.warmup_steps = 16;
    c.hidden = {16, 12};
    c.buffer_capacity = 1000;
    return c;
}

SimEnvironment small_env(int layers = 2, int atoms = 4, int users = 2)
{
    return SimEnvironment(small_geometry(layers, atoms, users), EnvironmentParams{});
}

ReplayBuffer filled_buffer(const SimEnvironment& env, int n, Rng& rng)
{
    ReplayBuffer buf(1000, env.state_dim(), env.action_dim());
    std::normal_distribution<float> g(0.0f, 1.0f);
    for (int i = 0; i < n; ++i) {
        Transition t;
        t.state = Eigen::VectorXf::NullaryExpr(env.state_dim(), [&] { return g(rng); });
        t.action = Eigen::VectorXf::NullaryExpr(env.action_dim(), [&] { return std::tanh(g(rng)); });
        t.reward = std::abs(g(rng));
        t.next_state = Eigen::VectorXf::NullaryExpr(env.state_dim(), [&] { return g(rng); });
        buf.add(t);
    }
    return buf;
}

}  // namespace

TEST_CASE("replay buffer")
{
    SUBCASE("eviction drops the oldest")
    {
        const std::size_t cap = 7;
        ReplayBuffer buf(cap, 3, 2);
        const int extra = 5;
        for (int i = 0; i < int(cap) + extra; ++i) buf.add(tagged(i, 3, 2));
        CHECK(buf.size() == cap);
        std::set<int> seen;
        for (std::size_t i = 0; i < buf.size(); ++i) seen.insert(int(buf.at(i).reward));
        for (int i = 0; i < extra; ++i) CHECK(seen.count(i) == 0);
        for (int i = extra; i < int(cap) + extra; ++i) CHECK(seen.count(i) == 1);
        CHECK(buf.at(0).reward == float(extra));
        CHECK(buf.at(cap - 1).next_state(0) == float(cap + extra - 1) + 0.5f);
    }
    SUBCASE("batch members are distinct and consistent")
    {
        ReplayBuffer buf(100, 3, 2);
        for (int i = 0; i < 40; ++i) buf.add(tagged(i, 3, 2));
        Rng rng(3);
        for (int trial = 0; trial < 20; ++trial) {
            auto b = buf.sample(40, rng);
            std::set<float> tags(b.rewards.data(), b.rewards.data() + b.rewards.size());
            CHECK(tags.size() == 40);
            for (int j = 0; j < 40; ++j) {
                CHECK(b.states(0, j) == b.rewards(j));
                CHECK(b.actions(1, j) == b.rewards(j));
                CHECK(b.next_states(2, j) == b.rewards(j) + 0.5f);
            }
        }
        CHECK_THROWS(buf.sample(41, rng));
    }
    SUBCASE("dimension mismatch")
    {
        ReplayBuffer buf(10, 3, 2);
        CHECK_THROWS_AS(buf.add(tagged(0, 4, 2)), std::invalid_argument);
    }
}

TEST_CASE("state encoding")
{
    SUBCASE("dimensions")
    {
        CHECK(small_env(1, 1, 1).state_dim() == 5);
        CHECK(small_env(1, 1, 1).action_dim() == 3);
        auto env = small_env(2, 4, 2);
        CHECK(env.state_dim() == 2 * 4 * 2 + 2 + 2 * 4 * 2);
        CHECK(env.action_dim() == 2 * 4 * 2 + 2);
        CHECK(env.encode_state().size() == env.state_dim());
    }
    SUBCASE("zero phases and zero channel")
    {
        auto env = small_env(2, 4, 2);
        const VectorXd s = env.encode_state();
        for (int i = 0; i < 16; ++i) CHECK(s(i) == (i % 2 == 0 ? 1.0 : 0.0));
        CHECK(s(16) == 0.5);
        CHECK(s(17) == 0.5);
        CHECK(s.tail(16).norm() == 0.0);
    }
    SUBCASE("content reconstructs the configuration")
    {
        auto env = small_env(2, 4, 2);
        Rng rng(5);
        env.resample_channel(rng);
        env.reset_configuration(rng);
        const VectorXd s = env.encode_state();
        for (int l = 0; l < 2; ++l)
            for (int m = 0; m < 4; ++m) {
                const double th = env.phases()(l, m);
                CHECK(s(2 * (l * 4 + m)) == doctest::Approx(std::cos(th)));
                CHECK(s(2 * (l * 4 + m) + 1) == doctest::Approx(std::sin(th)));
            }
        for (int k = 0; k < 2; ++k) {
            const double root = std::sqrt(env.channel().beta[k]);
            for (int m = 0; m < 4; ++m) {
                CHECK(s(18 + 8 * k + 2 * m) * root == doctest::Approx(env.channel().h[k](m).real()).epsilon(1e-12));
                CHECK(s(18 + 8 * k + 2 * m + 1) * root ==
                      doctest::Approx(env.channel().h[k](m).imag()).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("action decoding")
{
    VectorXd raw(2 * 2 + 2);
    raw << 1, 0, 0, 1, std::log(3.0), 0.0;
    auto d = decode_action(raw, 1, 2, 2, 0.01);
    CHECK(d.phases(0, 0) == 0.0);
    CHECK(d.phases(0, 1) == doctest::Approx(kPi / 2));
    CHECK(d.power.p(0) == doctest::Approx(0.0075).epsilon(1e-14));
    CHECK(d.power.p(1) == doctest::Approx(0.0025).epsilon(1e-14));

    raw << 1e-12, -1e-12, -1, -1e-3, 0.3, 0.3;
    d = decode_action(raw, 1, 2, 2, 0.01);
    CHECK(d.phases(0, 0) == 0.0);
    CHECK(d.phases(0, 1) == doctest::Approx(kPi + std::atan(1e-3)));
    CHECK(d.power.p(0) == doctest::Approx(0.005));
    CHECK(d.power.p(1) == doctest::Approx(0.005));

    CHECK_THROWS_AS(decode_action(VectorXd::Zero(5), 1, 2, 2, 0.01), std::invalid_argument);

    Rng rng(17);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        VectorXd a = VectorXd::NullaryExpr(2 * 3 * 4 + 3, [&] { return u(rng); });
        auto dd = decode_action(a, 3, 4, 3, 0.01);
        CHECK(dd.power.feasible());
        CHECK(dd.power.p.sum() == doctest::Approx(0.01).epsilon(1e-14));
        CHECK(dd.phases.theta().minCoeff() >= 0.0);
        CHECK(dd.phases.theta().maxCoeff() < kTwoPi);
    }
}

TEST_CASE("environment step")
{
    auto env = small_env(2, 4, 2);
    Rng rng(23);
    env.resample_channel(rng);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        VectorXd a = VectorXd::NullaryExpr(env.action_dim(), [&] { return u(rng); });
        const auto r1 = env.step(a);
        const auto r2 = env.step(a);
        CHECK(r1.reward >= 0.0);
        CHECK(r1.reward == r2.reward);
        CHECK(r1.next_state == env.encode_state());
        CHECK(r1.reward == env.current_sum_rate());
    }

    SUBCASE("M = 1 ignores the phase part")
    {
        auto one = small_env(3, 1, 1);
        Rng r(2);
        one.resample_channel(r);
        VectorXd a = VectorXd::NullaryExpr(one.action_dim(), [&] { return u(r); });
        const double base = one.step(a).reward;
        for (int i = 0; i < 50; ++i) {
            VectorXd b = VectorXd::NullaryExpr(one.action_dim(), [&] { return u(r); });
            b.tail(1) = a.tail(1);
            CHECK(std::abs(one.step(b).reward - base) <= 1e-12 * std::max(base, 1e-300));
        }
    }
}

TEST_CASE("target values")
{
    auto env = small_env();
    Rng rng(29);
    auto buf = filled_buffer(env, 64, rng);
    auto batch = buf.sample(32, rng);

    SUBCASE("zero discount gives the reward")
    {
        Td3Config c = tiny_config();
        c.discount = 0.0;
        Rng init(1);
        Td3Agent agent(env.state_dim(), env.action_dim(), c, init);
        Rng s(2);
        const Eigen::VectorXf y = agent.compute_targets(batch, s);
        for (int i = 0; i < 32; ++i) CHECK(y(i) == batch.rewards(i));

        Rng init2(1);
        Td3Agent ddpg(env.state_dim(), env.action_dim(), Td3Config::ddpg(c), init2);
        const Eigen::VectorXf yd = ddpg.compute_targets(batch, s);
        for (int i = 0; i < 32; ++i) CHECK(yd(i) == batch.rewards(i));
    }
    SUBCASE("swapping twin critics leaves targets unchanged")
    {
        Rng init(4);
        Td3Agent a(env.state_dim(), env.action_dim(), tiny_config(), init);
        Td3Agent b = a;
        std::swap(b.mutable_critic1(), b.mutable_critic2());
        std::swap(b.mutable_target_critic1(), b.mutable_target_critic2());
        Rng s1(9), s2(9);
        CHECK(a.compute_targets(batch, s1) == b.compute_targets(batch, s2));
    }
    SUBCASE("reward scale multiplies the reward term")
    {
        Td3Config c = tiny_config();
        c.smoothing_noise = 0.0;
        Rng init(6);
        Td3Agent a(env.state_dim(), env.action_dim(), c, init);
        Rng s1(1), s2(1);
        const Eigen::VectorXf y1 = a.compute_targets(batch, s1);
        a.set_reward_scale(3.0f);
        const Eigen::VectorXf y3 = a.compute_targets(batch, s2);
        for (int i = 0; i < 32; ++i) CHECK(y3(i) - y1(i) == doctest::Approx(2.0 * batch.rewards(i)).epsilon(1e-5));
    }
}

TEST_CASE("delayed actor updates")
{
    auto env = small_env();
    Rng rng(31);
    auto buf = filled_buffer(env, 64, rng);
    for (int delay : {1, 2, 3, 4}) {
        Td3Config c = tiny_config();
        c.policy_delay = delay;
        Rng init(delay);
        Td3Agent agent(env.state_dim(), env.action_dim(), c, init);
        const auto actor0 = agent.actor().flat_parameters();
        for (int n = 1; n <= 13; ++n) {
            agent.update(buf.sample(8, rng), rng);
            CHECK(agent.critic_updates() == n);
            CHECK(agent.actor_updates() == n / delay);
        }
        if (delay <= 13) CHECK(agent.actor().flat_parameters() != actor0);
    }
    Td3Config bad = tiny_config();
    bad.policy_delay = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = tiny_config();
    bad.discount = 1.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("training loop")
{
    SUBCASE("bit-reproducible")
    {
        auto e1 = small_env(), e2 = small_env();
        auto a = td3_train(e1, tiny_config(), 99);
        auto b = td3_train(e2, tiny_config(), 99);
        REQUIRE(a.record.trace.size() == 120);
        for (std::size_t i = 0; i < a.record.trace.size(); ++i)
            CHECK(a.record.trace[i].reward == b.record.trace[i].reward);
        CHECK(a.agent.actor().flat_parameters() == b.agent.actor().flat_parameters());
        auto e3 = small_env();
        auto c = td3_train(e3, tiny_config(), 100);
        CHECK(c.record.trace.back().reward != a.record.trace.back().reward);
    }
    SUBCASE("update counts")
    {
        auto env = small_env();
        auto out = td3_train(env, tiny_config(), 5);
        // 120 steps, 16 warm-up steps without updates
        CHECK(out.record.critic_updates == 104);
        CHECK(out.record.actor_updates == 52);
        CHECK(out.record.episode_means.size() == 3);
        for (const auto& row : out.record.trace) CHECK(row.reward >= 0.0);
        CHECK(out.record.reward_scale > 1.0f);
    }
    SUBCASE("zero learning rates leave the networks untouched")
    {
        Td3Config c = tiny_config();
        c.actor_lr = 0.0;
        c.critic_lr = 0.0;
        auto env = small_env();
        auto out = td3_train(env, c, 12);
        Rng init = make_substream(12, stream::kInit);
        Td3Agent fresh(env.state_dim(), env.action_dim(), c, init);
        CHECK(out.agent.actor().flat_parameters() == fresh.actor().flat_parameters());
        CHECK(out.agent.critic1().flat_parameters() == fresh.critic1().flat_parameters());
        CHECK(out.agent.critic2().flat_parameters() == fresh.critic2().flat_parameters());
        CHECK(out.agent.target_actor().flat_parameters() == fresh.actor().flat_parameters());
    }
    SUBCASE("warm-up only trace equals a replayed random policy")
    {
        Td3Config c = tiny_config();
        c.actor_lr = 0.0;
        c.critic_lr = 0.0;
        c.warmup_steps = c.episodes * c.steps_per_episode;
        auto env = small_env();
        auto out = td3_train(env, c, 7);

        auto replay = small_env();
        Rng channel = make_substream(7, stream::kChannel);
        Rng phase = make_substream(7, stream::kPhase);
        Rng explore = make_substream(7, stream::kExploration);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        std::size_t row = 0;
        for (int ep = 0; ep < c.episodes; ++ep) {
            replay.resample_channel(channel);
            replay.reset_configuration(phase);
            for (int t = 0; t < c.steps_per_episode; ++t, ++row) {
                VectorXd a(replay.action_dim());
                for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = u(explore);
                CHECK(out.record.trace[row].reward == replay.step(a).reward);
            }
        }
        CHECK(out.record.critic_updates == 0);
    }
    SUBCASE("no episodes")
    {
        Td3Config c = tiny_config();
        c.episodes = 0;
        auto env = small_env();
        auto out = td3_train(env, c, 1);
        CHECK(out.record.trace.empty());
        CHECK(out.record.critic_updates == 0);
    }
    SUBCASE("ddpg is td3 with the three ablations")
    {
        auto e1 = small_env(), e2 = small_env();
        auto d = ddpg_train(e1, tiny_config(), 3);
        auto t = td3_train(e2, Td3Config::ddpg(tiny_config()), 3);
        REQUIRE(d.record.trace.size() == t.record.trace.size());
        for (std::size_t i = 0; i < d.record.trace.size(); ++i)
            CHECK(d.record.trace[i].reward == t.record.trace[i].reward);
        CHECK(d.record.actor_updates == d.record.critic_updates);
        CHECK(d.record.algorithm == "ddpg");

        Td3Config back = Td3Config::ddpg(tiny_config());
        back.twin_critics = true;
        back.policy_delay = tiny_config().policy_delay;
        back.smoothing_noise = tiny_config().smoothing_noise;
        auto e3 = small_env(), e4 = small_env();
        auto x = td3_train(e3, back, 3);
        auto y = td3_train(e4, tiny_config(), 3);
        for (std::size_t i = 0; i < x.record.trace.size(); ++i)
            CHECK(x.record.trace[i].reward == y.record.trace[i].reward);
    }
    SUBCASE("fixed channel mode keeps one realisation")
    {
        Td3Config c = tiny_config();
        c.channel_mode = ChannelMode::FixedForRun;
        c.warmup_steps = c.episodes * c.steps_per_episode;
        auto env = small_env();
        td3_train(env, c, 8);
        Rng channel = make_substream(8, stream::kChannel);
        auto first = env.draw_channel(channel);
        for (int k = 0; k < 2; ++k) CHECK(env.channel().h[k] == first.h[k]);
    }
}

TEST_CASE("greedy evaluation")
{
    auto env = small_env();
    Rng init(3);
    Td3Agent agent(env.state_dim(), env.action_dim(), tiny_config(), init);
    Rng ch(4);
    std::vector<ChannelRealization> chans{env.draw_channel(ch), env.draw_channel(ch)};
    Rng p1(5), p2(5);
    auto r1 = evaluate_policy(agent, env, chans, 3, p1);
    auto r2 = evaluate_policy(agent, env, chans, 3, p2);
    CHECK(r1.size() == 2);
    CHECK(r1 == r2);
    Rng p3(5);
    auto r0 = evaluate_policy(agent, env, chans, 0, p3);
    CHECK(r0[0] >= 0.0);
}
