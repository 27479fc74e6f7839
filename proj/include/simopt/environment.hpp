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

#include <utility>

#include "simopt/channel.hpp"
#include "simopt/geometry.hpp"
#include "simopt/link.hpp"
#include "simopt/physics.hpp"

namespace simopt {

enum class ChannelMode { PerEpisode, FixedForRun };

struct EnvironmentParams
{
    PathLossParams path_loss;
    double power_budget = 0.01;                 // watts
    double noise_power = 3.981071705534972e-14;  // watts
    double correlation_floor = 0.0;
};

/// Decoded agent action.
struct DecodedAction
{
    PhaseConfig phases;
    PowerAllocation power;
};

/// Maps raw actor output in (-1, 1)^(2ML + K) to a feasible configuration.
/// Entries 2(lM + m), 2(lM + m) + 1 are the (u, v) pair of atom m on layer l;
/// the last K entries are power logits fed through a unit-temperature
/// softmax scaled by the budget.
DecodedAction decode_action(const VectorXd& raw, int layers, int atoms, int users, double power_budget);

struct StepResult
{
    double reward = 0.0;
    VectorXd next_state;
};

/// SIM downlink seen as an MDP. State: [Re/Im of exp(j theta) (2ML),
/// p / P_t (K), Re/Im of h_k / sqrt(beta_k) per user (2MK)].
class SimEnvironment
{
  public:
    SimEnvironment(const SimGeometry& geom, const EnvironmentParams& params);

    int state_dim() const;
    int action_dim() const;
    int layers() const { return geom_.num_layers(); }
    int atoms() const { return geom_.atoms_per_layer(); }
    int users() const { return geom_.num_users(); }

    const SimGeometry& geometry() const { return geom_; }
    const PropagationSet& propagation() const { return prop_; }
    const CorrelationModel& correlation() const { return corr_; }
    const std::vector<double>& betas() const { return betas_; }
    const ChannelRealization& channel() const { return channel_; }
    const PhaseConfig& phases() const { return phases_; }
    const PowerAllocation& power() const { return power_; }
    double noise_power() const { return params_.noise_power; }
    double power_budget() const { return params_.power_budget; }

    ChannelRealization draw_channel(Rng& rng) const;
    void set_channel(ChannelRealization channel);
    void resample_channel(Rng& rng) { set_channel(draw_channel(rng)); }

    /// Random phases uniform in [0, 2pi), uniform power P_t / K.
    void reset_configuration(Rng& rng);
    void set_configuration(PhaseConfig phases, PowerAllocation power);

    VectorXd encode_state() const;

    /// Applies the action as an absolute reconfiguration; reward is the sum rate.
    StepResult step(const VectorXd& raw_action);

    double current_sum_rate() const;

  private:
    SimGeometry geom_;
    EnvironmentParams params_;
    PropagationSet prop_;
    CorrelationModel corr_;
    std::vector<double> betas_;
    ChannelRealization channel_;
    PhaseConfig phases_;
    PowerAllocation power_;
};

}  // namespace simopt
