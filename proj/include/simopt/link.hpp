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

#include "simopt/channel.hpp"
#include "simopt/common.hpp"
#include "simopt/physics.hpp"

namespace simopt {

/// Per-user transmit powers in watts under a total budget.
struct PowerAllocation
{
    VectorXd p;
    double total_budget = 0.0;

    static PowerAllocation uniform(int users, double budget);

    int users() const { return static_cast<int>(p.size()); }
    /// p_k >= 0 and sum p_k <= P_t (1 + 1e-12).
    bool feasible() const;
    /// Throws std::invalid_argument when infeasible.
    void validate() const;
};

/// A(k, j) = |h_k^H G w_j^1|^2.
MatrixXd effective_gains(const ChannelRealization& channel, const MatrixXcd& G, const MatrixXcd& feed);

/// Same gains from columns already propagated through the SIM (G * feed).
MatrixXd effective_gains(const ChannelRealization& channel, const MatrixXcd& propagated_feed);

VectorXd sinr(const MatrixXd& gains, const PowerAllocation& power, double noise_power);

double sum_rate(const VectorXd& sinr_values);

/// Convenience: sum rate for a phase configuration and power allocation.
double evaluate_sum_rate(const PhaseConfig& phases, const PropagationSet& prop, const ChannelRealization& channel,
                         const PowerAllocation& power, double noise_power);

/// Analytic dR/dtheta (L x M), chain rule through the cascaded SIM product.
MatrixXd sum_rate_phase_gradient(const PhaseConfig& phases, const PropagationSet& prop,
                                 const ChannelRealization& channel, const PowerAllocation& power,
                                 double noise_power);

}  // namespace simopt
