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

#include <vector>

#include "simopt/channel.hpp"
#include "simopt/link.hpp"
#include "simopt/physics.hpp"
#include "simopt/rng.hpp"

namespace simopt {

struct IwfResult
{
    PowerAllocation power;
    double water_level = 0.0;
    int iterations = 0;
    bool converged = false;
    bool degenerate = false;  // every effective gain was zero
};

/// Single water-filling pass: p_k = max(0, mu - 1/g_k) with mu found by
/// bisection so that sum p_k = P_t. Zero gains are never served.
IwfResult water_fill(const VectorXd& gains, double power_budget);

/// Iterative water-filling treating interference as noise. Each pass uses
/// g_k = A_kk / (sum_{j != k} A_kj p_j + sigma^2) from the previous powers.
/// Stops when the max-norm change is below tol; returns the best-sum-rate
/// allocation seen if max_iter is reached first.
IwfResult iterative_water_filling(const MatrixXd& gains, double noise_power, double power_budget,
                                  double tol = 1e-12, int max_iter = 100);

/// Fixed inputs of one optimisation problem.
struct ProblemInstance
{
    const PropagationSet* prop = nullptr;
    const ChannelRealization* channel = nullptr;
    double noise_power = 0.0;
    double power_budget = 0.0;
};

struct AoConfig
{
    double step_size = 0.5;     // radians, applied to the max-normalised gradient
    int max_outer = 50;
    int max_inner = 50;
    double tolerance = 1e-6;    // relative outer sum-rate gain
    double min_step = 1e-8;     // radians
    double iwf_tolerance = 1e-12;
    int iwf_max_iter = 100;

    void validate() const;
};

struct BaselineResult
{
    PhaseConfig phases;
    PowerAllocation power;
    double sum_rate = 0.0;
    std::vector<double> trace;  // sum rate after each accepted outer iteration
    bool converged = true;
};

/// Alternating optimisation from a random phase start drawn from rng:
/// water-filling with phases fixed, then backtracking gradient ascent on the
/// phases with powers fixed, until the outer relative gain < tolerance.
BaselineResult ao_optimize(const ProblemInstance& problem, const AoConfig& config, Rng& rng);

/// Same alternation from a caller-supplied start.
BaselineResult ao_optimize_from(const ProblemInstance& problem, const AoConfig& config, PhaseConfig start);

/// Phases uniform in [0, 2pi), then iterative water-filling.
BaselineResult random_phase_iwf(const ProblemInstance& problem, Rng& rng, double iwf_tol = 1e-12,
                                int iwf_max_iter = 100);

}  // namespace simopt
