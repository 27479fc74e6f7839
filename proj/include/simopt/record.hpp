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
#include <string>
#include <vector>

#include <json.hpp>

namespace simopt {

struct TraceRow
{
    int episode = 0;
    int step = 0;
    double reward = 0.0;
};

/// One experiment run: what was run, what it produced.
struct RunRecord
{
    std::string algorithm;
    std::uint64_t seed = 0;
    nlohmann::json config;
    std::vector<TraceRow> trace;
    std::vector<double> episode_means;
    std::vector<double> eval_rates;  // one per held-out channel
    double final_rate = 0.0;         // mean of eval_rates
    double wall_seconds = 0.0;
    std::int64_t critic_updates = 0;
    std::int64_t actor_updates = 0;
    double reward_scale = 1.0;
    bool converged = true;
    std::vector<std::string> flags;
};

}  // namespace simopt
