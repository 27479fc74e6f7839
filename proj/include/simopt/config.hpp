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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "simopt/agent.hpp"
#include "simopt/baselines.hpp"
#include "simopt/environment.hpp"
#include "simopt/geometry.hpp"

namespace simopt {

enum class Algorithm { Td3, Ddpg, Ao, IwfRandom };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& name);

/// Physical scenario. Key names carry their units.
struct ScenarioConfig
{
    double carrier_frequency_ghz = 28.0;
    int num_layers = 2;
    int atoms_per_layer = 9;
    int num_users = 4;  // the BS has as many antennas as users
    double bs_height_m = 10.0;
    double user_spacing_m = 10.0;
    double sim_thickness_wavelengths = 5.0;
    double atom_pitch_wavelengths = 0.5;
    double antenna_spacing_wavelengths = 0.5;
    std::optional<double> bs_to_sim_gap_m;  // default: one layer spacing
    double transmit_power_dbm = 10.0;
    double noise_power_dbm = -104.0;
    double path_loss_ref_db = -30.0;
    double path_loss_ref_distance_m = 1.0;
    double path_loss_exponent = 2.0;
    double correlation_floor = 0.0;

    double wavelength_m() const { return kSpeedOfLight / (carrier_frequency_ghz * 1e9); }
    SceneParams scene() const;
    SimGeometry geometry() const { return SimGeometry::create(scene()); }
    EnvironmentParams environment() const;
};

struct IwfConfig
{
    double tolerance = 1e-12;
    int max_iterations = 100;
};

struct SweepConfig
{
    std::vector<int> values;
    std::vector<Algorithm> algorithms;
};

struct ExperimentConfig
{
    ScenarioConfig scenario;
    Algorithm algorithm = Algorithm::Td3;
    Td3Config td3 = desk_scale_td3();
    AoConfig ao;
    IwfConfig iwf;
    SweepConfig sweep;
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    int eval_channels = 50;
    int eval_steps = 10;
    std::string output_dir = "runs";
    int workers = 1;
    bool paper_scale = false;

    /// 30 episodes x 500 steps.
    static Td3Config desk_scale_td3();
    /// 100 episodes x 6000 steps.
    void apply_paper_scale();

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

nlohmann::json to_json(const ExperimentConfig& cfg);

/// Missing keys keep their defaults; unknown keys and invalid values are
/// rejected.
ExperimentConfig config_from_json(const nlohmann::json& j);

ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace simopt
