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

#include "simopt/config.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace simopt {

using nlohmann::json;

std::string to_string(Algorithm a)
{
    switch (a) {
    case Algorithm::Td3: return "td3";
    case Algorithm::Ddpg: return "ddpg";
    case Algorithm::Ao: return "ao";
    case Algorithm::IwfRandom: return "iwf-random";
    }
    return "unknown";
}

Algorithm algorithm_from_string(const std::string& name)
{
    if (name == "td3") return Algorithm::Td3;
    if (name == "ddpg") return Algorithm::Ddpg;
    if (name == "ao") return Algorithm::Ao;
    if (name == "iwf-random") return Algorithm::IwfRandom;
    throw std::invalid_argument("unknown algorithm '" + name + "' (expected td3, ddpg, ao or iwf-random)");
}

SceneParams ScenarioConfig::scene() const
{
    const double lambda = wavelength_m();
    SceneParams p;
    p.num_layers = num_layers;
    p.atoms_per_layer = atoms_per_layer;
    p.num_antennas = num_users;
    p.num_users = num_users;
    p.wavelength = lambda;
    p.atom_pitch_x = atom_pitch_wavelengths * lambda;
    p.atom_pitch_y = atom_pitch_wavelengths * lambda;
    p.sim_thickness = sim_thickness_wavelengths * lambda;
    p.bs_height = bs_height_m;
    p.user_spacing = user_spacing_m;
    p.antenna_spacing = antenna_spacing_wavelengths * lambda;
    p.bs_to_sim_gap = bs_to_sim_gap_m;
    return p;
}

EnvironmentParams ScenarioConfig::environment() const
{
    EnvironmentParams e;
    e.path_loss.ref_gain = db_to_linear(path_loss_ref_db);
    e.path_loss.ref_distance = path_loss_ref_distance_m;
    e.path_loss.exponent = path_loss_exponent;
    e.power_budget = dbm_to_watts(transmit_power_dbm);
    e.noise_power = dbm_to_watts(noise_power_dbm);
    e.correlation_floor = correlation_floor;
    return e;
}

Td3Config ExperimentConfig::desk_scale_td3()
{
    Td3Config c;
    c.episodes = 30;
    c.steps_per_episode = 500;
    return c;
}

void ExperimentConfig::apply_paper_scale()
{
    paper_scale = true;
    td3.episodes = 100;
    td3.steps_per_episode = 6000;
}

void ExperimentConfig::validate() const
{
    if (!(scenario.carrier_frequency_ghz > 0.0)) throw std::invalid_argument("config: carrier_frequency_ghz must be positive");
    if (!(scenario.path_loss_ref_distance_m > 0.0))
        throw std::invalid_argument("config: path_loss_ref_distance_m must be positive");
    if (scenario.correlation_floor < 0.0) throw std::invalid_argument("config: correlation_floor must be nonnegative");
    try {
        (void)scenario.geometry();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("config: scenario: ") + e.what());
    }
    td3.validate();
    ao.validate();
    if (!(iwf.tolerance > 0.0) || iwf.max_iterations < 1)
        throw std::invalid_argument("config: iwf tolerance and max_iterations must be positive");
    if (seeds.empty()) throw std::invalid_argument("config: seeds must be nonempty");
    if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size())
        throw std::invalid_argument("config: seeds must be distinct");
    if (eval_channels < 1) throw std::invalid_argument("config: evaluation.channels must be >= 1");
    if (eval_steps < 0) throw std::invalid_argument("config: evaluation.steps must be >= 0");
    if (workers < 1) throw std::invalid_argument("config: workers must be >= 1");
    if (output_dir.empty()) throw std::invalid_argument("config: output_dir must be nonempty");
}

namespace {

std::string channel_mode_name(ChannelMode m)
{
    return m == ChannelMode::PerEpisode ? "per-episode" : "fixed-for-run";
}

ChannelMode channel_mode_from(const std::string& s)
{
    if (s == "per-episode") return ChannelMode::PerEpisode;
    if (s == "fixed-for-run") return ChannelMode::FixedForRun;
    throw std::invalid_argument("config: td3.channel_mode must be per-episode or fixed-for-run");
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where)
{
    if (!obj.is_object()) throw std::invalid_argument("config: " + where + " must be an object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) throw std::invalid_argument("config: unknown key '" + where + "." + key + "'");
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where)
{
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw std::invalid_argument("config: bad value for '" + where + "." + key + "': " + e.what());
    }
}

}  // namespace

json to_json(const ExperimentConfig& c)
{
    const auto& s = c.scenario;
    json scenario = {
        {"carrier_frequency_ghz", s.carrier_frequency_ghz},
        {"num_layers", s.num_layers},
        {"atoms_per_layer", s.atoms_per_layer},
        {"num_users", s.num_users},
        {"bs_height_m", s.bs_height_m},
        {"user_spacing_m", s.user_spacing_m},
        {"sim_thickness_wavelengths", s.sim_thickness_wavelengths},
        {"atom_pitch_wavelengths", s.atom_pitch_wavelengths},
        {"antenna_spacing_wavelengths", s.antenna_spacing_wavelengths},
        {"bs_to_sim_gap_m", s.bs_to_sim_gap_m ? json(*s.bs_to_sim_gap_m) : json(nullptr)},
        {"transmit_power_dbm", s.transmit_power_dbm},
        {"noise_power_dbm", s.noise_power_dbm},
        {"path_loss_ref_db", s.path_loss_ref_db},
        {"path_loss_ref_distance_m", s.path_loss_ref_distance_m},
        {"path_loss_exponent", s.path_loss_exponent},
        {"correlation_floor", s.correlation_floor},
    };
    const auto& t = c.td3;
    json td3 = {
        {"discount", t.discount},
        {"buffer_size", t.buffer_capacity},
        {"batch_size", t.batch_size},
        {"exploration_noise", t.exploration_noise},
        {"smoothing_noise", t.smoothing_noise},
        {"smoothing_clip", t.smoothing_clip},
        {"policy_delay", t.policy_delay},
        {"episodes", t.episodes},
        {"steps_per_episode", t.steps_per_episode},
        {"actor_learning_rate", t.actor_lr},
        {"critic_learning_rate", t.critic_lr},
        {"actor_soft_update", t.actor_tau},
        {"critic_soft_update", t.critic_tau},
        {"twin_critics", t.twin_critics},
        {"warmup_steps", t.warmup_steps},
        {"hidden_layers", t.hidden},
        {"channel_mode", channel_mode_name(t.channel_mode)},
        {"normalize_reward", t.normalize_reward},
    };
    json ao = {
        {"step_size_rad", c.ao.step_size},
        {"max_outer_iterations", c.ao.max_outer},
        {"max_inner_steps", c.ao.max_inner},
        {"tolerance", c.ao.tolerance},
        {"min_step_rad", c.ao.min_step},
    };
    json algos = json::array();
    for (auto a : c.sweep.algorithms) algos.push_back(to_string(a));
    return {
        {"scenario", scenario},
        {"algorithm", to_string(c.algorithm)},
        {"td3", td3},
        {"ao", ao},
        {"iwf", {{"tolerance", c.iwf.tolerance}, {"max_iterations", c.iwf.max_iterations}}},
        {"sweep", {{"values", c.sweep.values}, {"algorithms", algos}}},
        {"seeds", c.seeds},
        {"evaluation", {{"channels", c.eval_channels}, {"steps", c.eval_steps}}},
        {"output_dir", c.output_dir},
        {"workers", c.workers},
        {"paper_scale", c.paper_scale},
    };
}

ExperimentConfig config_from_json(const json& j)
{
    ExperimentConfig c;
    reject_unknown(j, {"scenario", "algorithm", "td3", "ao", "iwf", "sweep", "seeds", "evaluation", "output_dir",
                       "workers", "paper_scale"},
                   "config");

    if (j.contains("scenario")) {
        const json& s = j.at("scenario");
        reject_unknown(s, {"carrier_frequency_ghz", "num_layers", "atoms_per_layer", "num_users", "bs_height_m",
                           "user_spacing_m", "sim_thickness_wavelengths", "atom_pitch_wavelengths",
                           "antenna_spacing_wavelengths", "bs_to_sim_gap_m", "transmit_power_dbm", "noise_power_dbm",
                           "path_loss_ref_db", "path_loss_ref_distance_m", "path_loss_exponent", "correlation_floor"},
                       "scenario");
        auto& sc = c.scenario;
        read(s, "carrier_frequency_ghz", sc.carrier_frequency_ghz, "scenario");
        read(s, "num_layers", sc.num_layers, "scenario");
        read(s, "atoms_per_layer", sc.atoms_per_layer, "scenario");
        read(s, "num_users", sc.num_users, "scenario");
        read(s, "bs_height_m", sc.bs_height_m, "scenario");
        read(s, "user_spacing_m", sc.user_spacing_m, "scenario");
        read(s, "sim_thickness_wavelengths", sc.sim_thickness_wavelengths, "scenario");
        read(s, "atom_pitch_wavelengths", sc.atom_pitch_wavelengths, "scenario");
        read(s, "antenna_spacing_wavelengths", sc.antenna_spacing_wavelengths, "scenario");
        if (s.contains("bs_to_sim_gap_m") && !s.at("bs_to_sim_gap_m").is_null()) {
            double gap = 0.0;
            read(s, "bs_to_sim_gap_m", gap, "scenario");
            sc.bs_to_sim_gap_m = gap;
        }
        read(s, "transmit_power_dbm", sc.transmit_power_dbm, "scenario");
        read(s, "noise_power_dbm", sc.noise_power_dbm, "scenario");
        read(s, "path_loss_ref_db", sc.path_loss_ref_db, "scenario");
        read(s, "path_loss_ref_distance_m", sc.path_loss_ref_distance_m, "scenario");
        read(s, "path_loss_exponent", sc.path_loss_exponent, "scenario");
        read(s, "correlation_floor", sc.correlation_floor, "scenario");
    }

    if (j.contains("algorithm")) {
        std::string name;
        read(j, "algorithm", name, "config");
        c.algorithm = algorithm_from_string(name);
    }

    if (j.contains("paper_scale")) {
        read(j, "paper_scale", c.paper_scale, "config");
        if (c.paper_scale) c.apply_paper_scale();
    }

    if (j.contains("td3")) {
        const json& t = j.at("td3");
        reject_unknown(t, {"discount", "buffer_size", "batch_size", "exploration_noise", "smoothing_noise",
                           "smoothing_clip", "policy_delay", "episodes", "steps_per_episode", "actor_learning_rate",
                           "critic_learning_rate", "actor_soft_update", "critic_soft_update", "twin_critics",
                           "warmup_steps", "hidden_layers", "channel_mode", "normalize_reward"},
                       "td3");
        auto& td = c.td3;
        read(t, "discount", td.discount, "td3");
        read(t, "buffer_size", td.buffer_capacity, "td3");
        read(t, "batch_size", td.batch_size, "td3");
        read(t, "exploration_noise", td.exploration_noise, "td3");
        read(t, "smoothing_noise", td.smoothing_noise, "td3");
        read(t, "smoothing_clip", td.smoothing_clip, "td3");
        read(t, "policy_delay", td.policy_delay, "td3");
        read(t, "episodes", td.episodes, "td3");
        read(t, "steps_per_episode", td.steps_per_episode, "td3");
        read(t, "actor_learning_rate", td.actor_lr, "td3");
        read(t, "critic_learning_rate", td.critic_lr, "td3");
        read(t, "actor_soft_update", td.actor_tau, "td3");
        read(t, "critic_soft_update", td.critic_tau, "td3");
        read(t, "twin_critics", td.twin_critics, "td3");
        read(t, "warmup_steps", td.warmup_steps, "td3");
        read(t, "hidden_layers", td.hidden, "td3");
        read(t, "normalize_reward", td.normalize_reward, "td3");
        if (t.contains("channel_mode")) {
            std::string mode;
            read(t, "channel_mode", mode, "td3");
            td.channel_mode = channel_mode_from(mode);
        }
    }

    if (j.contains("ao")) {
        const json& a = j.at("ao");
        reject_unknown(a, {"step_size_rad", "max_outer_iterations", "max_inner_steps", "tolerance", "min_step_rad"},
                       "ao");
        read(a, "step_size_rad", c.ao.step_size, "ao");
        read(a, "max_outer_iterations", c.ao.max_outer, "ao");
        read(a, "max_inner_steps", c.ao.max_inner, "ao");
        read(a, "tolerance", c.ao.tolerance, "ao");
        read(a, "min_step_rad", c.ao.min_step, "ao");
    }

    if (j.contains("iwf")) {
        const json& w = j.at("iwf");
        reject_unknown(w, {"tolerance", "max_iterations"}, "iwf");
        read(w, "tolerance", c.iwf.tolerance, "iwf");
        read(w, "max_iterations", c.iwf.max_iterations, "iwf");
    }

    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        reject_unknown(s, {"values", "algorithms"}, "sweep");
        read(s, "values", c.sweep.values, "sweep");
        std::vector<std::string> names;
        read(s, "algorithms", names, "sweep");
        for (const auto& n : names) c.sweep.algorithms.push_back(algorithm_from_string(n));
    }

    read(j, "seeds", c.seeds, "config");
    if (j.contains("evaluation")) {
        const json& e = j.at("evaluation");
        reject_unknown(e, {"channels", "steps"}, "evaluation");
        read(e, "channels", c.eval_channels, "evaluation");
        read(e, "steps", c.eval_steps, "evaluation");
    }
    read(j, "output_dir", c.output_dir, "config");
    read(j, "workers", c.workers, "config");
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path.string());
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("config: " + path.string() + ": " + e.what());
    }
    ExperimentConfig c = config_from_json(j);
    c.validate();
    return c;
}

}  // namespace simopt
