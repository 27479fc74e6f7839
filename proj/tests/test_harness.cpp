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

#include <fstream>
#include <sstream>

#include "simopt/harness.hpp"

using namespace simopt;
namespace fs = std::filesystem;

namespace {

ExperimentConfig tiny(Algorithm algo)
{
    ExperimentConfig c;
    c.algorithm = algo;
    c.scenario.num_layers = 2;
    c.scenario.atoms_per_layer = 4;
    c.scenario.num_users = 2;
    c.td3.episodes = 2;
    c.td3.steps_per_episode = 30;
    c.td3.batch_size = 8;
    c.td3.warmup_steps = 16;
    c.td3.hidden = {16, 12};
    c.td3.buffer_capacity = 1000;
    c.ao.max_outer = 5;
    c.ao.max_inner = 5;
    c.seeds = {1, 2};
    c.eval_channels = 3;
    c.eval_steps = 2;
    return c;
}

fs::path scratch(const std::string& name)
{
    fs::path p = fs::temp_directory_path() / ("simopt_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

nlohmann::json without_wall_time(nlohmann::json j)
{
    j.erase("wall_seconds");
    return j;
}

}  // namespace

TEST_CASE("config round trip and defaults")
{
    ExperimentConfig c = tiny(Algorithm::Ao);
    c.scenario.bs_to_sim_gap_m = 0.02;
    c.sweep.values = {1, 3};
    c.sweep.algorithms = {Algorithm::Ao, Algorithm::IwfRandom};
    const nlohmann::json j = to_json(c);
    CHECK(to_json(config_from_json(j)) == j);

    const ExperimentConfig d = config_from_json(nlohmann::json::object());
    CHECK(d.scenario.carrier_frequency_ghz == 28.0);
    CHECK(d.scenario.transmit_power_dbm == 10.0);
    CHECK(d.scenario.noise_power_dbm == -104.0);
    CHECK(d.td3.episodes == 30);
    CHECK(d.td3.steps_per_episode == 500);
    CHECK(d.td3.actor_lr == 3e-4);
    CHECK(d.td3.actor_tau == 0.005);
    CHECK(d.seeds.size() == 5);

    ExperimentConfig p = config_from_json({{"paper_scale", true}});
    CHECK(p.td3.episodes == 100);
    CHECK(p.td3.steps_per_episode == 6000);

    const auto env = d.scenario.environment();
    CHECK(env.power_budget == doctest::Approx(0.01).epsilon(1e-14));
    CHECK(env.path_loss.ref_gain == doctest::Approx(1e-3).epsilon(1e-14));
}

TEST_CASE("config rejection")
{
    CHECK_THROWS_AS(config_from_json({{"bogus", 1}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json({{"scenario", {{"transmit_power_w", 1.0}}}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json({{"algorithm", "ppo"}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json({{"scenario", {{"num_layers", "two"}}}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json({{"seeds", {1, 1}}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json({{"seeds", nlohmann::json::array()}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json({{"scenario", {{"num_layers", 0}}}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json({{"td3", {{"policy_delay", 0}}}}), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json({{"td3", {{"channel_mode", "per-step"}}}}), std::invalid_argument);

    ExperimentConfig c = tiny(Algorithm::Td3);
    c.scenario.atoms_per_layer = 5;  // not a perfect square
    CHECK_THROWS_AS(run_single(c, 1), std::invalid_argument);

    const fs::path bad = scratch("bad.json");
    std::ofstream(bad) << "{ not json";
    CHECK_THROWS(load_config(bad));
    fs::remove(bad);
    CHECK_THROWS(load_config(scratch("missing.json")));
}

TEST_CASE("single user single element closed form")
{
    ExperimentConfig c = tiny(Algorithm::IwfRandom);
    c.scenario.num_layers = 2;
    c.scenario.atoms_per_layer = 1;
    c.scenario.num_users = 1;
    c.eval_channels = 5;
    // Shorter links so the rate is well away from zero.
    c.scenario.bs_height_m = 1.0;
    c.scenario.user_spacing_m = 1.0;
    const RunRecord rec = run_single(c, 4);

    SimEnvironment env(c.scenario.geometry(), c.scenario.environment());
    const auto channels = evaluation_channels(env, 4, 5);
    const cd w = beamforming_matrix(PhaseConfig(2, 1), env.propagation())(0, 0) * env.propagation().feed(0, 0);
    double expected = 0.0;
    for (const auto& ch : channels)
        expected += std::log2(1.0 + std::norm(ch.h[0](0)) * std::norm(w) * env.power_budget() / env.noise_power());
    expected /= 5.0;
    CHECK(rec.final_rate == doctest::Approx(expected).epsilon(1e-12));
    CHECK(rec.final_rate > 0.0);
}

TEST_CASE("runs are deterministic for every algorithm")
{
    for (Algorithm a : {Algorithm::Td3, Algorithm::Ddpg, Algorithm::Ao, Algorithm::IwfRandom}) {
        CAPTURE(to_string(a));
        const RunRecord r1 = run_single(tiny(a), 11);
        const RunRecord r2 = run_single(tiny(a), 11);
        CHECK(trace_csv(r1) == trace_csv(r2));
        CHECK(without_wall_time(run_metadata(r1)) == without_wall_time(run_metadata(r2)));
        CHECK_FALSE(r1.trace.empty());
        CHECK(r1.eval_rates.size() == 3);
        for (double r : r1.eval_rates) CHECK(r > 0.0);
    }
    const RunRecord td3 = run_single(tiny(Algorithm::Td3), 11);
    CHECK(td3.trace.size() == 60);
    CHECK(td3.episode_means.size() == 2);
}

TEST_CASE("all algorithms see the same evaluation channels")
{
    ExperimentConfig c = tiny(Algorithm::Td3);
    SimEnvironment env(c.scenario.geometry(), c.scenario.environment());
    const auto a = evaluation_channels(env, 3, 4);
    const auto b = evaluation_channels(env, 3, 4);
    for (int i = 0; i < 4; ++i) CHECK(a[i].h[1] == b[i].h[1]);
    Rng train = make_substream(3, stream::kChannel);
    CHECK(env.draw_channel(train).h[0] != a[0].h[0]);
}

TEST_CASE("zero episodes evaluates the untrained policy")
{
    ExperimentConfig c = tiny(Algorithm::Td3);
    c.td3.episodes = 0;
    const RunRecord r = run_single(c, 2);
    CHECK(r.trace.empty());
    CHECK(trace_csv(r) == "episode,step,reward\n");
    CHECK(r.eval_rates.size() == 3);
    CHECK(r.critic_updates == 0);
}

TEST_CASE("trace csv schema")
{
    RunRecord r;
    r.trace = {{0, 0, 0.5}, {0, 1, 1.0 / 3.0}};
    const auto ls = lines(trace_csv(r));
    REQUIRE(ls.size() == 3);
    CHECK(ls[0] == "episode,step,reward");
    CHECK(ls[1] == "0,0,0.5");
    CHECK(std::stod(ls[2].substr(4)) == 1.0 / 3.0);
}

TEST_CASE("sweeps write fresh directories with fixed schemas")
{
    ExperimentConfig c = tiny(Algorithm::Ao);
    c.output_dir = scratch("sweeps").string();
    c.sweep.values = {1, 4};
    c.seeds = {1, 2};

    const SweepResult a = sweep_atoms(c);
    const SweepResult b = sweep_atoms(c);
    CHECK(a.directory != b.directory);
    CHECK(fs::exists(a.directory / "meta.json"));
    const auto rows = lines(slurp(a.directory / "summary.csv"));
    REQUIRE(rows.size() == 1 + 2 * 2 * 2);  // values x {ao, iwf-random} x seeds
    CHECK(rows[0] == "sweep_value,algo,seed,final_rate,wall_s");
    CHECK(rows[1].rfind("1,ao,1,", 0) == 0);
    CHECK(fs::exists(a.directory / "atoms-4_iwf-random_seed2" / "trace.csv"));
    CHECK(lines(slurp(a.directory / "atoms-1_ao_seed1" / "trace.csv"))[0] == "episode,step,reward");
    const auto meta = nlohmann::json::parse(slurp(a.directory / "atoms-1_ao_seed1" / "meta.json"));
    CHECK(meta.at("config").at("scenario").at("atoms_per_layer") == 1);

    // Single atom: phases are irrelevant, so AO and the random baseline agree.
    for (const auto& s : a.summary)
        if (s.sweep_value == 1 && s.algo == "ao") {
            for (const auto& t : a.summary)
                if (t.sweep_value == 1 && t.algo == "iwf-random")
                    CHECK(std::abs(s.mean - t.mean) <= 1e-9 * std::max(1.0, t.mean));
        }
    CHECK(a.summary.size() == 4);
    fs::remove_all(c.output_dir);
}

TEST_CASE("sweeps over layers and users")
{
    ExperimentConfig c = tiny(Algorithm::IwfRandom);
    c.sweep.values = {1, 2};
    c.seeds = {5};
    const SweepResult layers = sweep_layers(c, false);
    CHECK(layers.directory.empty());
    CHECK(layers.rows.size() == 2);
    CHECK(layers.records[1].config.at("scenario").at("num_layers") == 2);
    const SweepResult users = sweep_users(c, false);
    REQUIRE(users.rows.size() == 2);
    CHECK(users.records[0].config.at("scenario").at("num_users") == 1);
    for (const auto& r : users.rows) CHECK(r.final_rate > 0.0);
}

TEST_CASE("parallel sweeps match serial ones")
{
    ExperimentConfig c = tiny(Algorithm::Ao);
    c.sweep.values = {1, 4};
    const SweepResult serial = sweep_atoms(c, false);
    c.workers = 3;
    const SweepResult parallel = sweep_atoms(c, false);
    REQUIRE(serial.rows.size() == parallel.rows.size());
    for (std::size_t i = 0; i < serial.rows.size(); ++i) {
        CHECK(serial.rows[i].final_rate == parallel.rows[i].final_rate);
        CHECK(trace_csv(serial.records[i]) == trace_csv(parallel.records[i]));
    }
}

TEST_CASE("delay ablation")
{
    ExperimentConfig c = tiny(Algorithm::Td3);
    c.seeds = {3};
    const SweepResult r = ablate_delay(c, false);
    REQUIRE(r.rows.size() == 4);
    for (std::size_t i = 0; i < 3; ++i) {
        const int delay = r.rows[i].sweep_value;
        CHECK(r.records[i].actor_updates == r.records[i].critic_updates / delay);
        CHECK(r.records[i].critic_updates > 0);
    }
    CHECK(r.rows[3].algo == "ddpg");
    CHECK(r.records[3].actor_updates == r.records[3].critic_updates);
    CHECK(trace_csv(r.records[0]) != trace_csv(r.records[1]));
    CHECK(trace_csv(r.records[1]) != trace_csv(r.records[2]));
}

TEST_CASE("summary statistics")
{
    std::vector<SweepRow> rows{{1, "ao", 1, 1.0, 0}, {1, "ao", 2, 3.0, 0}, {1, "ao", 3, 8.0, 0}, {2, "ao", 1, 2.0, 0}};
    const auto s = summarize(rows);
    REQUIRE(s.size() == 2);
    CHECK(s[0].mean == 4.0);
    CHECK(s[0].median == 3.0);
    CHECK(s[0].stddev == doctest::Approx(std::sqrt(13.0)));
    CHECK(s[1].runs == 1);
    CHECK(s[1].stddev == 0.0);
}
