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

// Command-line front end: single runs, parameter sweeps and the delay ablation.

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>
#include <sstream>

#include "simopt/harness.hpp"

using namespace simopt;

namespace {

struct Options
{
    std::string config_path;
    std::uint64_t seed = 0;
    std::string seeds;
    std::string algo;
    std::string out;
    bool paper_scale = false;
    int episodes = -1;
    int steps = -1;
    int workers = 0;
};

void add_common(CLI::App* cmd, Options& o, bool single)
{
    cmd->add_option("--config", o.config_path, "Experiment config (JSON)")->check(CLI::ExistingFile);
    if (single)
        cmd->add_option("--seed", o.seed, "Master seed");
    else
        cmd->add_option("--seeds", o.seeds, "Comma-separated master seeds");
    cmd->add_option("--algo", o.algo, "td3 | ddpg | ao | iwf-random");
    cmd->add_option("--out", o.out, "Output base directory");
    cmd->add_flag("--paper-scale", o.paper_scale, "100 episodes x 6000 steps");
    cmd->add_option("--episodes", o.episodes, "Training episodes");
    cmd->add_option("--steps", o.steps, "Steps per episode");
    cmd->add_option("--workers", o.workers, "Concurrent sweep jobs");
}

ExperimentConfig resolve(const Options& o)
{
    ExperimentConfig cfg = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
    if (o.paper_scale) cfg.apply_paper_scale();
    if (o.episodes >= 0) cfg.td3.episodes = o.episodes;
    if (o.steps >= 0) cfg.td3.steps_per_episode = o.steps;
    if (!o.algo.empty()) {
        cfg.algorithm = algorithm_from_string(o.algo);
        if (!cfg.sweep.algorithms.empty()) cfg.sweep.algorithms = {cfg.algorithm};
    }
    if (!o.out.empty()) cfg.output_dir = o.out;
    if (o.workers > 0) cfg.workers = o.workers;
    if (!o.seeds.empty()) {
        cfg.seeds.clear();
        std::stringstream ss(o.seeds);
        for (std::string tok; std::getline(ss, tok, ',');) cfg.seeds.push_back(std::stoull(tok));
    }
    cfg.validate();
    return cfg;
}

void print_summary(const SweepResult& r, SweepAxis axis)
{
    std::cout << std::left << std::setw(8) << to_string(axis) << std::setw(12) << "algo" << std::setw(16) << "mean"
              << std::setw(16) << "std" << "runs\n";
    for (const auto& s : r.summary)
        std::cout << std::setw(8) << s.sweep_value << std::setw(12) << s.algo << std::setw(16) << s.mean
                  << std::setw(16) << s.stddev << s.runs << '\n';
    std::cout << "results: " << r.directory.string() << '\n';
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"SIM-assisted MU-MISO sum-rate optimisation"};
    app.require_subcommand(1);

    Options run_opts, layers_opts, atoms_opts, users_opts, delay_opts;
    auto* run = app.add_subcommand("run", "Run one algorithm for one seed");
    add_common(run, run_opts, true);
    auto* layers = app.add_subcommand("sweep-layers", "Sum rate versus number of SIM layers");
    add_common(layers, layers_opts, false);
    auto* atoms = app.add_subcommand("sweep-atoms", "Sum rate versus meta-atoms per layer");
    add_common(atoms, atoms_opts, false);
    auto* users = app.add_subcommand("sweep-users", "Sum rate versus number of users");
    add_common(users, users_opts, false);
    auto* delay = app.add_subcommand("ablate-delay", "TD3 convergence under policy delays 1, 2, 4 plus DDPG");
    add_common(delay, delay_opts, false);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            ExperimentConfig cfg = resolve(run_opts);
            RunRecord rec = run_single(cfg, run_opts.seed);
            const auto dir = make_run_directory(cfg.output_dir) / (to_string(cfg.algorithm) + "_seed" +
                                                                   std::to_string(run_opts.seed));
            write_run(rec, dir);
            std::cout << rec.algorithm << " seed " << rec.seed << ": final sum rate " << std::setprecision(10)
                      << rec.final_rate << " bits/s/Hz (" << rec.wall_seconds << " s)\n"
                      << "results: " << dir.string() << '\n';
        } else if (*layers) {
            print_summary(sweep_layers(resolve(layers_opts)), SweepAxis::Layers);
        } else if (*atoms) {
            print_summary(sweep_atoms(resolve(atoms_opts)), SweepAxis::Atoms);
        } else if (*users) {
            print_summary(sweep_users(resolve(users_opts)), SweepAxis::Users);
        } else if (*delay) {
            print_summary(ablate_delay(resolve(delay_opts)), SweepAxis::Delay);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
