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

#include "simopt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace simopt {

namespace {

constexpr std::string_view kEvaluationPhase = "evaluation-phase";

std::string fmt_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double mean_of(const std::vector<double>& v)
{
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

}  // namespace

std::vector<ChannelRealization> evaluation_channels(const SimEnvironment& env, std::uint64_t seed, int count)
{
    Rng rng = make_substream(seed, stream::kEvaluation);
    std::vector<ChannelRealization> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) {
        out.push_back(env.draw_channel(rng));
        out.back().seed = seed;
    }
    return out;
}

RunRecord run_single(const ExperimentConfig& config, std::uint64_t seed)
{
    config.validate();
    const auto started = std::chrono::steady_clock::now();

    SimEnvironment env(config.scenario.geometry(), config.scenario.environment());
    const auto channels = evaluation_channels(env, seed, config.eval_channels);
    Rng eval_phase = make_substream(seed, kEvaluationPhase);

    RunRecord rec;
    switch (config.algorithm) {
    case Algorithm::Td3:
    case Algorithm::Ddpg: {
        TrainOutcome out = config.algorithm == Algorithm::Td3 ? td3_train(env, config.td3, seed)
                                                              : ddpg_train(env, config.td3, seed);
        rec = std::move(out.record);
        rec.eval_rates = evaluate_policy(out.agent, env, channels, config.eval_steps, eval_phase);
        break;
    }
    case Algorithm::Ao:
    case Algorithm::IwfRandom: {
        rec.algorithm = to_string(config.algorithm);
        for (std::size_t i = 0; i < channels.size(); ++i) {
            const ProblemInstance problem{&env.propagation(), &channels[i], env.noise_power(), env.power_budget()};
            BaselineResult res = config.algorithm == Algorithm::Ao
                                     ? ao_optimize(problem, config.ao, eval_phase)
                                     : random_phase_iwf(problem, eval_phase, config.iwf.tolerance,
                                                        config.iwf.max_iterations);
            for (std::size_t t = 0; t < res.trace.size(); ++t)
                rec.trace.push_back({static_cast<int>(i), static_cast<int>(t), res.trace[t]});
            rec.eval_rates.push_back(res.sum_rate);
            rec.converged = rec.converged && res.converged;
        }
        if (!rec.converged) rec.flags.push_back("not-converged");
        break;
    }
    }

    rec.seed = seed;
    rec.config = to_json(config);
    rec.final_rate = mean_of(rec.eval_rates);
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return rec;
}

std::string trace_csv(const RunRecord& record)
{
    std::string out = "episode,step,reward\n";
    out.reserve(out.size() + record.trace.size() * 32);
    for (const auto& row : record.trace) {
        out += std::to_string(row.episode);
        out += ',';
        out += std::to_string(row.step);
        out += ',';
        out += fmt_double(row.reward);
        out += '\n';
    }
    return out;
}

nlohmann::json run_metadata(const RunRecord& r)
{
    return {
        {"algorithm", r.algorithm},
        {"seed", r.seed},
        {"config", r.config},
        {"final_rate", r.final_rate},
        {"eval_rates", r.eval_rates},
        {"episode_means", r.episode_means},
        {"critic_updates", r.critic_updates},
        {"actor_updates", r.actor_updates},
        {"reward_scale", r.reward_scale},
        {"converged", r.converged},
        {"flags", r.flags},
        {"wall_seconds", r.wall_seconds},
    };
}

void write_run(const RunRecord& record, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    write_text(dir / "trace.csv", trace_csv(record));
    write_text(dir / "meta.json", run_metadata(record).dump(2) + "\n");
}

std::filesystem::path make_run_directory(const std::filesystem::path& base)
{
    const std::time_t now = std::time(nullptr);
    std::tm utc{};
    gmtime_r(&now, &utc);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%SZ", &utc);
    std::filesystem::create_directories(base);
    for (int n = 0;; ++n) {
        std::filesystem::path dir = base / (n == 0 ? std::string(stamp) : std::string(stamp) + "-" + std::to_string(n));
        if (std::filesystem::create_directory(dir)) return dir;
    }
}

std::string to_string(SweepAxis axis)
{
    switch (axis) {
    case SweepAxis::Layers: return "layers";
    case SweepAxis::Atoms: return "atoms";
    case SweepAxis::Users: return "users";
    case SweepAxis::Delay: return "delay";
    }
    return "unknown";
}

std::vector<int> default_sweep_values(SweepAxis axis)
{
    switch (axis) {
    case SweepAxis::Layers: return {1, 2, 3, 4, 5};
    case SweepAxis::Atoms: return {1, 4, 9, 16};
    case SweepAxis::Users: return {1, 2, 3, 4};
    case SweepAxis::Delay: return {1, 2, 4};
    }
    return {};
}

namespace {

struct Job
{
    int value = 0;
    Algorithm algorithm = Algorithm::Td3;
    std::uint64_t seed = 0;
    ExperimentConfig config;
    std::string name;
};

std::vector<Job> plan_jobs(const ExperimentConfig& base, SweepAxis axis)
{
    std::vector<int> values = base.sweep.values.empty() ? default_sweep_values(axis) : base.sweep.values;
    std::vector<Algorithm> algos = base.sweep.algorithms;
    if (axis == SweepAxis::Delay) {
        algos = {Algorithm::Td3};
    } else if (algos.empty()) {
        algos = {base.algorithm};
        if (base.algorithm != Algorithm::IwfRandom) algos.push_back(Algorithm::IwfRandom);
    }

    std::vector<Job> jobs;
    for (int v : values)
        for (Algorithm a : algos)
            for (std::uint64_t seed : base.seeds) {
                Job job{v, a, seed, base, {}};
                job.config.algorithm = a;
                switch (axis) {
                case SweepAxis::Layers: job.config.scenario.num_layers = v; break;
                case SweepAxis::Atoms: job.config.scenario.atoms_per_layer = v; break;
                case SweepAxis::Users: job.config.scenario.num_users = v; break;
                case SweepAxis::Delay: job.config.td3.policy_delay = v; break;
                }
                job.name = to_string(axis) + "-" + std::to_string(v) + "_" + to_string(a) + "_seed" +
                           std::to_string(seed);
                jobs.push_back(std::move(job));
            }
    if (axis == SweepAxis::Delay) {
        // DDPG reference: undelayed single critic, recorded at sweep value 1.
        for (std::uint64_t seed : base.seeds) {
            Job job{1, Algorithm::Ddpg, seed, base, {}};
            job.config.algorithm = Algorithm::Ddpg;
            job.name = "delay-ddpg_seed" + std::to_string(seed);
            jobs.push_back(std::move(job));
        }
    }
    for (const Job& job : jobs) job.config.validate();
    return jobs;
}

}  // namespace

SweepResult run_sweep(const ExperimentConfig& config, SweepAxis axis, bool write_outputs)
{
    config.validate();
    std::vector<Job> jobs = plan_jobs(config, axis);

    SweepResult result;
    if (write_outputs) {
        result.directory = make_run_directory(config.output_dir);
        nlohmann::json meta = to_json(config);
        meta["sweep_axis"] = to_string(axis);
        nlohmann::json names = nlohmann::json::array();
        for (const Job& j : jobs) names.push_back(j.name);
        meta["jobs"] = names;
        write_text(result.directory / "meta.json", meta.dump(2) + "\n");
    }

    result.records.resize(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            try {
                RunRecord rec = run_single(jobs[i].config, jobs[i].seed);
                if (write_outputs) write_run(rec, result.directory / jobs[i].name);
                result.records[i] = std::move(rec);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
            }
        }
    };
    const std::size_t threads = std::min<std::size_t>(std::max(config.workers, 1), jobs.size());
    std::vector<std::thread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);

    for (std::size_t i = 0; i < jobs.size(); ++i)
        result.rows.push_back({jobs[i].value, to_string(jobs[i].algorithm), jobs[i].seed, result.records[i].final_rate,
                               result.records[i].wall_seconds});
    result.summary = summarize(result.rows);
    if (write_outputs) write_text(result.directory / "summary.csv", summary_csv(result.rows));
    return result;
}

SweepResult sweep_layers(const ExperimentConfig& config, bool write_outputs)
{
    return run_sweep(config, SweepAxis::Layers, write_outputs);
}

SweepResult sweep_atoms(const ExperimentConfig& config, bool write_outputs)
{
    return run_sweep(config, SweepAxis::Atoms, write_outputs);
}

SweepResult sweep_users(const ExperimentConfig& config, bool write_outputs)
{
    return run_sweep(config, SweepAxis::Users, write_outputs);
}

SweepResult ablate_delay(const ExperimentConfig& config, bool write_outputs)
{
    return run_sweep(config, SweepAxis::Delay, write_outputs);
}

std::string summary_csv(const std::vector<SweepRow>& rows)
{
    std::string out = "sweep_value,algo,seed,final_rate,wall_s\n";
    for (const auto& r : rows)
        out += std::to_string(r.sweep_value) + "," + r.algo + "," + std::to_string(r.seed) + "," +
               fmt_double(r.final_rate) + "," + fmt_double(r.wall_s) + "\n";
    return out;
}

std::vector<SweepSummary> summarize(const std::vector<SweepRow>& rows)
{
    // Keyed by first appearance so the table follows job order.
    std::vector<std::pair<int, std::string>> order;
    std::map<std::pair<int, std::string>, std::vector<double>> groups;
    for (const auto& r : rows) {
        auto key = std::make_pair(r.sweep_value, r.algo);
        if (!groups.count(key)) order.push_back(key);
        groups[key].push_back(r.final_rate);
    }
    std::vector<SweepSummary> out;
    for (const auto& key : order) {
        std::vector<double> v = groups[key];
        SweepSummary s;
        s.sweep_value = key.first;
        s.algo = key.second;
        s.runs = static_cast<int>(v.size());
        s.mean = mean_of(v);
        double var = 0.0;
        for (double x : v) var += (x - s.mean) * (x - s.mean);
        s.stddev = v.size() > 1 ? std::sqrt(var / static_cast<double>(v.size() - 1)) : 0.0;
        std::sort(v.begin(), v.end());
        const std::size_t n = v.size();
        s.median = n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
        out.push_back(s);
    }
    return out;
}

}  // namespace simopt
