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
#include <string>
#include <vector>

#include "simopt/config.hpp"
#include "simopt/record.hpp"

namespace simopt {

/// Held-out channels for one seed; identical for every algorithm.
std::vector<ChannelRealization> evaluation_channels(const SimEnvironment& env, std::uint64_t seed, int count);

/// Runs config.algorithm end to end for one seed. Pure compute; nothing is
/// written to disk. Throws std::invalid_argument before any compute if the
/// config is invalid.
RunRecord run_single(const ExperimentConfig& config, std::uint64_t seed);

/// trace.csv (episode,step,reward) for a record.
std::string trace_csv(const RunRecord& record);

/// meta.json for a record. Wall-clock time is the only nondeterministic field.
nlohmann::json run_metadata(const RunRecord& record);

/// Writes trace.csv and meta.json into dir (created if needed).
void write_run(const RunRecord& record, const std::filesystem::path& dir);

/// Fresh <base>/<UTC timestamp>[-n] directory; never reuses an existing one.
std::filesystem::path make_run_directory(const std::filesystem::path& base);

enum class SweepAxis { Layers, Atoms, Users, Delay };

std::string to_string(SweepAxis axis);

struct SweepRow
{
    int sweep_value = 0;
    std::string algo;
    std::uint64_t seed = 0;
    double final_rate = 0.0;
    double wall_s = 0.0;
};

struct SweepSummary
{
    int sweep_value = 0;
    std::string algo;
    double mean = 0.0;
    double stddev = 0.0;
    double median = 0.0;
    int runs = 0;
};

struct SweepResult
{
    std::filesystem::path directory;  // empty when nothing was written
    std::vector<SweepRow> rows;
    std::vector<RunRecord> records;   // same order as rows
    std::vector<SweepSummary> summary;
};

/// Default sweep values per axis when the config leaves them empty.
std::vector<int> default_sweep_values(SweepAxis axis);

/// Runs every (value, algorithm, seed) job. With write_outputs, results go to
/// a fresh timestamped directory under config.output_dir: one trace.csv and
/// meta.json per job, plus summary.csv and meta.json at the top.
SweepResult run_sweep(const ExperimentConfig& config, SweepAxis axis, bool write_outputs = true);

SweepResult sweep_layers(const ExperimentConfig& config, bool write_outputs = true);
SweepResult sweep_atoms(const ExperimentConfig& config, bool write_outputs = true);
SweepResult sweep_users(const ExperimentConfig& config, bool write_outputs = true);

/// TD3 at each policy delay (default {1, 2, 4}) plus one DDPG reference per seed.
SweepResult ablate_delay(const ExperimentConfig& config, bool write_outputs = true);

std::string summary_csv(const std::vector<SweepRow>& rows);

std::vector<SweepSummary> summarize(const std::vector<SweepRow>& rows);

}  // namespace simopt
