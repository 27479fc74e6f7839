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
#include <vector>

#include "simopt/common.hpp"
#include "simopt/geometry.hpp"
#include "simopt/rng.hpp"

namespace simopt {

/// Sinc spatial correlation across the last layer and a factor F with
/// F F^T = R after eigenvalue clipping.
struct CorrelationModel
{
    MatrixXd R;
    MatrixXd factor;
    double regularization_floor = 0.0;
    double min_eigenvalue = 0.0;  // most negative eigenvalue before clipping

    int atoms() const { return static_cast<int>(R.rows()); }
    /// min_eigenvalue > -1e-8 * M.
    bool well_conditioned() const { return min_eigenvalue > -1e-8 * atoms(); }
};

struct PathLossParams
{
    double ref_gain = 1e-3;      // beta_0, linear (-30 dB)
    double ref_distance = 1.0;   // d_0, meters
    double exponent = 2.0;       // alpha
};

struct ChannelRealization
{
    std::vector<VectorXcd> h;    // one length-M vector per user
    std::vector<double> beta;
    std::uint64_t seed = 0;

    int users() const { return static_cast<int>(h.size()); }
    int atoms() const { return h.empty() ? 0 : static_cast<int>(h.front().size()); }
};

/// sin(pi x) / (pi x), sinc(0) = 1.
double sinc(double x);

CorrelationModel spatial_correlation(const SimGeometry& geom, double regularization_floor = 0.0);

CorrelationModel correlation_from_matrix(MatrixXd R, double regularization_floor = 0.0);

/// beta_k = beta_0 * (d_k / d_0)^(-alpha), user is 1-based.
double path_loss(const SimGeometry& geom, int user, const PathLossParams& params = {});

std::vector<double> path_losses(const SimGeometry& geom, const PathLossParams& params = {});

/// h_k = sqrt(beta_k) F (g_re + j g_im) / sqrt(2), g standard normal.
ChannelRealization sample_channel(const CorrelationModel& model, const std::vector<double>& betas, Rng& rng);

/// Binary channel dump: little-endian header of four uint64 (M, K, count,
/// seed), then for each realization the K user vectors row-major as
/// interleaved (re, im) doubles.
void write_channel_dump(const std::filesystem::path& path, const std::vector<ChannelRealization>& channels,
                        std::uint64_t seed);

struct ChannelDump
{
    std::uint64_t seed = 0;
    std::vector<ChannelRealization> channels;
};

ChannelDump read_channel_dump(const std::filesystem::path& path);

}  // namespace simopt
