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

#include "simopt/channel.hpp"

#include <Eigen/Eigenvalues>
#include <array>
#include <fstream>
#include <stdexcept>

namespace simopt {

double sinc(double x)
{
    if (x == 0.0) return 1.0;
    const double px = kPi * x;
    return std::sin(px) / px;
}

CorrelationModel correlation_from_matrix(MatrixXd R, double floor)
{
    if (R.rows() != R.cols() || R.rows() == 0) throw std::invalid_argument("correlation: R must be square");
    if (floor < 0.0) throw std::invalid_argument("correlation: regularization floor must be nonnegative");
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(R);
    if (eig.info() != Eigen::Success) throw std::runtime_error("correlation: eigendecomposition failed");
    VectorXd lambda = eig.eigenvalues();
    CorrelationModel model;
    model.min_eigenvalue = lambda.minCoeff();
    for (Eigen::Index i = 0; i < lambda.size(); ++i) lambda(i) = std::sqrt(std::max(lambda(i), floor));
    model.factor = eig.eigenvectors() * lambda.asDiagonal();
    model.R = std::move(R);
    model.regularization_floor = floor;
    return model;
}

CorrelationModel spatial_correlation(const SimGeometry& geom, double floor)
{
    const auto atoms = meta_atom_offsets(geom, geom.num_layers());
    const int m_count = static_cast<int>(atoms.size());
    MatrixXd R(m_count, m_count);
    for (int a = 0; a < m_count; ++a) {
        R(a, a) = 1.0;
        for (int b = a + 1; b < m_count; ++b) {
            const double v = sinc(2.0 * (atoms[a] - atoms[b]).norm() / geom.wavelength());
            R(a, b) = v;
            R(b, a) = v;
        }
    }
    return correlation_from_matrix(std::move(R), floor);
}

double path_loss(const SimGeometry& geom, int user, const PathLossParams& params)
{
    return params.ref_gain * std::pow(user_distance(geom, user) / params.ref_distance, -params.exponent);
}

std::vector<double> path_losses(const SimGeometry& geom, const PathLossParams& params)
{
    std::vector<double> b;
    b.reserve(geom.num_users());
    for (int k = 1; k <= geom.num_users(); ++k) b.push_back(path_loss(geom, k, params));
    return b;
}

ChannelRealization sample_channel(const CorrelationModel& model, const std::vector<double>& betas, Rng& rng)
{
    const int m_count = model.atoms();
    std::normal_distribution<double> normal(0.0, 1.0);
    ChannelRealization ch;
    ch.beta = betas;
    ch.h.reserve(betas.size());
    for (double beta : betas) {
        if (beta < 0.0) throw std::invalid_argument("sample_channel: negative path-loss gain");
        VectorXcd g(m_count);
        for (int m = 0; m < m_count; ++m) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(m) = cd(re, im);
        }
        ch.h.push_back(std::sqrt(beta / 2.0) * (model.factor.cast<cd>() * g));
    }
    return ch;
}

namespace {

template <class T>
void put(std::ofstream& out, T v)
{
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& in)
{
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("channel dump: truncated file");
    return v;
}

}  // namespace

void write_channel_dump(const std::filesystem::path& path, const std::vector<ChannelRealization>& channels,
                        std::uint64_t seed)
{
    const std::uint64_t m = channels.empty() ? 0 : channels.front().atoms();
    const std::uint64_t k = channels.empty() ? 0 : channels.front().users();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("channel dump: cannot open " + path.string());
    put(out, m);
    put(out, k);
    put(out, static_cast<std::uint64_t>(channels.size()));
    put(out, seed);
    for (const auto& ch : channels) {
        if (static_cast<std::uint64_t>(ch.atoms()) != m || static_cast<std::uint64_t>(ch.users()) != k)
            throw std::invalid_argument("channel dump: inconsistent realization dimensions");
        for (const auto& h : ch.h)
            for (Eigen::Index i = 0; i < h.size(); ++i) {
                put(out, h(i).real());
                put(out, h(i).imag());
            }
    }
}

ChannelDump read_channel_dump(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("channel dump: cannot open " + path.string());
    const auto m = get<std::uint64_t>(in);
    const auto k = get<std::uint64_t>(in);
    const auto count = get<std::uint64_t>(in);
    ChannelDump dump;
    dump.seed = get<std::uint64_t>(in);
    dump.channels.resize(count);
    for (auto& ch : dump.channels) {
        ch.seed = dump.seed;
        ch.h.assign(k, VectorXcd(m));
        for (auto& h : ch.h)
            for (std::uint64_t i = 0; i < m; ++i) {
                const double re = get<double>(in);
                const double im = get<double>(in);
                h(static_cast<Eigen::Index>(i)) = cd(re, im);
            }
    }
    return dump;
}

}  // namespace simopt
