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

#include "simopt/physics.hpp"

#include <stdexcept>

namespace simopt {

PhaseConfig::PhaseConfig(int layers, int atoms) : theta_(MatrixXd::Zero(layers, atoms))
{
    if (layers < 1 || atoms < 1) throw std::invalid_argument("PhaseConfig: empty dimensions");
}

PhaseConfig::PhaseConfig(MatrixXd theta) : theta_(std::move(theta))
{
    if (theta_.rows() < 1 || theta_.cols() < 1) throw std::invalid_argument("PhaseConfig: empty dimensions");
    for (Eigen::Index i = 0; i < theta_.size(); ++i) {
        if (!std::isfinite(theta_.data()[i])) throw std::invalid_argument("PhaseConfig: non-finite angle");
        theta_.data()[i] = wrap_phase(theta_.data()[i]);
    }
}

PhaseConfig PhaseConfig::random(int layers, int atoms, Rng& rng)
{
    std::uniform_real_distribution<double> u(0.0, kTwoPi);
    MatrixXd t(layers, atoms);
    for (int l = 0; l < layers; ++l)
        for (int m = 0; m < atoms; ++m) t(l, m) = u(rng);
    return PhaseConfig(std::move(t));
}

VectorXcd PhaseConfig::unit_response(int layer) const
{
    VectorXcd v(atoms());
    for (int m = 0; m < atoms(); ++m) v(m) = std::polar(1.0, theta_(layer, m));
    return v;
}

cd propagation_coefficient(const SimGeometry& geom, double d)
{
    if (!(d > 0.0)) throw std::invalid_argument("propagation_coefficient: distance must be positive");
    const double lambda = geom.wavelength();
    const double amp = geom.atom_pitch_x() * geom.atom_pitch_y() * geom.layer_spacing() / d;
    const cd radiating(1.0 / (kTwoPi * d), -1.0 / lambda);
    return amp * radiating * std::polar(1.0, kTwoPi * d / lambda);
}

PropagationSet build_propagation(const SimGeometry& geom)
{
    const int m_count = geom.atoms_per_layer();
    PropagationSet prop;

    const auto first = meta_atom_offsets(geom, 1);
    const auto antennas = antenna_offsets(geom);
    prop.feed.resize(m_count, geom.num_antennas());
    for (int s = 0; s < geom.num_antennas(); ++s)
        for (int m = 0; m < m_count; ++m)
            prop.feed(m, s) = propagation_coefficient(geom, (first[m] - antennas[s]).norm());

    auto prev = first;
    for (int l = 2; l <= geom.num_layers(); ++l) {
        auto cur = meta_atom_offsets(geom, l);
        MatrixXcd w(m_count, m_count);
        for (int m = 0; m < m_count; ++m)
            for (int mt = 0; mt < m_count; ++mt)
                w(m, mt) = propagation_coefficient(geom, (cur[m] - prev[mt]).norm());
        prop.interlayer.push_back(std::move(w));
        prev = std::move(cur);
    }
    return prop;
}

namespace {

void check_dims(const PhaseConfig& phases, const PropagationSet& prop)
{
    if (phases.layers() != prop.layers() || phases.atoms() != prop.atoms())
        throw std::invalid_argument("beamforming_matrix: phase configuration does not match propagation set");
}

}  // namespace

MatrixXcd beamforming_matrix(const PhaseConfig& phases, const PropagationSet& prop, ProductOrder order)
{
    check_dims(phases, prop);
    const int layers = phases.layers();
    if (order == ProductOrder::RightToLeft) {
        // Row scaling by Phi is applied as asDiagonal products.
        MatrixXcd g = phases.unit_response(0).asDiagonal();
        for (int l = 1; l < layers; ++l) {
            MatrixXcd next = prop.interlayer[l - 1] * g;
            g = phases.unit_response(l).asDiagonal() * next;
        }
        return g;
    }
    MatrixXcd g = phases.unit_response(layers - 1).asDiagonal();
    for (int l = layers - 1; l >= 1; --l) {
        MatrixXcd next = g * prop.interlayer[l - 1];
        g = next * phases.unit_response(l - 1).asDiagonal();
    }
    return g;
}

MatrixXcd propagate_feed(const PhaseConfig& phases, const PropagationSet& prop)
{
    check_dims(phases, prop);
    MatrixXcd x = phases.unit_response(0).asDiagonal() * prop.feed;
    for (int l = 1; l < phases.layers(); ++l) {
        MatrixXcd a = prop.interlayer[l - 1] * x;
        x = phases.unit_response(l).asDiagonal() * a;
    }
    return x;
}

}  // namespace simopt
