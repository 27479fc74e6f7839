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

#include "simopt/geometry.hpp"

#include <stdexcept>
#include <string>

namespace simopt {

namespace {

int exact_sqrt(int m)
{
    int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
    return (n * n == m) ? n : -1;
}

void require_positive(double v, const char* name)
{
    if (!(v > 0.0) || !std::isfinite(v))
        throw std::invalid_argument(std::string("SimGeometry: ") + name + " must be positive and finite");
}

}  // namespace

SimGeometry SimGeometry::create(const SceneParams& p)
{
    if (p.num_layers < 1) throw std::invalid_argument("SimGeometry: num_layers must be >= 1");
    if (p.atoms_per_layer < 1) throw std::invalid_argument("SimGeometry: atoms_per_layer must be >= 1");
    if (p.num_antennas < 1) throw std::invalid_argument("SimGeometry: num_antennas must be >= 1");
    if (p.num_users < 1) throw std::invalid_argument("SimGeometry: num_users must be >= 1");
    if (p.num_antennas != p.num_users)
        throw std::invalid_argument("SimGeometry: num_antennas must equal num_users");
    int n = exact_sqrt(p.atoms_per_layer);
    if (n < 1) throw std::invalid_argument("SimGeometry: atoms_per_layer must be a perfect square");

    require_positive(p.wavelength, "wavelength");

    SimGeometry g;
    g.num_layers_ = p.num_layers;
    g.atoms_per_layer_ = p.atoms_per_layer;
    g.grid_side_ = n;
    g.num_antennas_ = p.num_antennas;
    g.num_users_ = p.num_users;
    g.wavelength_ = p.wavelength;
    g.atom_pitch_x_ = p.atom_pitch_x > 0.0 ? p.atom_pitch_x : p.wavelength / 2.0;
    g.atom_pitch_y_ = p.atom_pitch_y > 0.0 ? p.atom_pitch_y : p.wavelength / 2.0;
    g.sim_thickness_ = p.sim_thickness > 0.0 ? p.sim_thickness : 5.0 * p.wavelength;
    g.layer_spacing_ = g.sim_thickness_ / p.num_layers;
    g.bs_height_ = p.bs_height;
    g.user_spacing_ = p.user_spacing;
    g.antenna_spacing_ = p.antenna_spacing.value_or(p.wavelength / 2.0);
    g.bs_to_sim_gap_ = p.bs_to_sim_gap.value_or(g.layer_spacing_);

    require_positive(g.atom_pitch_x_, "atom_pitch_x");
    require_positive(g.atom_pitch_y_, "atom_pitch_y");
    require_positive(g.sim_thickness_, "sim_thickness");
    require_positive(g.bs_height_, "bs_height");
    require_positive(g.user_spacing_, "user_spacing");
    require_positive(g.antenna_spacing_, "antenna_spacing");
    require_positive(g.bs_to_sim_gap_, "bs_to_sim_gap");
    return g;
}

double SimGeometry::layer_offset(int layer) const
{
    return bs_to_sim_gap_ + (layer - 1) * layer_spacing_;
}

std::vector<Vec3> meta_atom_positions(const SimGeometry& geom, int layer)
{
    auto pts = meta_atom_offsets(geom, layer);
    for (auto& p : pts) p.z() += geom.bs_height();
    return pts;
}

std::vector<Vec3> meta_atom_offsets(const SimGeometry& geom, int layer)
{
    if (layer < 1 || layer > geom.num_layers())
        throw std::invalid_argument("meta_atom_positions: layer out of range");
    const int n = geom.grid_side();
    const double centre = 0.5 * (n - 1);
    const double y = geom.layer_offset(layer);
    std::vector<Vec3> pts;
    pts.reserve(static_cast<std::size_t>(n) * n);
    for (int m = 0; m < n * n; ++m) {
        const int row = m / n;
        const int col = m % n;
        pts.emplace_back((col - centre) * geom.atom_pitch_x(), y, (row - centre) * geom.atom_pitch_y());
    }
    return pts;
}

std::vector<Vec3> antenna_positions(const SimGeometry& geom)
{
    auto pts = antenna_offsets(geom);
    for (auto& p : pts) p.z() += geom.bs_height();
    return pts;
}

std::vector<Vec3> antenna_offsets(const SimGeometry& geom)
{
    const int s = geom.num_antennas();
    const double centre = 0.5 * (s - 1);
    std::vector<Vec3> pts;
    pts.reserve(s);
    for (int i = 0; i < s; ++i)
        pts.emplace_back((i - centre) * geom.antenna_spacing(), 0.0, 0.0);
    return pts;
}

std::vector<Vec3> user_positions(const SimGeometry& geom)
{
    std::vector<Vec3> pts;
    pts.reserve(geom.num_users());
    for (int k = 1; k <= geom.num_users(); ++k)
        pts.emplace_back(0.0, k * geom.user_spacing(), 0.0);
    return pts;
}

double user_distance(const SimGeometry& geom, int user)
{
    if (user < 1 || user > geom.num_users())
        throw std::invalid_argument("user_distance: user out of range");
    const double y = user * geom.user_spacing();
    return std::hypot(geom.bs_height(), y);
}

}  // namespace simopt
