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

#include <optional>
#include <vector>

#include "simopt/common.hpp"

namespace simopt {

/// Declarative description of the transmitter scene. Lengths in meters.
struct SceneParams
{
    int num_layers = 2;
    int atoms_per_layer = 9;
    int num_antennas = 4;
    int num_users = 4;
    double wavelength = kSpeedOfLight / 28e9;
    double atom_pitch_x = 0.0;           // 0 -> wavelength / 2
    double atom_pitch_y = 0.0;           // 0 -> wavelength / 2
    double sim_thickness = 0.0;          // 0 -> 5 * wavelength
    double bs_height = 10.0;
    double user_spacing = 10.0;
    std::optional<double> antenna_spacing;  // default wavelength / 2
    std::optional<double> bs_to_sim_gap;    // default layer spacing
};

/// Validated physical layout of BS antennas, SIM layers and users.
///
/// Frame: the antenna array lies along x at height bs_height; the SIM stack
/// axis points along +y (towards the users), each layer is an N x N grid in
/// the x-z plane centred on (0, y_l, bs_height). Users sit on the ground
/// (z = 0) along +y, user k at y = k * user_spacing.
class SimGeometry
{
  public:
    /// Throws std::invalid_argument if any invariant is violated.
    static SimGeometry create(const SceneParams& params);

    int num_layers() const { return num_layers_; }
    int atoms_per_layer() const { return atoms_per_layer_; }
    int grid_side() const { return grid_side_; }
    int num_antennas() const { return num_antennas_; }
    int num_users() const { return num_users_; }
    double wavelength() const { return wavelength_; }
    double atom_pitch_x() const { return atom_pitch_x_; }
    double atom_pitch_y() const { return atom_pitch_y_; }
    double sim_thickness() const { return sim_thickness_; }
    double layer_spacing() const { return layer_spacing_; }
    double bs_height() const { return bs_height_; }
    double user_spacing() const { return user_spacing_; }
    double antenna_spacing() const { return antenna_spacing_; }
    double bs_to_sim_gap() const { return bs_to_sim_gap_; }

    /// Axial (y) offset of layer l (1-based) from the antenna plane.
    double layer_offset(int layer) const;

  private:
    SimGeometry() = default;

    int num_layers_ = 0;
    int atoms_per_layer_ = 0;
    int grid_side_ = 0;
    int num_antennas_ = 0;
    int num_users_ = 0;
    double wavelength_ = 0.0;
    double atom_pitch_x_ = 0.0;
    double atom_pitch_y_ = 0.0;
    double sim_thickness_ = 0.0;
    double layer_spacing_ = 0.0;
    double bs_height_ = 0.0;
    double user_spacing_ = 0.0;
    double antenna_spacing_ = 0.0;
    double bs_to_sim_gap_ = 0.0;
};

/// Meta-atom m (0-based) maps to (row, col) = (m / N, m % N), row-major.
std::vector<Vec3> meta_atom_positions(const SimGeometry& geom, int layer);

std::vector<Vec3> antenna_positions(const SimGeometry& geom);

/// Same points relative to the BS reference point (0, 0, H_BS). Distances
/// inside the transmitter are computed from these to avoid cancellation
/// against the mast height.
std::vector<Vec3> meta_atom_offsets(const SimGeometry& geom, int layer);
std::vector<Vec3> antenna_offsets(const SimGeometry& geom);

std::vector<Vec3> user_positions(const SimGeometry& geom);

/// Distance from the BS reference point (0, 0, H_BS) to user k (1-based).
double user_distance(const SimGeometry& geom, int user);

}  // namespace simopt
