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

#include <vector>

#include "simopt/common.hpp"
#include "simopt/geometry.hpp"
#include "simopt/rng.hpp"

namespace simopt {

/// L x M phase angles, every entry normalised into [0, 2*pi).
class PhaseConfig
{
  public:
    PhaseConfig() = default;
    PhaseConfig(int layers, int atoms);  // all zero
    explicit PhaseConfig(MatrixXd theta);

    static PhaseConfig random(int layers, int atoms, Rng& rng);

    int layers() const { return static_cast<int>(theta_.rows()); }
    int atoms() const { return static_cast<int>(theta_.cols()); }
    const MatrixXd& theta() const { return theta_; }
    double operator()(int layer, int atom) const { return theta_(layer, atom); }
    void set(int layer, int atom, double value) { theta_(layer, atom) = wrap_phase(value); }

    /// exp(j * theta) for one layer (0-based).
    VectorXcd unit_response(int layer) const;

  private:
    MatrixXd theta_;
};

/// Immutable diffraction couplings of one SIM geometry.
struct PropagationSet
{
    std::vector<MatrixXcd> interlayer;  // W^2 .. W^L, each M x M
    MatrixXcd feed;                     // M x S, column s = w_s^1

    int atoms() const { return static_cast<int>(feed.rows()); }
    int layers() const { return static_cast<int>(interlayer.size()) + 1; }
};

/// Rayleigh-Sommerfeld coupling between two elements separated by d meters:
/// (dx dy zs / d) (1 / (2 pi d) - j / lambda) exp(j 2 pi d / lambda).
cd propagation_coefficient(const SimGeometry& geom, double distance);

PropagationSet build_propagation(const SimGeometry& geom);

enum class ProductOrder { RightToLeft, LeftToRight };

/// G = Phi^L W^L ... Phi^2 W^2 Phi^1. Right-to-left (signal flow) is the
/// canonical order; left-to-right exists for cross-checks.
MatrixXcd beamforming_matrix(const PhaseConfig& phases, const PropagationSet& prop,
                             ProductOrder order = ProductOrder::RightToLeft);

/// G * feed without forming G; columns are G w_s^1.
MatrixXcd propagate_feed(const PhaseConfig& phases, const PropagationSet& prop);

}  // namespace simopt
