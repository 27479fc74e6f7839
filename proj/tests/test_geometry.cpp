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

#include <algorithm>

#include "simopt/geometry.hpp"
#include "test_helpers.hpp"

using namespace simopt;
using simopt::testing::small_scene;

TEST_CASE("construction rejects invalid scenes")
{
    auto p = small_scene(2, 4, 2);
    CHECK_NOTHROW(SimGeometry::create(p));

    auto bad = p;
    bad.atoms_per_layer = 5;
    CHECK_THROWS_AS(SimGeometry::create(bad), std::invalid_argument);

    bad = p;
    bad.num_antennas = 3;
    CHECK_THROWS_AS(SimGeometry::create(bad), std::invalid_argument);

    bad = p;
    bad.wavelength = 0.0;
    CHECK_THROWS_AS(SimGeometry::create(bad), std::invalid_argument);

    bad = p;
    bad.num_layers = 0;
    CHECK_THROWS_AS(SimGeometry::create(bad), std::invalid_argument);

    bad = p;
    bad.user_spacing = -1.0;
    CHECK_THROWS_AS(SimGeometry::create(bad), std::invalid_argument);
}

TEST_CASE("derived spacings and defaults")
{
    auto g = SimGeometry::create(small_scene(4, 9, 2));
    const double lambda = g.wavelength();
    CHECK(g.grid_side() == 3);
    CHECK(g.atom_pitch_x() == lambda / 2);
    CHECK(g.sim_thickness() == 5 * lambda);
    CHECK(g.layer_spacing() == g.sim_thickness() / 4);
    CHECK(g.antenna_spacing() == lambda / 2);
    CHECK(g.bs_to_sim_gap() == g.layer_spacing());
}

TEST_CASE("meta-atom grid")
{
    SUBCASE("single atom sits on the axis")
    {
        auto g = SimGeometry::create(small_scene(3, 1, 1));
        for (int l = 1; l <= 3; ++l) {
            auto pts = meta_atom_positions(g, l);
            REQUIRE(pts.size() == 1);
            CHECK(pts[0].x() == 0.0);
            CHECK(pts[0].z() == g.bs_height());
            CHECK(pts[0].y() == doctest::Approx(g.bs_to_sim_gap() + (l - 1) * g.layer_spacing()).epsilon(1e-15));
        }
    }
    SUBCASE("2x2 square of side lambda/2 centred on the axis")
    {
        auto g = SimGeometry::create(small_scene(2, 4, 2));
        auto pts = meta_atom_positions(g, 1);
        Vec3 centroid = Vec3::Zero();
        for (const auto& p : pts) centroid += p / 4.0;
        CHECK(std::abs(centroid.x()) < 1e-15);
        CHECK(std::abs(centroid.z() - g.bs_height()) < 1e-12);
        const double side = g.wavelength() / 2;
        CHECK((pts[0] - pts[1]).norm() == doctest::Approx(side).epsilon(1e-12));
        CHECK((pts[0] - pts[2]).norm() == doctest::Approx(side).epsilon(1e-12));
        CHECK((pts[0] - pts[3]).norm() == doctest::Approx(side * std::sqrt(2.0)).epsilon(1e-12));
        // row-major: atom 1 is (row 0, col 1), i.e. shifted in x only
        CHECK(pts[1].x() > pts[0].x());
        CHECK(pts[1].z() == pts[0].z());
    }
    SUBCASE("out-of-range layer")
    {
        auto g = SimGeometry::create(small_scene(2, 4, 2));
        CHECK_THROWS_AS(meta_atom_positions(g, 0), std::invalid_argument);
        CHECK_THROWS_AS(meta_atom_positions(g, 3), std::invalid_argument);
    }
}

TEST_CASE("layers share identical in-plane geometry and uniform axial gaps")
{
    auto g = SimGeometry::create(small_scene(5, 9, 3));
    auto pairwise = [](const std::vector<Vec3>& pts) {
        std::vector<double> d;
        for (std::size_t a = 0; a < pts.size(); ++a)
            for (std::size_t b = a + 1; b < pts.size(); ++b) d.push_back((pts[a] - pts[b]).norm());
        std::sort(d.begin(), d.end());
        return d;
    };
    CHECK(pairwise(meta_atom_positions(g, 1)) == pairwise(meta_atom_positions(g, 5)));
    for (int l = 2; l <= 5; ++l) {
        const double gap = meta_atom_positions(g, l)[0].y() - meta_atom_positions(g, l - 1)[0].y();
        CHECK(std::abs(gap - g.layer_spacing()) < 1e-12);
    }
    // pure function
    CHECK(meta_atom_positions(g, 3) == meta_atom_positions(g, 3));
}

TEST_CASE("no coincident points among coupled elements")
{
    auto g = SimGeometry::create(small_scene(3, 16, 4));
    const double floor = std::min({g.atom_pitch_x(), g.atom_pitch_y(), g.layer_spacing()});
    auto ant = antenna_positions(g);
    auto first = meta_atom_positions(g, 1);
    for (const auto& a : ant)
        for (const auto& m : first) CHECK((a - m).norm() >= floor - 1e-15);
    for (int l = 2; l <= 3; ++l) {
        auto prev = meta_atom_positions(g, l - 1);
        auto cur = meta_atom_positions(g, l);
        for (const auto& a : prev)
            for (const auto& b : cur) CHECK((a - b).norm() >= floor - 1e-15);
    }
}

TEST_CASE("antenna array")
{
    auto g1 = SimGeometry::create(small_scene(1, 1, 1));
    auto a1 = antenna_positions(g1);
    REQUIRE(a1.size() == 1);
    CHECK(a1[0] == Vec3(0.0, 0.0, g1.bs_height()));

    auto g2 = SimGeometry::create(small_scene(1, 1, 2));
    auto a2 = antenna_positions(g2);
    CHECK(a2[0].x() == doctest::Approx(-g2.wavelength() / 4));
    CHECK(a2[1].x() == doctest::Approx(g2.wavelength() / 4));

    auto g4 = SimGeometry::create(small_scene(1, 1, 4));
    double cx = 0.0;
    for (const auto& a : antenna_positions(g4)) {
        cx += a.x();
        CHECK(a.y() == 0.0);
        CHECK(a.z() == g4.bs_height());
    }
    CHECK(std::abs(cx) < 1e-15);
}

TEST_CASE("users along y at ground level")
{
    auto g1 = SimGeometry::create(small_scene(1, 1, 1));
    CHECK(user_positions(g1)[0] == Vec3(0.0, 10.0, 0.0));
    CHECK(user_distance(g1, 1) == doctest::Approx(14.142135623730951).epsilon(1e-15));

    auto g2 = SimGeometry::create(small_scene(1, 1, 2));
    auto u = user_positions(g2);
    CHECK(u[0].y() == 10.0);
    CHECK(u[1].y() == 20.0);

    auto g6 = SimGeometry::create(small_scene(1, 1, 6));
    for (int k = 2; k <= 6; ++k) CHECK(user_distance(g6, k) > user_distance(g6, k - 1));
    CHECK_THROWS_AS(user_distance(g6, 7), std::invalid_argument);
}
