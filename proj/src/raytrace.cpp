// SPDX-License-Identifier: Apache-2.0
//
// vcpred - environment-aware vehicle-to-infrastructure channel prediction
// Copyright (C) 2026 vcpred contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "vcpred/scene.hpp"

namespace vcpred {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
// Obstruction penalty for the keep-alive path when every modelled
// mechanism is blocked; deep-shadow poses still produce a channel.
constexpr double kFallbackLossDb = 40.0;

Mpc make_path(double distance_m, double extra_loss_db, double aod_deg, double aoa_deg) {
    Mpc mpc;
    mpc.amplitude = kWavelengthM / (4.0 * std::numbers::pi * distance_m) *
                    std::pow(10.0, -extra_loss_db / 20.0);
    mpc.delay_ns = distance_m / kSpeedOfLightMps * 1e9;
    double phase = std::fmod(-kTwoPi * distance_m / kWavelengthM, kTwoPi);
    if (phase < 0.0) phase += kTwoPi;
    mpc.phase_rad = phase;
    mpc.aod_deg = aod_deg;
    mpc.aoa_deg = aoa_deg;
    return mpc;
}

struct Facade {
    int axis;        // 0: plane x = coord, 1: plane y = coord
    double coord;
    double outward;  // +1 or -1
    double span_lo;  // extent along the other axis
    double span_hi;
};

std::array<Facade, 4> facades_of(const Aabb& box) {
    return {{
        {0, box.lo.x(), -1.0, box.lo.y(), box.hi.y()},
        {0, box.hi.x(), +1.0, box.lo.y(), box.hi.y()},
        {1, box.lo.y(), -1.0, box.lo.x(), box.hi.x()},
        {1, box.hi.y(), +1.0, box.lo.x(), box.hi.x()},
    }};
}

}  // namespace

MpcSet trace_mpcs(const Scene& scene, const RxPose& pose, const SceneConfig& config) {
    const Eigen::Vector2d tx = scene.tx_xy;
    const Eigen::Vector2d rx = pose.position;
    const double h_tx = scene.tx_height_m;
    const double h_rx = pose.height_m;
    const double dh = h_tx - h_rx;
    std::vector<Mpc> paths;

    const auto direct_path = [&](double extra_loss_db) {
        const double d3 = std::hypot((rx - tx).norm(), dh);
        return make_path(d3, extra_loss_db, world_bearing_deg(tx, rx),
                         vehicle_frame_deg(world_bearing_deg(rx, tx), pose.heading_deg));
    };

    if (line_of_sight(scene, tx, rx)) paths.push_back(direct_path(0.0));

    for (std::size_t bi = 0; bi < scene.buildings.size(); ++bi) {
        const Building& b = scene.buildings[bi];
        for (const Facade& f : facades_of(b.footprint)) {
            // Specular bounce via the image method: mirror the transmitter
            // across the facade plane and intersect the straight image->rx
            // line with the facade segment.
            if (f.outward * (tx[f.axis] - f.coord) <= 1e-9) continue;
            if (f.outward * (rx[f.axis] - f.coord) <= 1e-9) continue;
            Eigen::Vector2d img = tx;
            img[f.axis] = 2.0 * f.coord - tx[f.axis];
            const double denom = rx[f.axis] - img[f.axis];
            const double t = (f.coord - img[f.axis]) / denom;
            if (t <= 1e-12 || t >= 1.0 - 1e-12) continue;
            const Eigen::Vector2d bounce = img + t * (rx - img);
            const int other = 1 - f.axis;
            if (bounce[other] < f.span_lo || bounce[other] > f.span_hi) continue;
            const double d1 = (tx - bounce).norm();
            const double d2 = (rx - bounce).norm();
            const double dxy = d1 + d2;
            // The unfolded ray must actually meet the wall below its roof.
            const double bounce_height = h_tx + (h_rx - h_tx) * (d1 / dxy);
            if (bounce_height > b.height_m + 1e-9) continue;
            const int skip = static_cast<int>(bi);
            if (!line_of_sight(scene, tx, bounce, skip)) continue;
            if (!line_of_sight(scene, bounce, rx, skip)) continue;
            const double d3 = std::hypot(dxy, dh);
            paths.push_back(make_path(
                d3, b.reflection_loss_db, world_bearing_deg(tx, bounce),
                vehicle_frame_deg(world_bearing_deg(rx, bounce), pose.heading_deg)));
        }
    }

    for (const DynamicObject& dyn : scene.dynamics) {
        if (!line_of_sight(scene, tx, dyn.center_xy)) continue;
        if (!line_of_sight(scene, dyn.center_xy, rx)) continue;
        const double h_s = 0.5 * dyn.height_m;
        const double d1 = std::hypot((tx - dyn.center_xy).norm(), h_tx - h_s);
        const double d2 = std::hypot((rx - dyn.center_xy).norm(), h_s - h_rx);
        paths.push_back(make_path(
            d1 + d2, dyn.scatter_loss_db, world_bearing_deg(tx, dyn.center_xy),
            vehicle_frame_deg(world_bearing_deg(rx, dyn.center_xy), pose.heading_deg)));
    }

    if (paths.empty()) paths.push_back(direct_path(kFallbackLossDb));

    std::stable_sort(paths.begin(), paths.end(),
                     [](const Mpc& a, const Mpc& b) { return a.amplitude > b.amplitude; });
    const double floor_amp =
        paths.front().amplitude * std::pow(10.0, -config.dynamic_range_db / 20.0);
    paths.erase(std::remove_if(paths.begin(), paths.end(),
                               [&](const Mpc& m) { return m.amplitude < floor_amp; }),
                paths.end());
    if (static_cast<int>(paths.size()) > config.max_paths)
        paths.resize(static_cast<std::size_t>(config.max_paths));

    MpcSet set;
    set.components = std::move(paths);
    return set;
}

}  // namespace vcpred
