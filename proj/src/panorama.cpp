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

#include <cmath>
#include <numbers>

#include "vcpred/scene.hpp"

namespace vcpred {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

struct ColumnHit {
    double distance = kInfDistance;
    double height_m = 0.0;
    SemanticClass cls = SemanticClass::sky;
};

// The 2-D footprint decides the hit, the object height decides which rows
// it covers.  Buildings and dynamics are resolved separately so a short
// vehicle in front of a tall facade occludes only its own elevation band;
// deleting dynamics then leaves every static pixel untouched.
ColumnHit nearest_building(const Scene& scene, const Eigen::Vector2d& origin,
                           const Eigen::Vector2d& dir) {
    ColumnHit hit;
    for (const Building& b : scene.buildings) {
        const double t = ray_aabb_distance(origin, dir, b.footprint);
        if (t > 1e-9 && t < hit.distance) {
            hit.distance = t;
            hit.height_m = b.height_m;
            hit.cls = SemanticClass::building;
        }
    }
    return hit;
}

ColumnHit nearest_dynamic(const Scene& scene, const Eigen::Vector2d& origin,
                          const Eigen::Vector2d& dir, double max_distance) {
    ColumnHit hit;
    for (const DynamicObject& d : scene.dynamics) {
        const double t = ray_circle_distance(origin, dir, d.center_xy, d.radius_m);
        if (t > 1e-9 && t < hit.distance && t < max_distance) {
            hit.distance = t;
            hit.height_m = d.height_m;
            hit.cls = d.cls == DynamicClass::vehicle ? SemanticClass::vehicle
                                                     : SemanticClass::pedestrian;
        }
    }
    return hit;
}

struct Band {
    double top_deg = -kInfDistance;
    double base_deg = kInfDistance;
    double depth = 1.0;
    bool valid = false;
};

Band band_of(const ColumnHit& hit, double h_rx, double d_max) {
    Band band;
    if (hit.distance == kInfDistance) return band;
    // Objects stand on the ground, so they span from the ground grazing
    // angle up to their top edge.
    band.top_deg = std::atan2(hit.height_m - h_rx, hit.distance) * kRadToDeg;
    band.base_deg = -std::atan2(h_rx, hit.distance) * kRadToDeg;
    band.depth = std::min(hit.distance / d_max, 1.0);
    band.valid = true;
    return band;
}

}  // namespace

Panorama render_panorama(const Scene& scene, const RxPose& pose) {
    Panorama pano;
    pano.semantic.setConstant(Panorama::kHeight, Panorama::kWidth,
                              static_cast<int>(SemanticClass::sky));
    pano.depth.setConstant(Panorama::kHeight, Panorama::kWidth, 1.0);

    const double h_rx = pose.height_m;
    for (int col = 0; col < Panorama::kWidth; ++col) {
        const Eigen::Vector2d dir = bearing_dir(wrap360(pose.heading_deg + col));
        const ColumnHit wall = nearest_building(scene, pose.position, dir);
        const ColumnHit mover = nearest_dynamic(scene, pose.position, dir, wall.distance);
        const Band wall_band = band_of(wall, h_rx, scene.d_max_m);
        const Band mover_band = band_of(mover, h_rx, scene.d_max_m);

        for (int row = 0; row < Panorama::kHeight; ++row) {
            const double e = Panorama::row_elevation_deg(row);
            if (mover_band.valid && e >= mover_band.base_deg && e <= mover_band.top_deg) {
                pano.semantic(row, col) = static_cast<int>(mover.cls);
                pano.depth(row, col) = mover_band.depth;
            } else if (wall_band.valid && e >= wall_band.base_deg && e <= wall_band.top_deg) {
                pano.semantic(row, col) = static_cast<int>(wall.cls);
                pano.depth(row, col) = wall_band.depth;
            } else if (e < 0.0) {
                const double ground = h_rx / std::tan(-e / kRadToDeg);
                pano.semantic(row, col) = static_cast<int>(SemanticClass::road);
                pano.depth(row, col) = std::min(ground / scene.d_max_m, 1.0);
            }
            // else: sky, preset.
        }
    }
    return pano;
}

}  // namespace vcpred
