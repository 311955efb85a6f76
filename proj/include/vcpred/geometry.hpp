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

#pragma once

// Small 2-D geometry kit shared by the scene generator, the panorama
// renderer and the ray tracer.  Everything is axis-aligned or circular,
// so closed-form slab and quadratic tests are enough.

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace vcpred {

struct Aabb {
    Eigen::Vector2d lo{0.0, 0.0};
    Eigen::Vector2d hi{0.0, 0.0};

    [[nodiscard]] bool contains(const Eigen::Vector2d& p, double margin = 0.0) const {
        return p.x() >= lo.x() - margin && p.x() <= hi.x() + margin &&
               p.y() >= lo.y() - margin && p.y() <= hi.y() + margin;
    }

    [[nodiscard]] bool overlaps(const Aabb& other, double margin = 0.0) const {
        return lo.x() <= other.hi.x() + margin && hi.x() >= other.lo.x() - margin &&
               lo.y() <= other.hi.y() + margin && hi.y() >= other.lo.y() - margin;
    }

    [[nodiscard]] Eigen::Vector2d center() const { return 0.5 * (lo + hi); }
};

inline constexpr double kInfDistance = std::numeric_limits<double>::infinity();

// Entry distance of the ray origin + t*dir (t >= 0) into a closed box, or
// infinity on a miss.  An origin inside the box reports distance 0.
inline double ray_aabb_distance(const Eigen::Vector2d& origin, const Eigen::Vector2d& dir,
                                const Aabb& box) {
    double tmin = 0.0;
    double tmax = kInfDistance;
    for (int axis = 0; axis < 2; ++axis) {
        const double o = origin[axis];
        const double d = dir[axis];
        if (d == 0.0) {
            if (o < box.lo[axis] || o > box.hi[axis]) return kInfDistance;
            continue;
        }
        double t0 = (box.lo[axis] - o) / d;
        double t1 = (box.hi[axis] - o) / d;
        if (t0 > t1) std::swap(t0, t1);
        tmin = std::max(tmin, t0);
        tmax = std::min(tmax, t1);
        if (tmin > tmax) return kInfDistance;
    }
    return tmin;
}

// Nearest strictly-positive intersection with a circle, or infinity.
inline double ray_circle_distance(const Eigen::Vector2d& origin, const Eigen::Vector2d& dir,
                                  const Eigen::Vector2d& center, double radius) {
    const Eigen::Vector2d oc = origin - center;
    const double a = dir.squaredNorm();
    const double b = 2.0 * oc.dot(dir);
    const double c = oc.squaredNorm() - radius * radius;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return kInfDistance;
    const double sq = std::sqrt(disc);
    const double t0 = (-b - sq) / (2.0 * a);
    if (t0 > 0.0) return t0;
    const double t1 = (-b + sq) / (2.0 * a);
    if (t1 > 0.0) return t1;
    return kInfDistance;
}

// Closed-box test for the segment p..q (Liang-Barsky clip).
inline bool segment_intersects_aabb(const Eigen::Vector2d& p, const Eigen::Vector2d& q,
                                    const Aabb& box) {
    double tmin = 0.0;
    double tmax = 1.0;
    const Eigen::Vector2d d = q - p;
    for (int axis = 0; axis < 2; ++axis) {
        if (d[axis] == 0.0) {
            if (p[axis] < box.lo[axis] || p[axis] > box.hi[axis]) return false;
            continue;
        }
        double t0 = (box.lo[axis] - p[axis]) / d[axis];
        double t1 = (box.hi[axis] - p[axis]) / d[axis];
        if (t0 > t1) std::swap(t0, t1);
        tmin = std::max(tmin, t0);
        tmax = std::min(tmax, t1);
        if (tmin > tmax) return false;
    }
    return true;
}

inline double wrap360(double deg) {
    double w = std::fmod(deg, 360.0);
    if (w < 0.0) w += 360.0;
    return w;
}

// Compass bearing: 0 deg = +y ("north"), 90 deg = +x ("east"), clockwise.
inline double world_bearing_deg(const Eigen::Vector2d& from, const Eigen::Vector2d& to) {
    const Eigen::Vector2d d = to - from;
    return wrap360(std::atan2(d.x(), d.y()) * 180.0 / std::numbers::pi);
}

// Azimuth relative to the vehicle heading; panorama column k and APS bin k
// both live in this frame.
inline double vehicle_frame_deg(double world_deg, double heading_deg) {
    return wrap360(world_deg - heading_deg);
}

inline Eigen::Vector2d bearing_dir(double bearing_deg) {
    const double rad = bearing_deg * std::numbers::pi / 180.0;
    return {std::sin(rad), std::cos(rad)};
}

}  // namespace vcpred
