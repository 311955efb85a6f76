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

#include <cmath>
#include <numbers>

namespace vcpred {

inline constexpr double kEarthRadiusM = 6371000.0;

struct GeoPoint {
    double lat_deg = 0.0;
    double lon_deg = 0.0;
};

inline double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
inline double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

/// Great-circle distance in metres on a spherical Earth (haversine form,
/// numerically stable for small separations).
inline double haversine_m(const GeoPoint& a, const GeoPoint& b) {
    const double phi1 = deg2rad(a.lat_deg);
    const double phi2 = deg2rad(b.lat_deg);
    const double dphi = deg2rad(b.lat_deg - a.lat_deg);
    const double dlam = deg2rad(b.lon_deg - a.lon_deg);
    const double s1 = std::sin(dphi / 2.0);
    const double s2 = std::sin(dlam / 2.0);
    const double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
    return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

/// Maps local tangent-plane offsets (x east, y north, metres) at `origin`
/// to geodetic coordinates. Inverse of the small-offset approximation; the
/// discrepancy against haversine_m stays below 0.1% for offsets up to a few
/// kilometres away from the poles.
inline GeoPoint to_geodetic(const GeoPoint& origin, double x_east_m, double y_north_m) {
    GeoPoint out;
    out.lat_deg = origin.lat_deg + rad2deg(y_north_m / kEarthRadiusM);
    out.lon_deg = origin.lon_deg + rad2deg(x_east_m / (kEarthRadiusM * std::cos(deg2rad(origin.lat_deg))));
    return out;
}

}  // namespace vcpred
