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

#include "vcpred/scene.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "vcpred/rng.hpp"

namespace vcpred {

namespace {

void require(bool ok, const char* field) {
    if (!ok) throw std::invalid_argument(std::string("scene config: invalid ") + field);
}

// Road layout derived deterministically from the extent: a vertical leg on
// the west side joined to a horizontal leg near the top, forming an L whose
// corner separates LoS-dominated from NLoS-dominated stretches.
struct Layout {
    double cx;        // leg 0 centerline x
    double y0;        // leg 0 south end
    double yc;        // leg 1 centerline y (the corner)
    double x1;        // leg 1 east end
    double hw;        // half width
};

Layout road_layout(const SceneConfig& config) {
    const double w = config.extent_m.x();
    const double l = config.extent_m.y();
    return {0.25 * w, 0.05 * l, 0.70 * l, 0.95 * w, config.road_half_width_m};
}

RoadPolygon build_road(const Layout& g) {
    RoadPolygon road;
    road.legs[0] = Aabb{{g.cx - g.hw, g.y0}, {g.cx + g.hw, g.yc + g.hw}};
    road.legs[1] = Aabb{{g.cx - g.hw, g.yc - g.hw}, {g.x1, g.yc + g.hw}};
    road.outline = {
        {g.cx - g.hw, g.y0}, {g.cx + g.hw, g.y0},  {g.cx + g.hw, g.yc - g.hw},
        {g.x1, g.yc - g.hw}, {g.x1, g.yc + g.hw},  {g.cx - g.hw, g.yc + g.hw},
    };
    return road;
}

struct Strip {
    // Buildings sit beside the road edge; axis 0 walks along y (vertical
    // strip), axis 1 walks along x.
    int walk_axis;
    double edge;      // road edge coordinate on the cross axis
    double outward;   // +1 or -1, direction away from the road
    double from;      // walk start
    double to;        // walk end
};

std::vector<Building> building_slots(const SceneConfig& config, const Layout& g,
                                     CounterRng& rng) {
    const std::array<Strip, 4> strips = {{
        {0, g.cx - g.hw, -1.0, g.y0, g.yc + g.hw},   // leg 0 west side
        {0, g.cx + g.hw, +1.0, g.y0, g.yc + g.hw},   // leg 0 east side
        {1, g.yc - g.hw, -1.0, g.cx - g.hw, g.x1},   // leg 1 south side
        {1, g.yc + g.hw, +1.0, g.cx - g.hw, g.x1},   // leg 1 north side
    }};
    std::vector<Building> slots;
    for (const Strip& s : strips) {
        double pos = s.from + rng.uniform(0.0, 4.0);
        while (true) {
            const double len = rng.uniform(7.0, 14.0);
            const double setback = rng.uniform(2.0, 6.0);
            const double depth = rng.uniform(6.0, 12.0);
            const double along_gap = rng.uniform(2.0, 5.0);
            if (pos + len > s.to) break;
            const double near_edge = s.edge + s.outward * setback;
            const double far_edge = near_edge + s.outward * depth;
            Building b;
            if (s.walk_axis == 0) {
                b.footprint.lo = {std::min(near_edge, far_edge), pos};
                b.footprint.hi = {std::max(near_edge, far_edge), pos + len};
            } else {
                b.footprint.lo = {pos, std::min(near_edge, far_edge)};
                b.footprint.hi = {pos + len, std::max(near_edge, far_edge)};
            }
            b.height_m = rng.uniform(config.building_height_m.first,
                                     config.building_height_m.second);
            b.reflection_loss_db =
                rng.uniform(config.facade_loss_db.first, config.facade_loss_db.second);
            pos += len + along_gap;
            const bool in_extent = b.footprint.lo.x() >= 0.0 && b.footprint.lo.y() >= 0.0 &&
                                   b.footprint.hi.x() <= config.extent_m.x() &&
                                   b.footprint.hi.y() <= config.extent_m.y();
            if (in_extent) slots.push_back(b);
        }
    }
    return slots;
}

template <typename T>
void shuffle(std::vector<T>& v, CounterRng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
        std::swap(v[i - 1], v[j]);
    }
}

std::vector<Building> place_buildings(const SceneConfig& config, const Layout& g,
                                      const RoadPolygon& road) {
    const int target = static_cast<int>(
        CounterRng(config.seed, "building-count").uniform_int(config.building_count.first,
                                                              config.building_count.second));
    if (target == 0) return {};
    constexpr int kAttempts = 8;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        CounterRng rng(config.seed, "buildings",
                       static_cast<std::uint64_t>(attempt) * 100000u);
        std::vector<Building> slots = building_slots(config, g, rng);
        shuffle(slots, rng);
        std::vector<Building> accepted;
        for (const Building& b : slots) {
            if (static_cast<int>(accepted.size()) == target) break;
            if (b.footprint.overlaps(road.legs[0], 0.1) ||
                b.footprint.overlaps(road.legs[1], 0.1))
                continue;
            if (b.footprint.contains(config.tx_xy_m, 1.0)) continue;
            bool clash = false;
            for (const Building& other : accepted)
                if (b.footprint.overlaps(other.footprint, 0.5)) { clash = true; break; }
            if (!clash) accepted.push_back(b);
        }
        if (static_cast<int>(accepted.size()) == target) return accepted;
    }
    throw std::runtime_error(
        "scene generation: could not place " + std::to_string(target) +
        " buildings after bounded retries (constraint: building_count)");
}

std::vector<DynamicObject> place_dynamics(const SceneConfig& config, const Scene& scene) {
    std::vector<DynamicObject> out;
    struct ClassSpec {
        DynamicClass cls;
        const char* stream;
        const char* constraint;
        std::pair<int, int> count;
        std::pair<double, double> radius;
        std::pair<double, double> height;
        std::pair<double, double> loss;
        double roadside_slack;
    };
    const std::array<ClassSpec, 2> specs = {{
        {DynamicClass::vehicle, "vehicles", "vehicle_count", config.vehicle_count,
         {0.9, 1.3}, {1.4, 2.0}, config.vehicle_scatter_loss_db, -1.5},
        {DynamicClass::pedestrian, "pedestrians", "pedestrian_count",
         config.pedestrian_count, {0.25, 0.35}, {1.6, 1.9},
         config.pedestrian_scatter_loss_db, 2.5},
    }};
    for (const ClassSpec& spec : specs) {
        CounterRng rng(config.seed, spec.stream);
        const int n =
            static_cast<int>(rng.uniform_int(spec.count.first, spec.count.second));
        for (int i = 0; i < n; ++i) {
            bool placed = false;
            for (int tries = 0; tries < 100 && !placed; ++tries) {
                DynamicObject obj;
                obj.cls = spec.cls;
                const Aabb leg = scene.road.legs[rng.uniform_int(0, 1)];
                // Negative slack shrinks onto the carriageway, positive
                // extends onto the verge beside it.
                const double sx = spec.roadside_slack;
                obj.center_xy = {rng.uniform(leg.lo.x() - sx, leg.hi.x() + sx),
                                 rng.uniform(leg.lo.y() - sx, leg.hi.y() + sx)};
                obj.radius_m = rng.uniform(spec.radius.first, spec.radius.second);
                obj.height_m = rng.uniform(spec.height.first, spec.height.second);
                obj.scatter_loss_db = rng.uniform(spec.loss.first, spec.loss.second);
                if (obj.center_xy.x() < 0.5 || obj.center_xy.y() < 0.5 ||
                    obj.center_xy.x() > config.extent_m.x() - 0.5 ||
                    obj.center_xy.y() > config.extent_m.y() - 0.5)
                    continue;
                if ((obj.center_xy - config.tx_xy_m).norm() < 2.0) continue;
                bool clash = false;
                for (const Building& b : scene.buildings)
                    if (b.footprint.contains(obj.center_xy, 0.2)) { clash = true; break; }
                for (const DynamicObject& other : out)
                    if ((obj.center_xy - other.center_xy).norm() <
                        obj.radius_m + other.radius_m + 0.3) { clash = true; break; }
                if (clash) continue;
                out.push_back(obj);
                placed = true;
            }
            if (!placed)
                throw std::runtime_error(
                    std::string("scene generation: could not place dynamic object after "
                                "bounded retries (constraint: ") +
                    spec.constraint + ")");
        }
    }
    return out;
}

}  // namespace

void validate_scene_config(const SceneConfig& config) {
    require(config.extent_m.x() > 0.0 && config.extent_m.y() > 0.0, "extent_m");
    require(config.building_count.first >= 0 &&
                config.building_count.second >= config.building_count.first,
            "building_count");
    require(config.building_height_m.first > 0.0 &&
                config.building_height_m.second >= config.building_height_m.first,
            "building_height_m");
    require(config.facade_loss_db.first >= 0.0 &&
                config.facade_loss_db.second >= config.facade_loss_db.first,
            "facade_loss_db");
    require(config.vehicle_count.first >= 0 &&
                config.vehicle_count.second >= config.vehicle_count.first,
            "vehicle_count");
    require(config.pedestrian_count.first >= 0 &&
                config.pedestrian_count.second >= config.pedestrian_count.first,
            "pedestrian_count");
    require(config.vehicle_scatter_loss_db.second >= config.vehicle_scatter_loss_db.first,
            "vehicle_scatter_loss_db");
    require(config.pedestrian_scatter_loss_db.second >=
                config.pedestrian_scatter_loss_db.first,
            "pedestrian_scatter_loss_db");
    require(config.tx_xy_m.x() >= 0.0 && config.tx_xy_m.x() <= config.extent_m.x() &&
                config.tx_xy_m.y() >= 0.0 && config.tx_xy_m.y() <= config.extent_m.y(),
            "tx_xy_m");
    require(config.tx_height_m > 0.0, "tx_height_m");
    require(config.rx_height_m > 0.0, "rx_height_m");
    require(config.max_speed_kmh > 0.0, "max_speed_kmh");
    require(std::abs(config.origin.lat_deg) <= 90.0 && std::abs(config.origin.lon_deg) <= 180.0,
            "origin");
    require(config.d_max_m > 0.0, "d_max_m");
    require(config.dynamic_range_db > 0.0, "dynamic_range_db");
    require(config.max_paths >= 1, "max_paths");
    require(config.road_half_width_m > 0.0 &&
                config.road_half_width_m * 4.0 < config.extent_m.x(),
            "road_half_width_m");
    require(config.pose_dt_s > 0.0, "pose_dt_s");
    require(config.timestamp_jitter_s >= 0.0, "timestamp_jitter_s");
}

SceneConfig area_config(int area_index) {
    SceneConfig cfg;
    switch (area_index) {
        case 0:
            cfg.seed = 101;
            cfg.area_id = "area1";
            cfg.extent_m = {200.0, 200.0};
            cfg.tx_xy_m = {57.0, 30.0};
            cfg.tx_height_m = 33.0;
            break;
        case 1:
            cfg.seed = 202;
            cfg.area_id = "area2";
            cfg.extent_m = {220.0, 190.0};
            cfg.tx_xy_m = {62.0, 29.5};
            cfg.tx_height_m = 34.0;
            break;
        case 2:
            cfg.seed = 303;
            cfg.area_id = "area3";
            cfg.extent_m = {190.0, 220.0};
            cfg.tx_xy_m = {54.5, 31.0};
            cfg.tx_height_m = 34.0;
            break;
        case 3:
            cfg.seed = 404;
            cfg.area_id = "area4";
            cfg.extent_m = {200.0, 180.0};
            cfg.tx_xy_m = {57.0, 29.0};
            cfg.tx_height_m = 3.0;
            break;
        default:
            throw std::invalid_argument("area_config: index must be in [0, 3]");
    }
    return cfg;
}

Scene generate_scene(const SceneConfig& config) {
    validate_scene_config(config);
    const Layout g = road_layout(config);
    Scene scene;
    scene.road = build_road(g);
    scene.centerline = {Eigen::Vector2d{g.cx, g.y0}, Eigen::Vector2d{g.cx, g.yc},
                        Eigen::Vector2d{g.x1, g.yc}};
    scene.tx_xy = config.tx_xy_m;
    scene.tx_height_m = config.tx_height_m;
    scene.origin = config.origin;
    scene.d_max_m = config.d_max_m;
    scene.buildings = place_buildings(config, g, scene.road);
    scene.dynamics = place_dynamics(config, scene);
    return scene;
}

bool line_of_sight(const Scene& scene, const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                   int skip_building) {
    for (std::size_t i = 0; i < scene.buildings.size(); ++i) {
        if (static_cast<int>(i) == skip_building) continue;
        if (segment_intersects_aabb(a, b, scene.buildings[i].footprint)) return false;
    }
    return true;
}

namespace {

struct Polyline {
    std::array<Eigen::Vector2d, 3> pts;
    double len0, len1, total;
};

Polyline centerline_of(const Scene& scene) {
    Polyline p{scene.centerline, 0.0, 0.0, 0.0};
    p.len0 = (p.pts[1] - p.pts[0]).norm();
    p.len1 = (p.pts[2] - p.pts[1]).norm();
    p.total = p.len0 + p.len1;
    return p;
}

RxPose pose_at(const Polyline& line, double s, double height, double t) {
    RxPose pose;
    pose.height_m = height;
    pose.timestamp_s = t;
    if (s <= line.len0) {
        const Eigen::Vector2d dir = (line.pts[1] - line.pts[0]) / line.len0;
        pose.position = line.pts[0] + dir * s;
        pose.heading_deg = world_bearing_deg(line.pts[0], line.pts[1]);
    } else {
        const Eigen::Vector2d dir = (line.pts[2] - line.pts[1]) / line.len1;
        pose.position = line.pts[1] + dir * (s - line.len0);
        pose.heading_deg = world_bearing_deg(line.pts[1], line.pts[2]);
    }
    return pose;
}

}  // namespace

std::vector<RxPose> sample_trajectory(const Scene& scene, int n, const SceneConfig& config) {
    if (n < 1) throw std::invalid_argument("sample_trajectory: n must be >= 1");
    const Polyline line = centerline_of(scene);
    if (line.total <= 1.0)
        throw std::runtime_error("sample_trajectory: road too short for requested poses");

    const double v_cap = config.max_speed_kmh / 3.6;
    const double dt = config.pose_dt_s;
    CounterRng rng(config.seed, "trajectory");
    std::vector<double> step(n > 1 ? n - 1 : 0);
    double travel = 0.0;
    for (double& s : step) {
        s = v_cap * (0.55 + 0.40 * rng.uniform()) * dt;
        travel += s;
    }
    if (travel > 0.98 * line.total) {
        const double scale = 0.98 * line.total / travel;
        if (scale < 0.2)
            throw std::runtime_error("sample_trajectory: road too short for requested poses");
        for (double& s : step) s *= scale;
        travel = 0.98 * line.total;
    }

    const auto poses_from = [&](double s0) {
        std::vector<RxPose> poses;
        poses.reserve(n);
        double s = s0;
        for (int i = 0; i < n; ++i) {
            poses.push_back(pose_at(line, s, config.rx_height_m, i * dt));
            if (i + 1 < n) s += step[i];
        }
        return poses;
    };
    const auto mixed_visibility = [&](const std::vector<RxPose>& poses) {
        bool los = false, nlos = false;
        for (const RxPose& p : poses)
            (line_of_sight(scene, scene.tx_xy, p.position) ? los : nlos) = true;
        return los && nlos;
    };

    // Anchor the run around the corner; if that fails to mix LoS and NLoS,
    // probe a few other deterministic start offsets before settling.
    const auto start_for = [&](double f) {
        return std::clamp(line.len0 - f * travel, 0.0, line.total - travel);
    };
    std::vector<RxPose> poses = poses_from(start_for(0.45));
    if (n >= 20 && !scene.buildings.empty() && !mixed_visibility(poses)) {
        for (const double f : {0.25, 0.65, 0.10, 0.85}) {
            std::vector<RxPose> retry = poses_from(start_for(f));
            if (mixed_visibility(retry)) { poses = std::move(retry); break; }
        }
    }
    return poses;
}

RawSnapshot make_snapshot(const Scene& scene, const RxPose& pose, const SceneConfig& config) {
    RawSnapshot snap;
    const auto index = static_cast<std::int64_t>(std::llround(pose.timestamp_s / config.pose_dt_s));
    char id[64];
    std::snprintf(id, sizeof(id), "%s-%05lld", config.area_id.c_str(),
                  static_cast<long long>(index));
    snap.snapshot_id = id;
    snap.area_id = config.area_id;
    snap.panorama = render_panorama(scene, pose);
    snap.mpcs = trace_mpcs(scene, pose, config);
    snap.mpcs.snapshot_id = snap.snapshot_id;
    snap.tx_geo = to_geodetic(scene.origin, scene.tx_xy.x(), scene.tx_xy.y());
    snap.rx_geo = to_geodetic(scene.origin, pose.position.x(), pose.position.y());
    CounterRng jitter(config.seed, "timestamp-jitter", static_cast<std::uint64_t>(index) * 3u);
    const double b = config.timestamp_jitter_s;
    snap.t_channel_s = pose.timestamp_s + jitter.uniform(-b, b);
    snap.t_image_s = pose.timestamp_s + jitter.uniform(-b, b);
    snap.t_gps_s = pose.timestamp_s + jitter.uniform(-b, b);
    return snap;
}

}  // namespace vcpred
