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

// Procedural street-canyon scenes for the synthetic V2I corpus.  A scene is
// an L-shaped road flanked by building strips plus a sprinkle of dynamic
// objects; per receiver pose we render a semantic/depth panorama and trace
// multipath components with a single-bounce image-method model.

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vcpred/channel_stats.hpp"
#include "vcpred/geodesy.hpp"
#include "vcpred/geometry.hpp"

namespace vcpred {

inline constexpr double kSpeedOfLightMps = 299'792'458.0;
inline constexpr double kCarrierHz = 4.85e9;
inline constexpr double kWavelengthM = kSpeedOfLightMps / kCarrierHz;

struct SceneConfig {
    std::uint64_t seed = 1;
    std::string area_id = "area1";
    Eigen::Vector2d extent_m{200.0, 200.0};

    std::pair<int, int> building_count{20, 30};
    std::pair<double, double> building_height_m{10.0, 30.0};
    std::pair<double, double> facade_loss_db{4.0, 12.0};
    std::pair<int, int> vehicle_count{4, 10};
    std::pair<int, int> pedestrian_count{4, 12};
    std::pair<double, double> vehicle_scatter_loss_db{10.0, 20.0};
    std::pair<double, double> pedestrian_scatter_loss_db{15.0, 25.0};

    Eigen::Vector2d tx_xy_m{57.0, 30.0};
    double tx_height_m = 33.0;
    double rx_height_m = 2.7;
    double max_speed_kmh = 20.0;
    GeoPoint origin{40.0, -105.0};
    double d_max_m = 100.0;
    double dynamic_range_db = 30.0;
    int max_paths = 64;

    double road_half_width_m = 6.0;
    double pose_dt_s = 0.5;
    double timestamp_jitter_s = 0.04;
};

// Throws std::invalid_argument naming the offending field.
void validate_scene_config(const SceneConfig& config);

// Area presets mirror a macro/micro deployment split: three elevated
// transmitters and one street-level transmitter, each with its own seed.
SceneConfig area_config(int area_index);

struct Building {
    Aabb footprint;
    double height_m = 0.0;
    double reflection_loss_db = 0.0;
};

enum class DynamicClass { vehicle, pedestrian };

struct DynamicObject {
    Eigen::Vector2d center_xy{0.0, 0.0};
    double radius_m = 0.0;
    double height_m = 0.0;
    DynamicClass cls = DynamicClass::vehicle;
    double scatter_loss_db = 0.0;
};

// L-shaped carriageway stored both as an outline (for dumps) and as the two
// axis-aligned leg rectangles the generator and samplers actually test
// against.  legs[0] runs south to north, legs[1] west to east.
struct RoadPolygon {
    std::vector<Eigen::Vector2d> outline;
    std::array<Aabb, 2> legs;
};

struct Scene {
    RoadPolygon road;
    std::vector<Building> buildings;
    std::vector<DynamicObject> dynamics;
    Eigen::Vector2d tx_xy{0.0, 0.0};
    double tx_height_m = 0.0;
    GeoPoint origin{0.0, 0.0};
    double d_max_m = 100.0;
    // Road centerline start -> corner -> end, used by sample_trajectory.
    std::array<Eigen::Vector2d, 3> centerline{};
};

struct RxPose {
    Eigen::Vector2d position{0.0, 0.0};
    double heading_deg = 0.0;
    double height_m = 2.7;
    double timestamp_s = 0.0;
};

enum class SemanticClass : int {
    void_class = 0,
    sky = 1,
    road = 2,
    building = 3,
    vehicle = 4,
    pedestrian = 5,
};

struct Panorama {
    static constexpr int kHeight = 100;
    static constexpr int kWidth = 360;
    // Row 0 looks 59.5 deg above the horizon; each row steps down 1 deg, so
    // rows 60..99 look below the horizon.  Column k is vehicle-frame
    // azimuth k deg.
    static constexpr double kElevationTopDeg = 60.0;

    Eigen::MatrixXi semantic;   // kHeight x kWidth, SemanticClass values
    Eigen::MatrixXd depth;      // kHeight x kWidth, in [0, 1]

    static double row_elevation_deg(int row) { return kElevationTopDeg - (row + 0.5); }
};

struct RawSnapshot {
    std::string snapshot_id;
    Panorama panorama;
    GeoPoint tx_geo{0.0, 0.0};
    GeoPoint rx_geo{0.0, 0.0};
    MpcSet mpcs;
    double t_channel_s = 0.0;
    double t_image_s = 0.0;
    double t_gps_s = 0.0;
    std::string area_id;
};

// Deterministic in config.seed.  Throws std::runtime_error naming the
// constraint when placement stays infeasible after bounded retries.
Scene generate_scene(const SceneConfig& config);

// Poses along the road centerline at config.pose_dt_s spacing, speed capped
// at config.max_speed_kmh.  The start offset is chosen so a long enough run
// crosses the corner and sees both LoS and NLoS.  Throws std::runtime_error
// when the road is too short for n poses.
std::vector<RxPose> sample_trajectory(const Scene& scene, int n, const SceneConfig& config);

// True iff no building footprint intersects the 2-D a..b segment.
// skip_building skips one index (used for image-method bounce segments).
bool line_of_sight(const Scene& scene, const Eigen::Vector2d& a, const Eigen::Vector2d& b,
                   int skip_building = -1);

Panorama render_panorama(const Scene& scene, const RxPose& pose);

// LoS + one specular per visible facade + one scatter per visible dynamic,
// trimmed to the configured dynamic range and path budget.  Never empty: a
// fully shadowed pose falls back to the direct path with a fixed 40 dB
// obstruction penalty.
MpcSet trace_mpcs(const Scene& scene, const RxPose& pose, const SceneConfig& config);

RawSnapshot make_snapshot(const Scene& scene, const RxPose& pose, const SceneConfig& config);

// Structured-text config document, schema "vcpred-scene/1".
std::string scene_config_to_json(const SceneConfig& config);
SceneConfig scene_config_from_json(const std::string& text);
void save_scene_config(const std::string& path, const SceneConfig& config);
SceneConfig load_scene_config(const std::string& path);

// Human-readable geometry dump; byte-identical for identical scenes.
std::string dump_scene(const Scene& scene);

}  // namespace vcpred
