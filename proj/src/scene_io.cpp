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

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "vcpred/scene.hpp"

namespace vcpred {

namespace {

constexpr const char* kSchemaVersion = "vcpred-scene/1";

using nlohmann::json;

json pair_json(const std::pair<int, int>& p) { return json::array({p.first, p.second}); }
json pair_json(const std::pair<double, double>& p) { return json::array({p.first, p.second}); }

template <typename T>
std::pair<T, T> pair_from(const json& j, const char* key) {
    const json& a = j.at(key);
    if (!a.is_array() || a.size() != 2)
        throw std::runtime_error(std::string("scene config: ") + key +
                                 " must be a two-element array");
    return {a[0].get<T>(), a[1].get<T>()};
}

}  // namespace

std::string scene_config_to_json(const SceneConfig& config) {
    json j;
    j["version"] = kSchemaVersion;
    j["seed"] = config.seed;
    j["area_id"] = config.area_id;
    j["extent_m"] = json::array({config.extent_m.x(), config.extent_m.y()});
    j["building_count"] = pair_json(config.building_count);
    j["building_height_m"] = pair_json(config.building_height_m);
    j["facade_loss_db"] = pair_json(config.facade_loss_db);
    j["vehicle_count"] = pair_json(config.vehicle_count);
    j["pedestrian_count"] = pair_json(config.pedestrian_count);
    j["vehicle_scatter_loss_db"] = pair_json(config.vehicle_scatter_loss_db);
    j["pedestrian_scatter_loss_db"] = pair_json(config.pedestrian_scatter_loss_db);
    j["tx_xy_m"] = json::array({config.tx_xy_m.x(), config.tx_xy_m.y()});
    j["tx_height_m"] = config.tx_height_m;
    j["rx_height_m"] = config.rx_height_m;
    j["max_speed_kmh"] = config.max_speed_kmh;
    j["origin"] = json::array({config.origin.lat_deg, config.origin.lon_deg});
    j["d_max_m"] = config.d_max_m;
    j["dynamic_range_db"] = config.dynamic_range_db;
    j["max_paths"] = config.max_paths;
    j["road_half_width_m"] = config.road_half_width_m;
    j["pose_dt_s"] = config.pose_dt_s;
    j["timestamp_jitter_s"] = config.timestamp_jitter_s;
    return j.dump(2) + "\n";
}

SceneConfig scene_config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("scene config: not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::runtime_error("scene config: top level must be an object");
    const std::string version = j.value("version", "");
    if (version != kSchemaVersion)
        throw std::runtime_error("scene config: unsupported version \"" + version +
                                 "\" (expected " + kSchemaVersion + ")");

    static const std::set<std::string> known = {
        "version",          "seed",
        "area_id",          "extent_m",
        "building_count",   "building_height_m",
        "facade_loss_db",   "vehicle_count",
        "pedestrian_count", "vehicle_scatter_loss_db",
        "pedestrian_scatter_loss_db", "tx_xy_m",
        "tx_height_m",      "rx_height_m",
        "max_speed_kmh",    "origin",
        "d_max_m",          "dynamic_range_db",
        "max_paths",        "road_half_width_m",
        "pose_dt_s",        "timestamp_jitter_s",
    };
    for (const auto& item : j.items())
        if (!known.count(item.key()))
            throw std::runtime_error("scene config: unknown key \"" + item.key() + "\"");

    SceneConfig cfg;
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("area_id")) cfg.area_id = j.at("area_id").get<std::string>();
    if (j.contains("extent_m")) {
        const auto p = pair_from<double>(j, "extent_m");
        cfg.extent_m = {p.first, p.second};
    }
    if (j.contains("building_count")) cfg.building_count = pair_from<int>(j, "building_count");
    if (j.contains("building_height_m"))
        cfg.building_height_m = pair_from<double>(j, "building_height_m");
    if (j.contains("facade_loss_db")) cfg.facade_loss_db = pair_from<double>(j, "facade_loss_db");
    if (j.contains("vehicle_count")) cfg.vehicle_count = pair_from<int>(j, "vehicle_count");
    if (j.contains("pedestrian_count"))
        cfg.pedestrian_count = pair_from<int>(j, "pedestrian_count");
    if (j.contains("vehicle_scatter_loss_db"))
        cfg.vehicle_scatter_loss_db = pair_from<double>(j, "vehicle_scatter_loss_db");
    if (j.contains("pedestrian_scatter_loss_db"))
        cfg.pedestrian_scatter_loss_db = pair_from<double>(j, "pedestrian_scatter_loss_db");
    if (j.contains("tx_xy_m")) {
        const auto p = pair_from<double>(j, "tx_xy_m");
        cfg.tx_xy_m = {p.first, p.second};
    }
    if (j.contains("tx_height_m")) cfg.tx_height_m = j.at("tx_height_m").get<double>();
    if (j.contains("rx_height_m")) cfg.rx_height_m = j.at("rx_height_m").get<double>();
    if (j.contains("max_speed_kmh")) cfg.max_speed_kmh = j.at("max_speed_kmh").get<double>();
    if (j.contains("origin")) {
        const auto p = pair_from<double>(j, "origin");
        cfg.origin = {p.first, p.second};
    }
    if (j.contains("d_max_m")) cfg.d_max_m = j.at("d_max_m").get<double>();
    if (j.contains("dynamic_range_db"))
        cfg.dynamic_range_db = j.at("dynamic_range_db").get<double>();
    if (j.contains("max_paths")) cfg.max_paths = j.at("max_paths").get<int>();
    if (j.contains("road_half_width_m"))
        cfg.road_half_width_m = j.at("road_half_width_m").get<double>();
    if (j.contains("pose_dt_s")) cfg.pose_dt_s = j.at("pose_dt_s").get<double>();
    if (j.contains("timestamp_jitter_s"))
        cfg.timestamp_jitter_s = j.at("timestamp_jitter_s").get<double>();
    validate_scene_config(cfg);
    return cfg;
}

void save_scene_config(const std::string& path, const SceneConfig& config) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("scene config: cannot open for writing: " + path);
    os << scene_config_to_json(config);
}

SceneConfig load_scene_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("scene config: cannot open: " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return scene_config_from_json(buf.str());
}

std::string dump_scene(const Scene& scene) {
    std::ostringstream os;
    char buf[256];
    const auto line = [&](const char* fmt, auto... args) {
        std::snprintf(buf, sizeof(buf), fmt, args...);
        os << buf << '\n';
    };
    line("scene origin %.9f %.9f", scene.origin.lat_deg, scene.origin.lon_deg);
    line("tx %.6f %.6f height %.6f", scene.tx_xy.x(), scene.tx_xy.y(), scene.tx_height_m);
    line("d_max %.6f", scene.d_max_m);
    for (int i = 0; i < 2; ++i) {
        const Aabb& leg = scene.road.legs[static_cast<std::size_t>(i)];
        line("road leg %d [%.6f %.6f] [%.6f %.6f]", i, leg.lo.x(), leg.lo.y(), leg.hi.x(),
             leg.hi.y());
    }
    for (std::size_t i = 0; i < scene.buildings.size(); ++i) {
        const Building& b = scene.buildings[i];
        line("building %zu [%.6f %.6f] [%.6f %.6f] height %.6f loss %.6f", i,
             b.footprint.lo.x(), b.footprint.lo.y(), b.footprint.hi.x(), b.footprint.hi.y(),
             b.height_m, b.reflection_loss_db);
    }
    for (std::size_t i = 0; i < scene.dynamics.size(); ++i) {
        const DynamicObject& d = scene.dynamics[i];
        line("dynamic %zu %s (%.6f %.6f) radius %.6f height %.6f loss %.6f", i,
             d.cls == DynamicClass::vehicle ? "vehicle" : "pedestrian", d.center_xy.x(),
             d.center_xy.y(), d.radius_m, d.height_m, d.scatter_loss_db);
    }
    return os.str();
}

}  // namespace vcpred
