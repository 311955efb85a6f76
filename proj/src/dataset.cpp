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

#include "vcpred/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace vcpred {

Palette default_palette() {
    return {{
        {0, 0, 0},        // void
        {0, 255, 255},    // sky
        {128, 64, 128},   // road
        {128, 128, 128},  // building
        {0, 0, 255},      // vehicle
        {255, 0, 0},      // pedestrian
    }};
}

namespace {

void require_sorted(const std::vector<double>& ts, const char* name) {
    for (std::size_t i = 1; i < ts.size(); ++i)
        if (ts[i] < ts[i - 1])
            throw std::invalid_argument(std::string("synchronize: ") + name +
                                        " stream is not sorted");
}

// Nearest still-unclaimed record to time t, or -1.
int nearest_available(const std::set<int>& available, const std::vector<double>& ts,
                      double t) {
    if (available.empty()) return -1;
    int best = -1;
    double best_dt = kInfDistance;
    // First candidate at or after t.
    auto it = available.begin();
    {
        // std::set has no order-by-value helper over projected keys, so scan
        // from the partition point; candidates before and after it compete.
        it = std::lower_bound(available.begin(), available.end(), t,
                              [&](int idx, double val) { return ts[idx] < val; });
    }
    if (it != available.end()) {
        best = *it;
        best_dt = std::abs(ts[*it] - t);
    }
    if (it != available.begin()) {
        const int prev = *std::prev(it);
        if (std::abs(ts[prev] - t) < best_dt) best = prev;
    }
    return best;
}

}  // namespace

std::vector<SyncTriplet> synchronize(const std::vector<double>& channel_ts,
                                     const std::vector<double>& image_ts,
                                     const std::vector<double>& gps_ts,
                                     double max_offset_s) {
    if (max_offset_s < 0.0)
        throw std::invalid_argument("synchronize: max_offset_s must be >= 0");
    require_sorted(channel_ts, "channel");
    require_sorted(image_ts, "image");
    require_sorted(gps_ts, "gps");

    std::set<int> images;
    std::set<int> gpss;
    for (int i = 0; i < static_cast<int>(image_ts.size()); ++i) images.insert(i);
    for (int i = 0; i < static_cast<int>(gps_ts.size()); ++i) gpss.insert(i);

    std::vector<SyncTriplet> out;
    for (int c = 0; c < static_cast<int>(channel_ts.size()); ++c) {
        const double t = channel_ts[c];
        const int im = nearest_available(images, image_ts, t);
        const int gp = nearest_available(gpss, gps_ts, t);
        if (im < 0 || gp < 0) continue;
        if (std::abs(image_ts[im] - t) > max_offset_s) continue;
        if (std::abs(gps_ts[gp] - t) > max_offset_s) continue;
        images.erase(im);
        gpss.erase(gp);
        out.push_back({c, im, gp});
    }
    return out;
}

FilterRules FilterRules::defaults() {
    FilterRules rules;
    rules.min_total_power = 1e-15;
    rules.max_speed_mps = 20.0 / 3.6;
    rules.stop_speed_mps = 0.1;
    return rules;
}

FilterResult filter_invalid(const std::vector<RawSnapshot>& snapshots,
                            const FilterRules& rules) {
    const int n = static_cast<int>(snapshots.size());
    std::vector<bool> dropped(static_cast<std::size_t>(n), false);
    FilterResult result;

    if (rules.min_total_power) {
        for (int i = 0; i < n; ++i) {
            if (snapshots[static_cast<std::size_t>(i)].mpcs.components.empty() ||
                total_power(snapshots[static_cast<std::size_t>(i)].mpcs) <
                    *rules.min_total_power) {
                dropped[static_cast<std::size_t>(i)] = true;
                result.drops.push_back({snapshots[static_cast<std::size_t>(i)].snapshot_id,
                                        "low-power"});
            }
        }
    }

    if (rules.max_speed_mps) {
        int last_kept = -1;
        for (int i = 0; i < n; ++i) {
            if (dropped[static_cast<std::size_t>(i)]) continue;
            if (last_kept >= 0) {
                const RawSnapshot& prev = snapshots[static_cast<std::size_t>(last_kept)];
                const RawSnapshot& cur = snapshots[static_cast<std::size_t>(i)];
                const double dt = cur.t_gps_s - prev.t_gps_s;
                const double dist = haversine_m(prev.rx_geo, cur.rx_geo);
                if (dt > 0.0 &&
                    dist > *rules.max_speed_mps * dt + rules.gps_jump_slack_m) {
                    dropped[static_cast<std::size_t>(i)] = true;
                    result.drops.push_back({cur.snapshot_id, "gps-jump"});
                    continue;
                }
            }
            last_kept = i;
        }
    }

    if (rules.stop_speed_mps) {
        // Surviving indices in order; a run of consecutive slow gaps longer
        // than the configured duration drops the whole run.
        std::vector<int> alive;
        for (int i = 0; i < n; ++i)
            if (!dropped[static_cast<std::size_t>(i)]) alive.push_back(i);
        std::size_t run_start = 0;
        const auto flush_run = [&](std::size_t run_end) {
            // Run covers alive[run_start .. run_end] inclusive.
            if (run_end <= run_start) return;
            const double duration =
                snapshots[static_cast<std::size_t>(alive[run_end])].t_gps_s -
                snapshots[static_cast<std::size_t>(alive[run_start])].t_gps_s;
            if (duration > rules.stop_min_duration_s) {
                for (std::size_t k = run_start; k <= run_end; ++k) {
                    dropped[static_cast<std::size_t>(alive[k])] = true;
                    result.drops.push_back(
                        {snapshots[static_cast<std::size_t>(alive[k])].snapshot_id,
                         "prolonged-stop"});
                }
            }
        };
        for (std::size_t k = 1; k < alive.size(); ++k) {
            const RawSnapshot& prev = snapshots[static_cast<std::size_t>(alive[k - 1])];
            const RawSnapshot& cur = snapshots[static_cast<std::size_t>(alive[k])];
            const double dt = cur.t_gps_s - prev.t_gps_s;
            const double speed = dt > 0.0 ? haversine_m(prev.rx_geo, cur.rx_geo) / dt : 0.0;
            if (speed >= *rules.stop_speed_mps) {
                flush_run(k - 1);
                run_start = k;
            }
        }
        if (!alive.empty()) flush_run(alive.size() - 1);
    }

    for (int i = 0; i < n; ++i)
        if (!dropped[static_cast<std::size_t>(i)]) result.kept.push_back(i);
    return result;
}

Panorama mask_dynamic(const Panorama& pano) {
    Panorama out = pano;
    for (int row = 0; row < Panorama::kHeight; ++row) {
        for (int col = 0; col < Panorama::kWidth; ++col) {
            const int cls = out.semantic(row, col);
            if (cls == static_cast<int>(SemanticClass::sky) ||
                cls == static_cast<int>(SemanticClass::road) ||
                cls == static_cast<int>(SemanticClass::vehicle) ||
                cls == static_cast<int>(SemanticClass::pedestrian)) {
                out.semantic(row, col) = static_cast<int>(SemanticClass::void_class);
                out.depth(row, col) = 1.0;
            }
        }
    }
    return out;
}

namespace {

// Pixel-center nearest-neighbor source index.
int nn_index(int out_i, int out_n, int src_n) {
    const double src = (out_i + 0.5) * src_n / out_n;
    return std::min(static_cast<int>(src), src_n - 1);
}

}  // namespace

std::pair<Tensor, Tensor> encode_inputs(const Panorama& pano, const Palette& palette) {
    Tensor semantic = Tensor::zeros({3, kInputSize, kInputSize});
    Tensor depth = Tensor::zeros({3, kInputSize, kInputSize});

    for (int r = 0; r < kInputSize; ++r) {
        const int sr = nn_index(r, kInputSize, Panorama::kHeight);
        // Bilinear source coordinate for the depth channel, half-pixel
        // convention with edge clamping.
        const double fy =
            std::clamp((r + 0.5) * Panorama::kHeight / kInputSize - 0.5, 0.0,
                       static_cast<double>(Panorama::kHeight - 1));
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, Panorama::kHeight - 1);
        const double wy = fy - y0;
        for (int c = 0; c < kInputSize; ++c) {
            const int sc = nn_index(c, kInputSize, Panorama::kWidth);
            const int cls = pano.semantic(sr, sc);
            if (cls < 0 || cls >= static_cast<int>(palette.size()))
                throw std::invalid_argument("encode_inputs: class id " +
                                            std::to_string(cls) + " not in palette");
            for (int ch = 0; ch < 3; ++ch)
                semantic(ch, r, c) =
                    static_cast<float>(palette[static_cast<std::size_t>(cls)]
                                              [static_cast<std::size_t>(ch)] /
                                       255.0);

            const double fx =
                std::clamp((c + 0.5) * Panorama::kWidth / kInputSize - 0.5, 0.0,
                           static_cast<double>(Panorama::kWidth - 1));
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, Panorama::kWidth - 1);
            const double wx = fx - x0;
            const double d = (1.0 - wy) * ((1.0 - wx) * pano.depth(y0, x0) +
                                           wx * pano.depth(y0, x1)) +
                             wy * ((1.0 - wx) * pano.depth(y1, x0) +
                                   wx * pano.depth(y1, x1));
            const auto dv = static_cast<float>(d);
            depth(0, r, c) = dv;
            depth(1, r, c) = dv;
            depth(2, r, c) = dv;
        }
    }
    return {std::move(semantic), std::move(depth)};
}

Sample make_sample(const RawSnapshot& snapshot, const Palette& palette,
                   bool mask_dynamics) {
    Sample sample;
    const Panorama& pano =
        mask_dynamics ? mask_dynamic(snapshot.panorama) : snapshot.panorama;
    auto encoded = encode_inputs(pano, palette);
    sample.semantic_in = std::move(encoded.first);
    sample.depth_in = std::move(encoded.second);
    sample.tx_geo = snapshot.tx_geo;
    sample.rx_geo = snapshot.rx_geo;
    sample.labels = labels_from_mpcs(snapshot.mpcs);
    sample.area_id = snapshot.area_id;
    sample.snapshot_id = snapshot.snapshot_id;
    return sample;
}

}  // namespace vcpred
