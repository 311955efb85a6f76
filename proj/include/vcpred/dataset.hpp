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

// Raw snapshots -> aligned, filtered, serialized train/val/test corpus:
// timestamp synchronization, validity filtering, dynamic masking, input
// encoding, dataset directory io and area-based splits.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vcpred/channel_stats.hpp"
#include "vcpred/geodesy.hpp"
#include "vcpred/scene.hpp"
#include "vcpred/tensor.hpp"

namespace vcpred {

inline constexpr int kInputSize = 224;

// Class id -> RGB, indexed by SemanticClass.
using Palette = std::array<std::array<int, 3>, 6>;

// void black, sky cyan, road purple, building gray, vehicle blue,
// pedestrian red.  Fixed so encodings are reproducible across runs.
Palette default_palette();

struct Sample {
    Tensor semantic_in;  // [3, 224, 224] in [0, 1]
    Tensor depth_in;     // [3, 224, 224] in [0, 1]
    GeoPoint tx_geo{0.0, 0.0};
    GeoPoint rx_geo{0.0, 0.0};
    ChannelLabels labels;
    std::string area_id;
    std::string snapshot_id;
};

struct DatasetManifest {
    std::string version = "vcpred-dataset/1";
    int sample_count = 0;
    // (snapshot_id, area_id) in serialization order.
    std::vector<std::pair<std::string, std::string>> samples;
    std::map<std::string, int> area_counts;
    Palette palette = default_palette();
    // Targets are learned in scaled units; reports undo the division.
    double scale_pl_db = 100.0;
    double scale_ds_ns = 100.0;
    double scale_asa_deg = 10.0;
    double scale_asd_deg = 10.0;
    // Standardization of the tx-rx great-circle distance fed to the
    // location branch, computed over the whole corpus at generation time.
    double distance_mean_m = 0.0;
    double distance_std_m = 1.0;
    bool dynamics_masked = false;
    std::vector<std::uint64_t> seeds;
    std::string content_hash_hex;
};

// --- synchronization ------------------------------------------------------

struct SyncTriplet {
    int channel = -1;
    int image = -1;
    int gps = -1;
};

// Greedy nearest-timestamp matching anchored on the channel stream; a
// triplet is kept iff both offsets are within max_offset_s and records are
// claimed at most once.  Streams must be sorted ascending.
std::vector<SyncTriplet> synchronize(const std::vector<double>& channel_ts,
                                     const std::vector<double>& image_ts,
                                     const std::vector<double>& gps_ts,
                                     double max_offset_s = 0.1);

// --- validity filtering ---------------------------------------------------

struct FilterRules {
    // Rules left unset do not fire; a default-constructed value is the
    // identity filter.
    std::optional<double> min_total_power;
    std::optional<double> max_speed_mps;  // GPS jump bound: v * dt + slack
    double gps_jump_slack_m = 1.0;
    std::optional<double> stop_speed_mps;
    double stop_min_duration_s = 10.0;

    static FilterRules defaults();
};

struct DropEntry {
    std::string snapshot_id;
    std::string rule;
};

struct FilterResult {
    std::vector<int> kept;  // indices into the input, ascending
    std::vector<DropEntry> drops;
};

// Snapshots must be in trajectory order; GPS rules compare each snapshot
// against the last kept one.
FilterResult filter_invalid(const std::vector<RawSnapshot>& snapshots,
                            const FilterRules& rules);

// --- masking and encoding -------------------------------------------------

// Sky, road, vehicle and pedestrian pixels become void with depth exactly
// 1.0; buildings and existing void pixels pass through.  Idempotent.
Panorama mask_dynamic(const Panorama& pano);

// Class map -> palette RGB -> nearest-neighbor 224x224, scaled to [0,1];
// depth -> bilinear 224x224 replicated to 3 channels.  Throws on class ids
// outside the palette.
std::pair<Tensor, Tensor> encode_inputs(const Panorama& pano, const Palette& palette);

Sample make_sample(const RawSnapshot& snapshot, const Palette& palette, bool mask_dynamics);

// --- dataset directory io -------------------------------------------------

// Layout: manifest.json, samples/<id>.tensors (semantic then depth record),
// labels/<id>.json, drops.log.  The manifest content hash covers every
// sample's id, tensor bytes and label text in manifest order.
void write_dataset(const std::vector<Sample>& samples, DatasetManifest manifest,
                   const std::string& dir, const std::vector<DropEntry>& drops = {});

struct LoadedDataset {
    std::vector<Sample> samples;
    DatasetManifest manifest;
};

// Verifies the format version and the content hash.
LoadedDataset read_dataset(const std::string& dir);
DatasetManifest read_manifest(const std::string& dir);

// --- splits -----------------------------------------------------------------

struct DatasetSplit {
    std::vector<std::string> train;
    std::vector<std::string> val;
    std::vector<std::string> test;
};

// test = every sample of test_area; the rest is shuffled by seed and cut
// into train/val.  Throws if the area is absent or the fraction invalid.
DatasetSplit split_by_area(const DatasetManifest& manifest, const std::string& test_area,
                           double val_fraction = 0.2, std::uint64_t seed = 0);

}  // namespace vcpred
