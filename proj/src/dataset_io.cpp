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

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "vcpred/dataset.hpp"
#include "vcpred/hash.hpp"
#include "vcpred/rng.hpp"

namespace vcpred {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_file(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("dataset: cannot open " + path.string());
    std::ostringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("dataset: cannot write " + path.string());
    os << content;
}

std::string tensors_blob(const Sample& sample) {
    std::ostringstream os(std::ios::binary);
    write_tensor_record(os, sample.semantic_in);
    write_tensor_record(os, sample.depth_in);
    return os.str();
}

std::string labels_blob(const Sample& sample) {
    json j;
    j["snapshot_id"] = sample.snapshot_id;
    j["area_id"] = sample.area_id;
    j["tx_geo"] = json::array({sample.tx_geo.lat_deg, sample.tx_geo.lon_deg});
    j["rx_geo"] = json::array({sample.rx_geo.lat_deg, sample.rx_geo.lon_deg});
    j["pl_db"] = sample.labels.pl_db;
    j["ds_ns"] = sample.labels.ds_ns;
    j["asa_deg"] = sample.labels.asa_deg;
    j["asd_deg"] = sample.labels.asd_deg;
    json aps = json::array();
    for (int i = 0; i < sample.labels.aps.size(); ++i) aps.push_back(sample.labels.aps[i]);
    j["aps"] = aps;
    return j.dump() + "\n";
}

void absorb(Fnv1a64& hash, const std::string& id, const std::string& tensors,
            const std::string& labels) {
    hash.update(id);
    hash.update("\n");
    hash.update(tensors.data(), tensors.size());
    hash.update(labels.data(), labels.size());
}

json manifest_json(const DatasetManifest& m) {
    json j;
    j["version"] = m.version;
    j["sample_count"] = m.sample_count;
    json samples = json::array();
    for (const auto& [id, area] : m.samples)
        samples.push_back(json{{"id", id}, {"area", area}});
    j["samples"] = samples;
    j["area_counts"] = m.area_counts;
    json palette = json::array();
    for (const auto& rgb : m.palette) palette.push_back(json::array({rgb[0], rgb[1], rgb[2]}));
    j["palette"] = palette;
    j["scales"] = {{"pl_db", m.scale_pl_db},
                   {"ds_ns", m.scale_ds_ns},
                   {"asa_deg", m.scale_asa_deg},
                   {"asd_deg", m.scale_asd_deg}};
    j["distance_mean_m"] = m.distance_mean_m;
    j["distance_std_m"] = m.distance_std_m;
    j["dynamics_masked"] = m.dynamics_masked;
    j["seeds"] = m.seeds;
    j["content_hash"] = m.content_hash_hex;
    return j;
}

DatasetManifest manifest_from_json(const json& j) {
    DatasetManifest m;
    m.version = j.value("version", "");
    if (m.version != DatasetManifest{}.version)
        throw std::runtime_error("dataset: unsupported manifest version \"" + m.version +
                                 "\"");
    m.sample_count = j.at("sample_count").get<int>();
    for (const json& entry : j.at("samples"))
        m.samples.emplace_back(entry.at("id").get<std::string>(),
                               entry.at("area").get<std::string>());
    m.area_counts = j.at("area_counts").get<std::map<std::string, int>>();
    const json& palette = j.at("palette");
    if (!palette.is_array() || palette.size() != m.palette.size())
        throw std::runtime_error("dataset: malformed palette");
    for (std::size_t i = 0; i < m.palette.size(); ++i)
        for (std::size_t ch = 0; ch < 3; ++ch)
            m.palette[i][ch] = palette[i][ch].get<int>();
    m.scale_pl_db = j.at("scales").at("pl_db").get<double>();
    m.scale_ds_ns = j.at("scales").at("ds_ns").get<double>();
    m.scale_asa_deg = j.at("scales").at("asa_deg").get<double>();
    m.scale_asd_deg = j.at("scales").at("asd_deg").get<double>();
    m.distance_mean_m = j.at("distance_mean_m").get<double>();
    m.distance_std_m = j.at("distance_std_m").get<double>();
    m.dynamics_masked = j.at("dynamics_masked").get<bool>();
    m.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    m.content_hash_hex = j.at("content_hash").get<std::string>();

    if (static_cast<int>(m.samples.size()) != m.sample_count)
        throw std::runtime_error("dataset: sample list does not match sample_count");
    int total = 0;
    for (const auto& [area, count] : m.area_counts) total += count;
    if (total != m.sample_count)
        throw std::runtime_error("dataset: area counts do not sum to sample_count");
    return m;
}

Sample sample_from_blobs(const std::string& tensors, const std::string& labels) {
    Sample sample;
    std::istringstream is(tensors, std::ios::binary);
    sample.semantic_in = read_tensor_record(is);
    sample.depth_in = read_tensor_record(is);
    const json j = json::parse(labels);
    sample.snapshot_id = j.at("snapshot_id").get<std::string>();
    sample.area_id = j.at("area_id").get<std::string>();
    sample.tx_geo = {j.at("tx_geo")[0].get<double>(), j.at("tx_geo")[1].get<double>()};
    sample.rx_geo = {j.at("rx_geo")[0].get<double>(), j.at("rx_geo")[1].get<double>()};
    sample.labels.pl_db = j.at("pl_db").get<double>();
    sample.labels.ds_ns = j.at("ds_ns").get<double>();
    sample.labels.asa_deg = j.at("asa_deg").get<double>();
    sample.labels.asd_deg = j.at("asd_deg").get<double>();
    const json& aps = j.at("aps");
    sample.labels.aps.resize(static_cast<Eigen::Index>(aps.size()));
    for (std::size_t i = 0; i < aps.size(); ++i)
        sample.labels.aps[static_cast<Eigen::Index>(i)] = aps[i].get<double>();
    return sample;
}

}  // namespace

void write_dataset(const std::vector<Sample>& samples, DatasetManifest manifest,
                   const std::string& dir, const std::vector<DropEntry>& drops) {
    const fs::path root(dir);
    fs::create_directories(root / "samples");
    fs::create_directories(root / "labels");

    manifest.sample_count = static_cast<int>(samples.size());
    manifest.samples.clear();
    manifest.area_counts.clear();
    Fnv1a64 hash;
    for (const Sample& sample : samples) {
        manifest.samples.emplace_back(sample.snapshot_id, sample.area_id);
        manifest.area_counts[sample.area_id] += 1;
        const std::string tensors = tensors_blob(sample);
        const std::string labels = labels_blob(sample);
        absorb(hash, sample.snapshot_id, tensors, labels);
        write_file(root / "samples" / (sample.snapshot_id + ".tensors"), tensors);
        write_file(root / "labels" / (sample.snapshot_id + ".json"), labels);
    }
    manifest.content_hash_hex = hash.hex();

    std::string drop_text;
    for (const DropEntry& d : drops) drop_text += d.snapshot_id + "\t" + d.rule + "\n";
    write_file(root / "drops.log", drop_text);
    write_file(root / "manifest.json", manifest_json(manifest).dump(2) + "\n");
}

DatasetManifest read_manifest(const std::string& dir) {
    const fs::path root(dir);
    json j;
    try {
        j = json::parse(read_file(root / "manifest.json"));
    } catch (const json::parse_error& e) {
        throw std::runtime_error(std::string("dataset: malformed manifest: ") + e.what());
    }
    return manifest_from_json(j);
}

LoadedDataset read_dataset(const std::string& dir) {
    const fs::path root(dir);
    LoadedDataset out;
    out.manifest = read_manifest(dir);

    Fnv1a64 hash;
    out.samples.reserve(out.manifest.samples.size());
    for (const auto& [id, area] : out.manifest.samples) {
        const std::string tensors = read_file(root / "samples" / (id + ".tensors"));
        const std::string labels = read_file(root / "labels" / (id + ".json"));
        absorb(hash, id, tensors, labels);
        Sample sample = sample_from_blobs(tensors, labels);
        if (sample.snapshot_id != id || sample.area_id != area)
            throw std::runtime_error("dataset: sample " + id +
                                     " disagrees with the manifest");
        out.samples.push_back(std::move(sample));
    }
    if (hash.hex() != out.manifest.content_hash_hex)
        throw std::runtime_error("dataset: content hash mismatch (expected " +
                                 out.manifest.content_hash_hex + ", got " + hash.hex() +
                                 ")");
    return out;
}

DatasetSplit split_by_area(const DatasetManifest& manifest, const std::string& test_area,
                           double val_fraction, std::uint64_t seed) {
    if (val_fraction < 0.0 || val_fraction > 1.0)
        throw std::invalid_argument("split_by_area: val_fraction must be in [0, 1]");
    DatasetSplit split;
    std::vector<std::string> rest;
    for (const auto& [id, area] : manifest.samples)
        (area == test_area ? split.test : rest).push_back(id);
    if (split.test.empty())
        throw std::invalid_argument("split_by_area: no samples in area \"" + test_area +
                                    "\"");

    CounterRng rng(seed, "split");
    for (std::size_t i = rest.size(); i > 1; --i) {
        const auto j =
            static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1));
        std::swap(rest[i - 1], rest[j]);
    }
    const auto n_val = static_cast<std::size_t>(
        std::llround(val_fraction * static_cast<double>(rest.size())));
    split.val.assign(rest.begin(), rest.begin() + static_cast<std::ptrdiff_t>(n_val));
    split.train.assign(rest.begin() + static_cast<std::ptrdiff_t>(n_val), rest.end());
    return split;
}

}  // namespace vcpred
