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

#include "vcpred/mpc_io.hpp"

#include <fstream>
#include <json.hpp>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace vcpred {

void write_mpc_jsonl(std::ostream& os, const std::vector<MpcSet>& sets) {
    for (const MpcSet& set : sets) {
        nlohmann::json line;
        line["snapshot_id"] = set.snapshot_id;
        auto& arr = line["mpcs"] = nlohmann::json::array();
        for (const Mpc& c : set.components)
            arr.push_back({c.amplitude, c.phase_rad, c.delay_ns, c.aod_deg, c.aoa_deg});
        os << line.dump() << '\n';
    }
}

void write_mpc_jsonl_file(const std::string& path, const std::vector<MpcSet>& sets) {
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("write_mpc_jsonl_file: cannot open " + path);
    write_mpc_jsonl(os, sets);
    if (!os.good())
        throw std::runtime_error("write_mpc_jsonl_file: write failed for " + path);
}

std::vector<MpcSet> read_mpc_jsonl(std::istream& is) {
    std::vector<MpcSet> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty())
            continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("read_mpc_jsonl: line " + std::to_string(lineno) + ": " + e.what());
        }
        if (!j.contains("snapshot_id") || !j.contains("mpcs") || !j["mpcs"].is_array())
            throw std::runtime_error("read_mpc_jsonl: line " + std::to_string(lineno) +
                                     ": missing snapshot_id or mpcs");
        MpcSet set;
        set.snapshot_id = j["snapshot_id"].get<std::string>();
        for (const auto& rec : j["mpcs"]) {
            if (!rec.is_array() || rec.size() != 5)
                throw std::runtime_error("read_mpc_jsonl: line " + std::to_string(lineno) +
                                         ": each MPC must be a 5-element array");
            set.components.push_back(Mpc{rec[0].get<double>(), rec[1].get<double>(), rec[2].get<double>(),
                                         rec[3].get<double>(), rec[4].get<double>()});
        }
        out.push_back(std::move(set));
    }
    return out;
}

std::vector<MpcSet> read_mpc_jsonl_file(const std::string& path) {
    std::ifstream is(path);
    if (!is)
        throw std::runtime_error("read_mpc_jsonl_file: cannot open " + path);
    return read_mpc_jsonl(is);
}

}  // namespace vcpred
