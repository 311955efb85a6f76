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

#include <iosfwd>
#include <string>
#include <vector>

#include "vcpred/channel_stats.hpp"

namespace vcpred {

/// Line-delimited MPC snapshot interchange (see FORMATS.md). One JSON object
/// per line: {"snapshot_id": "...", "mpcs": [[amplitude, phase_rad, delay_ns,
/// aod_deg, aoa_deg], ...]}.
void write_mpc_jsonl(std::ostream& os, const std::vector<MpcSet>& sets);
void write_mpc_jsonl_file(const std::string& path, const std::vector<MpcSet>& sets);

/// Parses the interchange format; throws std::runtime_error naming the bad
/// line on malformed input.
std::vector<MpcSet> read_mpc_jsonl(std::istream& is);
std::vector<MpcSet> read_mpc_jsonl_file(const std::string& path);

}  // namespace vcpred
