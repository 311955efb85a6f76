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

#include <string>

#include "vcpred/model.hpp"
#include "vcpred/optim.hpp"

namespace vcpred {

inline constexpr std::uint32_t kCheckpointMagic = 0x43504356u;  // "VCPC" little-endian

/// Everything a run needs to resume or evaluate: the config echoes travel as
/// JSON, the epoch counter and the best validation value as plain fields.
struct CheckpointMeta {
    std::string model_config_json;
    std::string train_config_json = "{}";
    int epoch = 0;
    double best_val = 0.0;
};

/// Writes the versioned container: magic, version, meta JSON, every named
/// model tensor (parameters and running statistics), and optionally the
/// optimizer moments with the step counter. Bit layout in FORMATS.md.
void save_checkpoint(const std::string& path, PredictorNet& net, const Adam* optimizer,
                     const CheckpointMeta& meta);

/// Restores tensors by name into an already constructed net (shape and order
/// must match). Passing an optimizer requires stored optimizer state.
CheckpointMeta load_checkpoint(const std::string& path, PredictorNet& net, Adam* optimizer);

/// Reads only the meta block, for constructing the net before a full load.
CheckpointMeta peek_checkpoint(const std::string& path);

}  // namespace vcpred
