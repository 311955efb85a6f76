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
#include <vector>

#include "vcpred/train.hpp"

namespace vcpred {

/// Shared experiment inputs. `train` and `model` are the per-arm templates;
/// each protocol overrides target, seed, modalities or backbone as needed.
struct ExperimentContext {
    std::string data_dir;
    std::string masked_data_dir;  // paired corpus for the removal study
    std::string out_dir;
    TrainConfig train = default_train_config(Target::pl);
    ModelConfig model;
    std::vector<std::uint64_t> seeds{1};
    std::vector<Target> targets{Target::pl, Target::ds, Target::asa, Target::asd};
    std::vector<Backbone> backbones{Backbone::residual34, Backbone::compact};
    int overlay_count = 6;
    int latency_batch = 2;
    int latency_reps = 20;
};

/// Each protocol trains its arms under <out>/runs/<arm>/, records the arm
/// list in <out>/exp.json, regenerates report.{json,csv} and returns the
/// experiment directory.

/// Retrains {sem+depth+gps, sem+depth, sem+gps, sem} per target and seed.
std::string run_modality_ablation(const ExperimentContext& ctx);

/// Paired raw/masked training with identical seeds and configs; emits the
/// per-epoch curve comparison.
std::string run_dynamic_removal(const ExperimentContext& ctx);

/// Trains each backbone and attaches parameter, FLOP and latency columns.
std::string run_backbone_sweep(const ExperimentContext& ctx);

/// Trains the APS head, evaluates the held-out area and plots the cosine
/// histogram plus target/prediction overlays.
std::string run_aps_eval(const ExperimentContext& ctx);

/// Rebuilds report.json / report.csv purely from the stored experiment
/// directory; regeneration is byte-stable. format: "json", "csv" or "both".
void write_report(const std::string& exp_dir, const std::string& format = "both");

}  // namespace vcpred
