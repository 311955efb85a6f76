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

#include "vcpred/dataset.hpp"
#include "vcpred/losses.hpp"
#include "vcpred/model.hpp"

namespace vcpred {

/// Synthetic corpus generation: `areas` scenes, `per_area` trajectory
/// snapshots each, synchronized, validity-filtered, optionally with dynamic
/// scatterers masked out of the panoramas. Deterministic in `seed`.
struct GenConfig {
    std::uint64_t seed = 1;
    int areas = 4;
    int per_area = 250;
    bool masked = false;
};

DatasetManifest generate_dataset(const GenConfig& cfg, const std::string& dir);

/// Per-target training defaults; overrides land verbatim in the run log.
struct TrainConfig {
    Target target = Target::pl;
    int batch_size = 16;
    int max_epochs = 100;
    bool decoupled_weight_decay = false;  // true selects the decoupled update
    double lr = 1e-3;                     // single rate for scalar targets
    double lr_semantic = 3.5e-5;          // module-wise rates for the APS target
    double lr_rest = 3.5e-4;
    double weight_decay = 1e-6;
    double clip_norm = 1.0;
    int early_stop_patience = 20;
    double plateau_factor = 0.5;  // scalar targets: multiply on validation plateau
    int plateau_patience = 5;
    int cosine_period = 10;  // APS target: warm restarts at 10, 30, 70, ...
    int cosine_mult = 2;
    double val_fraction = 0.2;
    std::string test_area = "area3";
    std::uint64_t seed = 1;
};

TrainConfig default_train_config(Target target);
void validate_train_config(const TrainConfig& cfg);
std::string train_config_to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const std::string& text);

struct EpochPoint {
    int epoch = 0;  // 1-based
    double train_loss = 0.0;
    double val_loss = 0.0;
    double lr_scale = 1.0;  // cumulative plateau factor or cosine multiplier
};

struct RunSummary {
    std::string run_dir;
    Target target = Target::pl;
    int epochs_run = 0;
    int best_epoch = 0;
    double best_val = 0.0;
    bool early_stopped = false;
    std::vector<EpochPoint> curve;
};

/// Trains one model into `run_dir`: config.echo, train.log (one JSON record
/// per step), curves.csv (one row per epoch), best-validation `checkpoint`.
/// With val_fraction = 0 the schedulers and the stopper follow the training
/// loss. Throws on non-finite loss, naming epoch and step.
RunSummary train(const std::string& data_dir, const TrainConfig& tcfg, ModelConfig mcfg,
                 const std::string& run_dir);

struct EvalRecord {
    Target target = Target::pl;
    std::string split;
    int n = 0;
    /// Scalar targets report physical units (dB, ns, deg); the APS target
    /// reports normalized spectrum units plus the cosine distribution.
    double rmse = 0.0;
    double mae = 0.0;
    CosineStats cosine;
    std::string predictions_path;
};

std::string eval_record_to_json(const EvalRecord& rec);
EvalRecord eval_record_from_json(const std::string& text);

/// Pure metric computation: rows of `labels` and `preds` are samples
/// (1 column for scalars in physical units, 360 for the APS target).
EvalRecord compute_metrics(Target target, const Eigen::MatrixXd& labels,
                           const Eigen::MatrixXd& preds);

/// Loads the best checkpoint of `run_dir`, predicts the requested split of
/// `data_dir`, dumps predictions.csv and eval_<split>.json into the run
/// directory and returns the metrics.
EvalRecord evaluate(const std::string& run_dir, const std::string& data_dir,
                    const std::string& split);

}  // namespace vcpred
