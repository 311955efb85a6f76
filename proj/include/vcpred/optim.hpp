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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "vcpred/nn.hpp"

namespace vcpred {

struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    /// false: classic moment estimation with the decay inside the gradient;
    /// true: decoupled weight decay applied directly to the parameters.
    bool decoupled_weight_decay = false;
};

/// One learning-rate group over a subset of the trainable parameters.
/// The effective rate is base_lr * scale; schedulers move either knob.
struct ParamGroup {
    std::string name;
    double base_lr = 1e-3;
    double weight_decay = 0.0;
    double scale = 1.0;
    std::vector<std::size_t> indices;

    double effective_lr() const { return base_lr * scale; }
};

/// Adaptive-moment optimizer over ParamRef views. Construction pins the
/// parameter list; every trainable parameter must belong to exactly one
/// group. step() optionally clips the global gradient norm first.
class Adam {
  public:
    struct Slot {
        std::string name;
        Eigen::MatrixXf m, v;
    };

    Adam(std::vector<nn::ParamRef<float>> params, AdamConfig cfg, std::vector<ParamGroup> groups);

    /// Clip to max_norm (0 disables), then apply one update. Returns the
    /// pre-clip global gradient norm.
    double step(double max_norm);
    void zero_grad();

    /// Cosine-style schedulers scale every group around its base rate.
    void set_scale(double scale);
    /// Plateau-style schedulers shrink the base rates permanently.
    void decay_base_lr(double factor);

    const std::vector<ParamGroup>& groups() const { return groups_; }
    std::vector<Slot>& slots() { return slots_; }
    std::uint64_t step_count() const { return t_; }
    void set_step_count(std::uint64_t t) { t_ = t; }

    static std::vector<ParamGroup> single_group(const std::vector<nn::ParamRef<float>>& params,
                                                double lr, double weight_decay);
    /// Two groups: parameters whose name starts with `prefix` vs the rest.
    static std::vector<ParamGroup> groups_by_prefix(const std::vector<nn::ParamRef<float>>& params,
                                                    const std::string& prefix, double lr_prefix,
                                                    double lr_rest, double weight_decay);

  private:
    std::vector<nn::ParamRef<float>> params_;
    AdamConfig cfg_;
    std::vector<ParamGroup> groups_;
    std::vector<Slot> slots_;               // one per trainable param, in params_ order
    std::vector<std::ptrdiff_t> slot_of_;   // params_ index -> slot index or -1
    std::uint64_t t_ = 0;
};

/// Halves (by `factor`) on `patience` consecutive epochs without strict
/// improvement, then re-arms. observe() returns true when a reduction fires.
class PlateauScheduler {
  public:
    explicit PlateauScheduler(double factor = 0.5, int patience = 5)
        : factor_(factor), patience_(patience) {}

    bool observe(double val) {
        if (!has_best_ || val < best_) {
            best_ = val;
            has_best_ = true;
            stale_ = 0;
            return false;
        }
        if (++stale_ >= patience_) {
            stale_ = 0;
            return true;
        }
        return false;
    }

    double factor() const { return factor_; }

  private:
    double factor_;
    int patience_;
    double best_ = 0.0;
    bool has_best_ = false;
    int stale_ = 0;
};

/// Cosine annealing with warm restarts: periods t0, t0*mult, t0*mult^2, ...
/// factor(epoch) is the multiplier in (0, 1], equal to 1 at every restart.
class CosineWarmRestarts {
  public:
    explicit CosineWarmRestarts(int t0 = 10, int mult = 2) : t0_(t0), mult_(mult) {}

    double factor(int epoch) const {
        int t = epoch;
        int period = t0_;
        while (t >= period) {
            t -= period;
            period *= mult_;
        }
        return 0.5 * (1.0 + std::cos(std::numbers::pi * static_cast<double>(t) / period));
    }

  private:
    int t0_;
    int mult_;
};

/// Strict-improvement early stopping; observe() returns true once `patience`
/// consecutive epochs fail to improve on the best value.
class EarlyStopper {
  public:
    explicit EarlyStopper(int patience = 20) : patience_(patience) {}

    bool observe(double val) {
        ++epoch_;
        if (!has_best_ || val < best_) {
            best_ = val;
            best_epoch_ = epoch_;
            has_best_ = true;
            stale_ = 0;
            return false;
        }
        return ++stale_ >= patience_;
    }

    bool improved_last() const { return stale_ == 0 && has_best_; }
    double best() const { return best_; }
    int best_epoch() const { return best_epoch_; }

  private:
    int patience_;
    double best_ = 0.0;
    bool has_best_ = false;
    int stale_ = 0;
    int epoch_ = 0;
    int best_epoch_ = 0;
};

}  // namespace vcpred
