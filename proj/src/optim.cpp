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

#include "vcpred/optim.hpp"

#include <stdexcept>

namespace vcpred {

Adam::Adam(std::vector<nn::ParamRef<float>> params, AdamConfig cfg, std::vector<ParamGroup> groups)
    : params_(std::move(params)), cfg_(cfg), groups_(std::move(groups)) {
    slot_of_.assign(params_.size(), -1);
    std::vector<int> claimed(params_.size(), 0);
    for (const ParamGroup& g : groups_)
        for (const std::size_t idx : g.indices) {
            if (idx >= params_.size()) throw std::invalid_argument("Adam: group index out of range");
            const nn::ParamRef<float>& r = params_[idx];
            if (!r.trainable || r.buffer)
                throw std::invalid_argument("Adam: group contains a non-trainable parameter: " + r.name);
            ++claimed[idx];
        }
    for (std::size_t i = 0; i < params_.size(); ++i) {
        const nn::ParamRef<float>& r = params_[i];
        if (!r.trainable || r.buffer) {
            if (claimed[i] != 0)
                throw std::invalid_argument("Adam: non-trainable parameter in a group: " + r.name);
            continue;
        }
        if (claimed[i] != 1)
            throw std::invalid_argument("Adam: parameter must belong to exactly one group: " + r.name);
        slot_of_[i] = static_cast<std::ptrdiff_t>(slots_.size());
        Slot slot;
        slot.name = r.name;
        slot.m = Eigen::MatrixXf::Zero(r.value->rows(), r.value->cols());
        slot.v = Eigen::MatrixXf::Zero(r.value->rows(), r.value->cols());
        slots_.push_back(std::move(slot));
    }
}

double Adam::step(double max_norm) {
    const double norm = nn::clip_grad_norm(params_, max_norm);
    ++t_;
    const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (const ParamGroup& g : groups_) {
        const float lr = static_cast<float>(g.effective_lr());
        const float wd = static_cast<float>(g.weight_decay);
        for (const std::size_t idx : g.indices) {
            const nn::ParamRef<float>& r = params_[idx];
            Slot& s = slots_[static_cast<std::size_t>(slot_of_[idx])];
            Eigen::MatrixXf grad = *r.grad;
            if (wd != 0.0f && !cfg_.decoupled_weight_decay) grad += wd * *r.value;
            s.m = static_cast<float>(cfg_.beta1) * s.m + static_cast<float>(1.0 - cfg_.beta1) * grad;
            s.v = static_cast<float>(cfg_.beta2) * s.v +
                  static_cast<float>(1.0 - cfg_.beta2) * grad.cwiseProduct(grad);
            if (wd != 0.0f && cfg_.decoupled_weight_decay) *r.value *= (1.0f - lr * wd);
            const auto m_hat = s.m.array() / static_cast<float>(bc1);
            const auto v_hat = s.v.array() / static_cast<float>(bc2);
            r.value->array() -= lr * m_hat / (v_hat.sqrt() + static_cast<float>(cfg_.eps));
        }
    }
    return norm;
}

void Adam::zero_grad() { nn::zero_grads(params_); }

void Adam::set_scale(double scale) {
    for (ParamGroup& g : groups_) g.scale = scale;
}

void Adam::decay_base_lr(double factor) {
    for (ParamGroup& g : groups_) g.base_lr *= factor;
}

std::vector<ParamGroup> Adam::single_group(const std::vector<nn::ParamRef<float>>& params,
                                           double lr, double weight_decay) {
    ParamGroup g;
    g.name = "all";
    g.base_lr = lr;
    g.weight_decay = weight_decay;
    for (std::size_t i = 0; i < params.size(); ++i)
        if (params[i].trainable && !params[i].buffer) g.indices.push_back(i);
    return {g};
}

std::vector<ParamGroup> Adam::groups_by_prefix(const std::vector<nn::ParamRef<float>>& params,
                                               const std::string& prefix, double lr_prefix,
                                               double lr_rest, double weight_decay) {
    ParamGroup matched, rest;
    matched.name = prefix;
    matched.base_lr = lr_prefix;
    matched.weight_decay = weight_decay;
    rest.name = "rest";
    rest.base_lr = lr_rest;
    rest.weight_decay = weight_decay;
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (!params[i].trainable || params[i].buffer) continue;
        (params[i].name.rfind(prefix, 0) == 0 ? matched : rest).indices.push_back(i);
    }
    std::vector<ParamGroup> out;
    if (!matched.indices.empty()) out.push_back(std::move(matched));
    if (!rest.indices.empty()) out.push_back(std::move(rest));
    return out;
}

}  // namespace vcpred
