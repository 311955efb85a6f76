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

#include <memory>
#include <string>
#include <vector>

#include "vcpred/dataset.hpp"
#include "vcpred/nn.hpp"

namespace vcpred {

enum class Backbone { residual34, compact };
enum class Target { pl, ds, asa, asd, aps };

std::string to_string(Backbone b);
std::string to_string(Target t);
Backbone backbone_from_string(const std::string& s);
Target target_from_string(const std::string& s);
inline bool is_scalar_target(Target t) { return t != Target::aps; }

struct Modalities {
    bool semantic = true;
    bool depth = true;
    bool location = true;

    int count() const { return (semantic ? 1 : 0) + (depth ? 1 : 0) + (location ? 1 : 0); }
    std::string to_string() const;
    static Modalities from_string(const std::string& list);
    bool operator==(const Modalities&) const = default;
};

/// Structural hyperparameters of one predictor. distance mean/std come from
/// the training manifest and standardize the location input.
struct ModelConfig {
    Backbone backbone = Backbone::residual34;
    bool freeze_semantic = true;
    float semantic_dropout = 0.3f;
    float aps_dropout = 0.1f;
    int feature_width = 256;
    Modalities modalities{};
    Target target = Target::pl;
    double distance_mean_m = 0.0;
    double distance_std_m = 1.0;
    std::uint64_t seed = 1;
};

void validate_model_config(const ModelConfig& cfg);
std::string model_config_to_json(const ModelConfig& cfg);
ModelConfig model_config_from_json(const std::string& text);

/// One forward batch in model layout: feature maps hold a column block per
/// sample; distances are raw meters (standardization happens in the branch).
struct ModelBatch {
    int n = 0;
    nn::Fmap<float> semantic;
    nn::Fmap<float> depth;
    Eigen::MatrixXd distance_m;
};

ModelBatch make_batch(const std::vector<const Sample*>& samples);

/// Backbone of the semantic branch: maps 3x224x224 to a feature column.
class SemanticBackbone {
  public:
    virtual ~SemanticBackbone() = default;
    virtual Eigen::MatrixXf forward(const nn::Fmap<float>& x, bool train, bool cache) = 0;
    virtual void backward(const Eigen::MatrixXf& dfeat) = 0;
    virtual void collect(std::vector<nn::ParamRef<float>>& out, const std::string& prefix) = 0;
    virtual long long macs_per_sample() const = 0;
    virtual int out_features() const = 0;
};

/// 34-layer residual backbone (stem + stages of 3/4/6/3 basic blocks,
/// channels 64/128/256/512, global average pooling to 512). When frozen, the
/// stem and the first two stages neither cache activations nor receive
/// gradients, and their normalization layers always use running statistics.
class ResNet34Body final : public SemanticBackbone {
  public:
    ResNet34Body(std::uint64_t seed, bool freeze_early);
    Eigen::MatrixXf forward(const nn::Fmap<float>& x, bool train, bool cache) override;
    void backward(const Eigen::MatrixXf& dfeat) override;
    void collect(std::vector<nn::ParamRef<float>>& out, const std::string& prefix) override;
    long long macs_per_sample() const override;
    int out_features() const override { return 512; }

  private:
    bool freeze_early_;
    nn::Conv2d<float> stem_conv_;
    nn::BatchNorm2d<float> stem_bn_;
    nn::ReLU<float> stem_relu_;
    nn::MaxPool2d<float> stem_pool_;
    std::vector<nn::BasicBlock<float>> layer1_, layer2_, layer3_, layer4_;
    nn::GlobalAvgPool<float> gap_;
};

/// Six 3x3 convolutions (stride 2, channels 16/32/48/64/96/128), each with
/// batch normalization and a rectifier; the 4x4 tail is height-pooled and
/// flattened to 128*4 = 512 features.
class CompactBody final : public SemanticBackbone {
  public:
    explicit CompactBody(std::uint64_t seed);
    Eigen::MatrixXf forward(const nn::Fmap<float>& x, bool train, bool cache) override;
    void backward(const Eigen::MatrixXf& dfeat) override;
    void collect(std::vector<nn::ParamRef<float>>& out, const std::string& prefix) override;
    long long macs_per_sample() const override;
    int out_features() const override { return 512; }

  private:
    std::vector<nn::Conv2d<float>> convs_;
    std::vector<nn::BatchNorm2d<float>> bns_;
    std::vector<nn::ReLU<float>> relus_;
    nn::HeightPoolFlatten<float> pool_;
};

std::unique_ptr<SemanticBackbone> make_backbone(Backbone id, std::uint64_t seed, bool freeze_early);

/// The three-branch encoder with SE-style gated fusion and per-target heads.
/// All feature vectors are columns; a batch is a width x n matrix.
class PredictorNet {
  public:
    explicit PredictorNet(const ModelConfig& cfg);

    /// Scalar targets: 1 x n. APS target: 360 x n.
    Eigen::MatrixXf forward(const ModelBatch& batch, bool train);
    void backward(const Eigen::MatrixXf& dpred);

    Eigen::MatrixXf semantic_features(const ModelBatch& batch, bool train);
    Eigen::MatrixXf depth_features(const ModelBatch& batch, bool train);
    Eigen::MatrixXf location_features(const ModelBatch& batch);

    /// Gated fusion on an already concatenated feature batch; returns the
    /// gated vector and the per-sample gate in (0,1).
    std::pair<Eigen::MatrixXf, Eigen::MatrixXf> se_fuse(const Eigen::MatrixXf& concat, bool train);

    const Eigen::MatrixXf& last_gate() const { return gate_; }
    const ModelConfig& config() const { return cfg_; }
    int fused_width() const { return cfg_.feature_width * cfg_.modalities.count(); }

    std::vector<nn::ParamRef<float>> params();

    /// Per-sample multiply-accumulate count of the last forward pass over
    /// convolutional and fully-connected layers (normalizations and
    /// activations excluded).
    long long macs_per_sample() const;

  private:
    Eigen::MatrixXf head_forward(const Eigen::MatrixXf& fused, bool train);
    Eigen::MatrixXf head_backward(const Eigen::MatrixXf& dpred);

    ModelConfig cfg_;

    std::unique_ptr<SemanticBackbone> backbone_;
    std::unique_ptr<nn::Dense<float>> sem_fc_;
    nn::ReLU<float> sem_relu_;
    std::unique_ptr<nn::Dropout<float>> sem_drop_;

    std::vector<nn::Conv2d<float>> depth_convs_;
    std::vector<nn::BatchNorm2d<float>> depth_bns_;
    std::vector<nn::ReLU<float>> depth_relus_;
    nn::GlobalAvgPool<float> depth_gap_;
    std::unique_ptr<nn::Dense<float>> depth_fc_;

    std::unique_ptr<nn::Dense<float>> loc_fc1_, loc_fc2_;
    nn::ReLU<float> loc_relu_;

    std::unique_ptr<nn::Dense<float>> gate_fc1_, gate_fc2_;
    nn::ReLU<float> gate_relu_;
    nn::Sigmoid<float> gate_sig_;
    Eigen::MatrixXf concat_, gate_;

    std::unique_ptr<nn::Dense<float>> s_fc1_, s_fc2_, s_fc3_;
    nn::ReLU<float> s_relu1_, s_relu2_;
    nn::Softplus<float> s_softplus_;

    std::unique_ptr<nn::Dense<float>> a_fc1_, a_fc2_;
    std::unique_ptr<nn::LayerNorm<float>> a_ln_;
    nn::ReLU<float> a_relu_;
    std::unique_ptr<nn::Dropout<float>> a_drop_;
    std::unique_ptr<nn::CircularConv1d<float>> a_circ_;
    nn::Sigmoid<float> a_sig_;
};

struct LatencyReport {
    double mean_ms = 0.0;
    double samples_per_s = 0.0;
    int batch = 0;
    int repetitions = 0;
    std::string hardware;
};

nn::ParamCount<float> count_model_params(PredictorNet& net);

/// 2 x multiply-accumulates per sample over conv and fully-connected layers,
/// measured on a dry-run forward at the 224x224 input contract.
long long estimate_flops(const ModelConfig& cfg);

/// Wall-clock evaluation-mode forward timing after `warmup` throwaway runs.
LatencyReport measure_latency(PredictorNet& net, int batch, int repetitions, int warmup = 5);

std::string cpu_model_string();

}  // namespace vcpred
