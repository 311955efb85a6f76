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

#include "vcpred/model.hpp"

#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "vcpred/geodesy.hpp"

namespace vcpred {

namespace {

constexpr int kImageSide = 224;

void check_image_input(const nn::Fmap<float>& x, int n, const char* branch) {
    if (x.n != n || x.c != 3 || x.h != kImageSide || x.w != kImageSide)
        throw std::invalid_argument(std::string(branch) + ": expected 3x224x224 inputs for every sample");
}

}  // namespace

std::string to_string(Backbone b) {
    return b == Backbone::residual34 ? "residual-34" : "compact-conv";
}

std::string to_string(Target t) {
    switch (t) {
        case Target::pl: return "pl";
        case Target::ds: return "ds";
        case Target::asa: return "asa";
        case Target::asd: return "asd";
        case Target::aps: return "aps";
    }
    return "pl";
}

Backbone backbone_from_string(const std::string& s) {
    if (s == "residual-34") return Backbone::residual34;
    if (s == "compact-conv") return Backbone::compact;
    throw std::invalid_argument("unknown backbone id: " + s);
}

Target target_from_string(const std::string& s) {
    if (s == "pl") return Target::pl;
    if (s == "ds") return Target::ds;
    if (s == "asa") return Target::asa;
    if (s == "asd") return Target::asd;
    if (s == "aps") return Target::aps;
    throw std::invalid_argument("unknown target: " + s);
}

std::string Modalities::to_string() const {
    std::string out;
    const auto add = [&out](const char* name) {
        if (!out.empty()) out += "+";
        out += name;
    };
    if (semantic) add("semantic");
    if (depth) add("depth");
    if (location) add("location");
    return out.empty() ? "none" : out;
}

Modalities Modalities::from_string(const std::string& list) {
    Modalities m{false, false, false};
    std::string token;
    std::stringstream ss(list);
    while (std::getline(ss, token, '+')) {
        std::string inner;
        std::stringstream comma(token);
        while (std::getline(comma, inner, ',')) {
            if (inner == "semantic") m.semantic = true;
            else if (inner == "depth") m.depth = true;
            else if (inner == "location" || inner == "gps") m.location = true;
            else if (!inner.empty()) throw std::invalid_argument("unknown modality: " + inner);
        }
    }
    return m;
}

void validate_model_config(const ModelConfig& cfg) {
    if (cfg.modalities.count() < 1)
        throw std::invalid_argument("model config: at least one modality must be active");
    if (cfg.feature_width <= 0) throw std::invalid_argument("model config: feature width must be positive");
    if (cfg.semantic_dropout < 0.0f || cfg.semantic_dropout >= 1.0f ||
        cfg.aps_dropout < 0.0f || cfg.aps_dropout >= 1.0f)
        throw std::invalid_argument("model config: dropout rates must lie in [0,1)");
    if (!(cfg.distance_std_m > 0.0))
        throw std::invalid_argument("model config: distance std must be positive");
}

std::string model_config_to_json(const ModelConfig& cfg) {
    nlohmann::json j;
    j["backbone"] = to_string(cfg.backbone);
    j["freeze_semantic"] = cfg.freeze_semantic;
    j["semantic_dropout"] = cfg.semantic_dropout;
    j["aps_dropout"] = cfg.aps_dropout;
    j["feature_width"] = cfg.feature_width;
    j["modalities"] = cfg.modalities.to_string();
    j["target"] = to_string(cfg.target);
    j["distance_mean_m"] = cfg.distance_mean_m;
    j["distance_std_m"] = cfg.distance_std_m;
    j["seed"] = cfg.seed;
    return j.dump();
}

ModelConfig model_config_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error&) {
        throw std::runtime_error("model config is not valid JSON");
    }
    ModelConfig cfg;
    cfg.backbone = backbone_from_string(j.value("backbone", to_string(cfg.backbone)));
    cfg.freeze_semantic = j.value("freeze_semantic", cfg.freeze_semantic);
    cfg.semantic_dropout = j.value("semantic_dropout", cfg.semantic_dropout);
    cfg.aps_dropout = j.value("aps_dropout", cfg.aps_dropout);
    cfg.feature_width = j.value("feature_width", cfg.feature_width);
    cfg.modalities = Modalities::from_string(j.value("modalities", cfg.modalities.to_string()));
    cfg.target = target_from_string(j.value("target", to_string(cfg.target)));
    cfg.distance_mean_m = j.value("distance_mean_m", cfg.distance_mean_m);
    cfg.distance_std_m = j.value("distance_std_m", cfg.distance_std_m);
    cfg.seed = j.value("seed", cfg.seed);
    validate_model_config(cfg);
    return cfg;
}

ModelBatch make_batch(const std::vector<const Sample*>& samples) {
    if (samples.empty()) throw std::invalid_argument("make_batch: empty sample list");
    const int n = static_cast<int>(samples.size());
    ModelBatch batch;
    batch.n = n;
    batch.semantic = nn::Fmap<float>::zeros(n, 3, kImageSide, kImageSide);
    batch.depth = nn::Fmap<float>::zeros(n, 3, kImageSide, kImageSide);
    batch.distance_m.resize(1, n);
    for (int i = 0; i < n; ++i) {
        const Sample& s = *samples[i];
        if (s.semantic_in.rank != 3 || s.semantic_in.dims[0] != 3 ||
            s.semantic_in.dims[1] != kImageSide || s.semantic_in.dims[2] != kImageSide ||
            !s.semantic_in.same_shape(s.depth_in))
            throw std::invalid_argument("make_batch: sample tensors must be 3x224x224");
        for (int c = 0; c < 3; ++c)
            for (int y = 0; y < kImageSide; ++y)
                for (int x = 0; x < kImageSide; ++x) {
                    const Eigen::Index col =
                        static_cast<Eigen::Index>(i) * kImageSide * kImageSide +
                        static_cast<Eigen::Index>(y) * kImageSide + x;
                    const Eigen::Index flat =
                        (static_cast<Eigen::Index>(c) * kImageSide + y) * kImageSide + x;
                    batch.semantic.m(c, col) = s.semantic_in.data[flat];
                    batch.depth.m(c, col) = s.depth_in.data[flat];
                }
        batch.distance_m(0, i) = haversine_m(s.tx_geo, s.rx_geo);
    }
    return batch;
}

// --- ResNet34Body -----------------------------------------------------------

ResNet34Body::ResNet34Body(std::uint64_t seed, bool freeze_early)
    : freeze_early_(freeze_early), stem_conv_("stem.conv", 3, 64, 7, 2, 3, seed),
      stem_bn_("stem.bn", 64), stem_pool_(3, 2, 1) {
    const auto stage = [seed](std::vector<nn::BasicBlock<float>>& layer, const std::string& name,
                              int c_in, int c_out, int blocks) {
        layer.reserve(blocks);
        for (int i = 0; i < blocks; ++i)
            layer.emplace_back(name + "." + std::to_string(i), i == 0 ? c_in : c_out, c_out,
                               i == 0 && c_in != c_out ? 2 : 1, seed);
    };
    stage(layer1_, "layer1", 64, 64, 3);
    stage(layer2_, "layer2", 64, 128, 4);
    stage(layer3_, "layer3", 128, 256, 6);
    stage(layer4_, "layer4", 256, 512, 3);
    if (freeze_early_) {
        stem_bn_.set_frozen(true);
        for (auto& b : layer1_) b.set_frozen(true);
        for (auto& b : layer2_) b.set_frozen(true);
    }
}

Eigen::MatrixXf ResNet34Body::forward(const nn::Fmap<float>& x, bool train, bool cache) {
    const bool cache_early = cache && !freeze_early_;
    nn::Fmap<float> h = stem_conv_.forward(x, cache_early);
    h = stem_bn_.forward(h, train, cache_early);
    h = stem_relu_.forward(h, cache_early);
    h = stem_pool_.forward(h, cache_early);
    for (auto& b : layer1_) h = b.forward(h, train, cache_early);
    for (auto& b : layer2_) h = b.forward(h, train, cache_early);
    for (auto& b : layer3_) h = b.forward(h, train, cache);
    for (auto& b : layer4_) h = b.forward(h, train, cache);
    return gap_.forward(h);
}

void ResNet34Body::backward(const Eigen::MatrixXf& dfeat) {
    nn::Fmap<float> d = gap_.backward(dfeat);
    for (auto it = layer4_.rbegin(); it != layer4_.rend(); ++it) d = it->backward(d);
    for (auto it = layer3_.rbegin(); it != layer3_.rend(); ++it) d = it->backward(d);
    if (freeze_early_) return;  // nothing below needs gradients
    for (auto it = layer2_.rbegin(); it != layer2_.rend(); ++it) d = it->backward(d);
    for (auto it = layer1_.rbegin(); it != layer1_.rend(); ++it) d = it->backward(d);
    d = stem_pool_.backward(d);
    d = stem_relu_.backward(d);
    d = stem_bn_.backward(d);
    stem_conv_.backward(d);
}

void ResNet34Body::collect(std::vector<nn::ParamRef<float>>& out, const std::string& prefix) {
    stem_conv_.collect(out, prefix, !freeze_early_);
    stem_bn_.collect(out, prefix, !freeze_early_);
    for (auto& b : layer1_) b.collect(out, prefix);
    for (auto& b : layer2_) b.collect(out, prefix);
    for (auto& b : layer3_) b.collect(out, prefix);
    for (auto& b : layer4_) b.collect(out, prefix);
}

long long ResNet34Body::macs_per_sample() const {
    long long acc = stem_conv_.macs_per_sample();
    for (const auto& b : layer1_) acc += b.macs_per_sample();
    for (const auto& b : layer2_) acc += b.macs_per_sample();
    for (const auto& b : layer3_) acc += b.macs_per_sample();
    for (const auto& b : layer4_) acc += b.macs_per_sample();
    return acc;
}

// --- CompactBody ------------------------------------------------------------

CompactBody::CompactBody(std::uint64_t seed) {
    const int channels[] = {16, 32, 48, 64, 96, 128};
    int c_in = 3;
    for (int i = 0; i < 6; ++i) {
        const std::string idx = std::to_string(i + 1);
        convs_.emplace_back("conv" + idx, c_in, channels[i], 3, 2, 1, seed);
        bns_.emplace_back("bn" + idx, channels[i]);
        relus_.emplace_back();
        c_in = channels[i];
    }
}

Eigen::MatrixXf CompactBody::forward(const nn::Fmap<float>& x, bool train, bool cache) {
    nn::Fmap<float> h = x;
    for (std::size_t i = 0; i < convs_.size(); ++i) {
        h = convs_[i].forward(h, cache);
        h = bns_[i].forward(h, train, cache);
        h = relus_[i].forward(h, cache);
    }
    return pool_.forward(h);
}

void CompactBody::backward(const Eigen::MatrixXf& dfeat) {
    nn::Fmap<float> d = pool_.backward(dfeat);
    for (std::size_t i = convs_.size(); i-- > 0;) {
        d = relus_[i].backward(d);
        d = bns_[i].backward(d);
        d = convs_[i].backward(d);
    }
}

void CompactBody::collect(std::vector<nn::ParamRef<float>>& out, const std::string& prefix) {
    for (std::size_t i = 0; i < convs_.size(); ++i) {
        convs_[i].collect(out, prefix, true);
        bns_[i].collect(out, prefix, true);
    }
}

long long CompactBody::macs_per_sample() const {
    long long acc = 0;
    for (const auto& c : convs_) acc += c.macs_per_sample();
    return acc;
}

std::unique_ptr<SemanticBackbone> make_backbone(Backbone id, std::uint64_t seed, bool freeze_early) {
    if (id == Backbone::residual34) return std::make_unique<ResNet34Body>(seed, freeze_early);
    return std::make_unique<CompactBody>(seed);
}

// --- PredictorNet -----------------------------------------------------------

PredictorNet::PredictorNet(const ModelConfig& cfg) : cfg_(cfg) {
    validate_model_config(cfg_);
    const int width = cfg_.feature_width;
    if (cfg_.modalities.semantic) {
        backbone_ = make_backbone(cfg_.backbone, cfg_.seed, cfg_.freeze_semantic);
        sem_fc_ = std::make_unique<nn::Dense<float>>("semantic.head.fc", backbone_->out_features(),
                                                     width, cfg_.seed);
        sem_drop_ = std::make_unique<nn::Dropout<float>>("semantic.head", cfg_.semantic_dropout,
                                                         cfg_.seed);
    }
    if (cfg_.modalities.depth) {
        const int channels[] = {16, 32, 64, 128};
        int c_in = 3;
        for (int i = 0; i < 4; ++i) {
            const std::string idx = std::to_string(i + 1);
            depth_convs_.emplace_back("depth.conv" + idx, c_in, channels[i], 3, 2, 1, cfg_.seed);
            depth_bns_.emplace_back("depth.bn" + idx, channels[i]);
            depth_relus_.emplace_back();
            c_in = channels[i];
        }
        depth_fc_ = std::make_unique<nn::Dense<float>>("depth.fc", 128, width, cfg_.seed);
    }
    if (cfg_.modalities.location) {
        loc_fc1_ = std::make_unique<nn::Dense<float>>("location.fc1", 1, 64, cfg_.seed);
        loc_fc2_ = std::make_unique<nn::Dense<float>>("location.fc2", 64, width, cfg_.seed);
    }
    const int fused = fused_width();
    const int hidden = (fused + 15) / 16;  // SE-style reduction ratio 16, rounded up
    gate_fc1_ = std::make_unique<nn::Dense<float>>("gate.fc1", fused, hidden, cfg_.seed);
    gate_fc2_ = std::make_unique<nn::Dense<float>>("gate.fc2", hidden, 1, cfg_.seed);
    if (is_scalar_target(cfg_.target)) {
        s_fc1_ = std::make_unique<nn::Dense<float>>("scalar_head.fc1", fused, 256, cfg_.seed);
        s_fc2_ = std::make_unique<nn::Dense<float>>("scalar_head.fc2", 256, 64, cfg_.seed);
        s_fc3_ = std::make_unique<nn::Dense<float>>("scalar_head.fc3", 64, 1, cfg_.seed);
    } else {
        a_fc1_ = std::make_unique<nn::Dense<float>>("aps_head.fc1", fused, 512, cfg_.seed);
        a_ln_ = std::make_unique<nn::LayerNorm<float>>("aps_head.ln", 512);
        a_drop_ = std::make_unique<nn::Dropout<float>>("aps_head", cfg_.aps_dropout, cfg_.seed);
        a_fc2_ = std::make_unique<nn::Dense<float>>("aps_head.fc2", 512, 360, cfg_.seed);
        a_circ_ = std::make_unique<nn::CircularConv1d<float>>("aps_head.smooth", 5);
    }
}

Eigen::MatrixXf PredictorNet::semantic_features(const ModelBatch& batch, bool train) {
    if (!cfg_.modalities.semantic)
        throw std::invalid_argument("semantic branch: modality is inactive");
    check_image_input(batch.semantic, batch.n, "semantic branch");
    Eigen::MatrixXf feat = backbone_->forward(batch.semantic, train, train);
    feat = sem_fc_->forward(feat, train);
    feat = sem_relu_.forward(feat, train);
    return sem_drop_->forward(feat, train);
}

Eigen::MatrixXf PredictorNet::depth_features(const ModelBatch& batch, bool train) {
    if (!cfg_.modalities.depth) throw std::invalid_argument("depth branch: modality is inactive");
    check_image_input(batch.depth, batch.n, "depth branch");
    nn::Fmap<float> h = batch.depth;
    for (std::size_t i = 0; i < depth_convs_.size(); ++i) {
        h = depth_convs_[i].forward(h, train);
        h = depth_bns_[i].forward(h, train, train);
        h = depth_relus_[i].forward(h, train);
    }
    return depth_fc_->forward(depth_gap_.forward(h), train);
}

Eigen::MatrixXf PredictorNet::location_features(const ModelBatch& batch) {
    if (!cfg_.modalities.location)
        throw std::invalid_argument("location branch: modality is inactive");
    if (batch.distance_m.cols() != batch.n)
        throw std::invalid_argument("location branch: missing distances");
    const Eigen::MatrixXf x =
        ((batch.distance_m.array() - cfg_.distance_mean_m) / cfg_.distance_std_m)
            .cast<float>()
            .matrix();
    Eigen::MatrixXf h = loc_fc1_->forward(x, true);
    h = loc_relu_.forward(h, true);
    return loc_fc2_->forward(h, true);
}

std::pair<Eigen::MatrixXf, Eigen::MatrixXf> PredictorNet::se_fuse(const Eigen::MatrixXf& concat,
                                                                  bool train) {
    if (concat.rows() != fused_width())
        throw std::invalid_argument("se_fuse: fused width does not match the active modalities");
    Eigen::MatrixXf h = gate_fc1_->forward(concat, train);
    h = gate_relu_.forward(h, train);
    h = gate_fc2_->forward(h, train);
    Eigen::MatrixXf gate = gate_sig_.forward(h, train);
    concat_ = concat;
    gate_ = gate;
    Eigen::MatrixXf fused = (concat.array().rowwise() * gate.row(0).array()).matrix();
    return {std::move(fused), std::move(gate)};
}

Eigen::MatrixXf PredictorNet::head_forward(const Eigen::MatrixXf& fused, bool train) {
    if (is_scalar_target(cfg_.target)) {
        Eigen::MatrixXf h = s_relu1_.forward(s_fc1_->forward(fused, train), train);
        h = s_relu2_.forward(s_fc2_->forward(h, train), train);
        return s_softplus_.forward(s_fc3_->forward(h, train), true);
    }
    Eigen::MatrixXf h = a_fc1_->forward(fused, train);
    h = a_ln_->forward(h, train);
    h = a_relu_.forward(h, train);
    h = a_drop_->forward(h, train);
    const Eigen::MatrixXf z_raw = a_fc2_->forward(h, train);
    const Eigen::MatrixXf z_smooth = a_circ_->forward(z_raw, train);
    return a_sig_.forward(0.2f * z_raw + 0.8f * z_smooth, true);
}

Eigen::MatrixXf PredictorNet::head_backward(const Eigen::MatrixXf& dpred) {
    if (is_scalar_target(cfg_.target)) {
        Eigen::MatrixXf d = s_fc3_->backward(s_softplus_.backward(dpred));
        d = s_fc2_->backward(s_relu2_.backward(d));
        return s_fc1_->backward(s_relu1_.backward(d));
    }
    const Eigen::MatrixXf dz = a_sig_.backward(dpred);
    Eigen::MatrixXf dz_raw = a_circ_->backward(0.8f * dz);
    dz_raw += 0.2f * dz;
    Eigen::MatrixXf d = a_fc2_->backward(dz_raw);
    d = a_drop_->backward(d);
    d = a_relu_.backward(d);
    d = a_ln_->backward(d);
    return a_fc1_->backward(d);
}

Eigen::MatrixXf PredictorNet::forward(const ModelBatch& batch, bool train) {
    if (batch.n < 1) throw std::invalid_argument("forward: empty batch");
    Eigen::MatrixXf concat(fused_width(), batch.n);
    int offset = 0;
    const int width = cfg_.feature_width;
    if (cfg_.modalities.semantic) {
        concat.middleRows(offset, width) = semantic_features(batch, train);
        offset += width;
    }
    if (cfg_.modalities.depth) {
        concat.middleRows(offset, width) = depth_features(batch, train);
        offset += width;
    }
    if (cfg_.modalities.location) concat.middleRows(offset, width) = location_features(batch);
    auto [fused, gate] = se_fuse(concat, train);
    return head_forward(fused, train);
}

void PredictorNet::backward(const Eigen::MatrixXf& dpred) {
    const Eigen::MatrixXf d_fused = head_backward(dpred);
    Eigen::MatrixXf d_gate = (d_fused.array() * concat_.array()).colwise().sum().matrix();
    Eigen::MatrixXf d_concat = (d_fused.array().rowwise() * gate_.row(0).array()).matrix();
    Eigen::MatrixXf d = gate_sig_.backward(d_gate);
    d = gate_fc2_->backward(d);
    d = gate_relu_.backward(d);
    d_concat += gate_fc1_->backward(d);

    int offset = 0;
    const int width = cfg_.feature_width;
    if (cfg_.modalities.semantic) {
        Eigen::MatrixXf db = sem_drop_->backward(d_concat.middleRows(offset, width));
        db = sem_relu_.backward(db);
        backbone_->backward(sem_fc_->backward(db));
        offset += width;
    }
    if (cfg_.modalities.depth) {
        const Eigen::MatrixXf dg = depth_fc_->backward(d_concat.middleRows(offset, width));
        nn::Fmap<float> dfm = depth_gap_.backward(dg);
        for (std::size_t i = depth_convs_.size(); i-- > 0;) {
            dfm = depth_relus_[i].backward(dfm);
            dfm = depth_bns_[i].backward(dfm);
            dfm = depth_convs_[i].backward(dfm);
        }
        offset += width;
    }
    if (cfg_.modalities.location) {
        Eigen::MatrixXf dl = loc_fc2_->backward(d_concat.middleRows(offset, width));
        dl = loc_relu_.backward(dl);
        loc_fc1_->backward(dl);
    }
}

std::vector<nn::ParamRef<float>> PredictorNet::params() {
    std::vector<nn::ParamRef<float>> out;
    if (cfg_.modalities.semantic) {
        backbone_->collect(out, "semantic.backbone.");
        sem_fc_->collect(out, "semantic.");
    }
    if (cfg_.modalities.depth) {
        for (std::size_t i = 0; i < depth_convs_.size(); ++i) {
            depth_convs_[i].collect(out, "", true);
            depth_bns_[i].collect(out, "", true);
        }
        depth_fc_->collect(out, "");
    }
    if (cfg_.modalities.location) {
        loc_fc1_->collect(out, "");
        loc_fc2_->collect(out, "");
    }
    gate_fc1_->collect(out, "");
    gate_fc2_->collect(out, "");
    if (is_scalar_target(cfg_.target)) {
        s_fc1_->collect(out, "");
        s_fc2_->collect(out, "");
        s_fc3_->collect(out, "");
    } else {
        // Dropout keeps no tensors: masks are draw-indexed, never stored.
        a_fc1_->collect(out, "");
        a_ln_->collect(out, "");
        a_fc2_->collect(out, "");
        a_circ_->collect(out, "");
    }
    return out;
}

long long PredictorNet::macs_per_sample() const {
    long long acc = 0;
    if (cfg_.modalities.semantic) acc += backbone_->macs_per_sample() + sem_fc_->macs_per_sample();
    if (cfg_.modalities.depth) {
        for (const auto& c : depth_convs_) acc += c.macs_per_sample();
        acc += depth_fc_->macs_per_sample();
    }
    if (cfg_.modalities.location)
        acc += loc_fc1_->macs_per_sample() + loc_fc2_->macs_per_sample();
    acc += gate_fc1_->macs_per_sample() + gate_fc2_->macs_per_sample();
    if (is_scalar_target(cfg_.target))
        acc += s_fc1_->macs_per_sample() + s_fc2_->macs_per_sample() + s_fc3_->macs_per_sample();
    else
        acc += a_fc1_->macs_per_sample() + a_fc2_->macs_per_sample() + a_circ_->macs_per_sample();
    return acc;
}

nn::ParamCount<float> count_model_params(PredictorNet& net) {
    return nn::count_params(net.params());
}

long long estimate_flops(const ModelConfig& cfg) {
    PredictorNet net(cfg);
    ModelBatch batch;
    batch.n = 1;
    batch.semantic = nn::Fmap<float>::zeros(1, 3, kImageSide, kImageSide);
    batch.depth = nn::Fmap<float>::zeros(1, 3, kImageSide, kImageSide);
    batch.distance_m = Eigen::MatrixXd::Zero(1, 1);
    net.forward(batch, false);
    return 2 * net.macs_per_sample();
}

std::string cpu_model_string() {
    std::ifstream in("/proc/cpuinfo");
    std::string line;
    while (std::getline(in, line)) {
        const auto pos = line.find("model name");
        if (pos == std::string::npos) continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        std::string value = line.substr(colon + 1);
        const auto begin = value.find_first_not_of(" \t");
        return begin == std::string::npos ? value : value.substr(begin);
    }
    return "unknown-cpu";
}

LatencyReport measure_latency(PredictorNet& net, int batch, int repetitions, int warmup) {
    if (batch < 1 || repetitions < 1)
        throw std::invalid_argument("measure_latency: batch and repetitions must be positive");
    warmup = std::max(warmup, 5);
    ModelBatch data;
    data.n = batch;
    data.semantic = nn::Fmap<float>::zeros(batch, 3, kImageSide, kImageSide);
    data.depth = nn::Fmap<float>::zeros(batch, 3, kImageSide, kImageSide);
    data.distance_m = Eigen::MatrixXd::Constant(1, batch, 50.0);
    CounterRng rng(9, "latency-input");
    for (Eigen::Index i = 0; i < data.semantic.m.size(); ++i)
        data.semantic.m.data()[i] = static_cast<float>(rng.uniform());
    for (int i = 0; i < warmup; ++i) net.forward(data, false);
    const auto start = std::chrono::steady_clock::now();
    for (int i = 0; i < repetitions; ++i) net.forward(data, false);
    const auto stop = std::chrono::steady_clock::now();
    LatencyReport out;
    out.batch = batch;
    out.repetitions = repetitions;
    out.mean_ms = std::chrono::duration<double, std::milli>(stop - start).count() / repetitions;
    out.samples_per_s = batch / (out.mean_ms / 1000.0);
    out.hardware = cpu_model_string();
    return out;
}

}  // namespace vcpred
