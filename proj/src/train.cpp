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

#include "vcpred/train.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "vcpred/checkpoint.hpp"
#include "vcpred/geodesy.hpp"
#include "vcpred/optim.hpp"
#include "vcpred/scene.hpp"

namespace vcpred {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

double scale_for(Target target, const DatasetManifest& manifest) {
    switch (target) {
        case Target::pl: return manifest.scale_pl_db;
        case Target::ds: return manifest.scale_ds_ns;
        case Target::asa: return manifest.scale_asa_deg;
        case Target::asd: return manifest.scale_asd_deg;
        case Target::aps: break;
    }
    throw std::invalid_argument("scale_for: the aps target is not scaled");
}

double physical_label(const Sample& s, Target target) {
    switch (target) {
        case Target::pl: return s.labels.pl_db;
        case Target::ds: return s.labels.ds_ns;
        case Target::asa: return s.labels.asa_deg;
        case Target::asd: return s.labels.asd_deg;
        case Target::aps: break;
    }
    throw std::invalid_argument("physical_label: aps labels are vectors");
}

struct Corpus {
    LoadedDataset data;
    std::map<std::string, const Sample*> by_id;
};

Corpus load_corpus(const std::string& data_dir) {
    Corpus c;
    c.data = read_dataset(data_dir);
    for (const auto& s : c.data.samples) c.by_id[s.snapshot_id] = &s;
    return c;
}

std::vector<const Sample*> pick(const Corpus& corpus, const std::vector<std::string>& ids) {
    std::vector<const Sample*> out;
    out.reserve(ids.size());
    for (const auto& id : ids) {
        const auto it = corpus.by_id.find(id);
        if (it == corpus.by_id.end())
            throw std::runtime_error("split references unknown snapshot id: " + id);
        out.push_back(it->second);
    }
    return out;
}

/// Batch loss + gradient for one forward output. Rows of aps matrices are
/// samples, matching the loss convention; the network speaks columns.
struct StepLoss {
    double loss = 0.0;
    LossBreakdown<double> breakdown;  // aps only
    Eigen::MatrixXf dpred;
};

StepLoss scalar_step_loss(const Eigen::MatrixXf& pred, const std::vector<const Sample*>& batch,
                          Target target, double scale) {
    const int n = static_cast<int>(batch.size());
    Eigen::RowVectorXd diff(n);
    for (int i = 0; i < n; ++i)
        diff(i) = static_cast<double>(pred(0, i)) - physical_label(*batch[i], target) / scale;
    StepLoss out;
    out.loss = diff.squaredNorm() / n;
    out.dpred = (2.0 / n * diff).cast<float>();
    return out;
}

StepLoss aps_step_loss(const Eigen::MatrixXf& pred, const std::vector<const Sample*>& batch,
                       const LossConfig& lcfg) {
    const int n = static_cast<int>(batch.size());
    Eigen::MatrixXd target(n, 360);
    for (int i = 0; i < n; ++i) target.row(i) = batch[i]->labels.aps.transpose();
    const Eigen::MatrixXd p = pred.transpose().cast<double>();
    StepLoss out;
    out.breakdown = composite_aps_loss(target, p, lcfg);
    out.loss = out.breakdown.total;
    out.dpred = composite_aps_loss_grad(target, p, lcfg).transpose().cast<float>();
    return out;
}

double dataset_loss(PredictorNet& net, const std::vector<const Sample*>& samples, Target target,
                    double scale, const LossConfig& lcfg, int batch_size) {
    double acc = 0.0;
    for (std::size_t at = 0; at < samples.size(); at += batch_size) {
        const std::size_t end = std::min(samples.size(), at + batch_size);
        std::vector<const Sample*> batch(samples.begin() + at, samples.begin() + end);
        const Eigen::MatrixXf pred = net.forward(make_batch(batch), false);
        const StepLoss sl = is_scalar_target(target) ? scalar_step_loss(pred, batch, target, scale)
                                                     : aps_step_loss(pred, batch, lcfg);
        acc += sl.loss * static_cast<double>(batch.size());
    }
    return acc / static_cast<double>(samples.size());
}

}  // namespace

// --- dataset generation -----------------------------------------------------

DatasetManifest generate_dataset(const GenConfig& cfg, const std::string& dir) {
    if (cfg.areas < 1 || cfg.per_area < 1)
        throw std::invalid_argument("generate_dataset: areas and per_area must be positive");

    std::vector<Sample> samples;
    std::vector<DropEntry> drops;
    const Palette palette = default_palette();

    for (int a = 0; a < cfg.areas; ++a) {
        SceneConfig scfg = area_config(a % 4);
        scfg.area_id = "area" + std::to_string(a + 1);
        scfg.seed = CounterRng(cfg.seed, "gen-area", static_cast<std::uint64_t>(a)).next_u64();

        const Scene scene = generate_scene(scfg);
        const auto poses = sample_trajectory(scene, cfg.per_area, scfg);
        std::vector<RawSnapshot> snaps;
        snaps.reserve(poses.size());
        for (const auto& pose : poses) snaps.push_back(make_snapshot(scene, pose, scfg));

        // Stream alignment first: only fully matched triplets carry on.
        std::vector<double> ch, im, gp;
        for (const auto& s : snaps) {
            ch.push_back(s.t_channel_s);
            im.push_back(s.t_image_s);
            gp.push_back(s.t_gps_s);
        }
        const auto triplets = synchronize(ch, im, gp);
        std::vector<bool> matched(snaps.size(), false);
        for (const auto& t : triplets) matched[t.channel] = true;
        std::vector<RawSnapshot> synced;
        for (std::size_t i = 0; i < snaps.size(); ++i) {
            if (matched[i])
                synced.push_back(std::move(snaps[i]));
            else
                drops.push_back({snaps[i].snapshot_id, "unsynchronized"});
        }

        const FilterResult kept = filter_invalid(synced, FilterRules::defaults());
        drops.insert(drops.end(), kept.drops.begin(), kept.drops.end());
        for (const int idx : kept.kept)
            samples.push_back(make_sample(synced[idx], palette, cfg.masked));
    }
    if (samples.empty()) throw std::runtime_error("generate_dataset: every snapshot was dropped");

    DatasetManifest manifest;
    manifest.dynamics_masked = cfg.masked;
    manifest.seeds = {cfg.seed};
    double mean = 0.0;
    for (const auto& s : samples) mean += haversine_m(s.tx_geo, s.rx_geo);
    mean /= static_cast<double>(samples.size());
    double var = 0.0;
    for (const auto& s : samples) {
        const double d = haversine_m(s.tx_geo, s.rx_geo) - mean;
        var += d * d;
    }
    var /= static_cast<double>(samples.size());
    manifest.distance_mean_m = mean;
    manifest.distance_std_m = std::max(1e-6, std::sqrt(var));

    write_dataset(samples, manifest, dir, drops);
    return read_manifest(dir);
}

// --- train configuration -----------------------------------------------------

TrainConfig default_train_config(Target target) {
    TrainConfig cfg;
    cfg.target = target;
    if (target == Target::aps) {
        cfg.batch_size = 8;
        cfg.decoupled_weight_decay = true;
        cfg.weight_decay = 1e-4;
        cfg.clip_norm = 1.5;
    }
    return cfg;
}

void validate_train_config(const TrainConfig& cfg) {
    if (cfg.batch_size < 1) throw std::invalid_argument("train config: batch size must be >= 1");
    if (cfg.max_epochs < 1) throw std::invalid_argument("train config: max epochs must be >= 1");
    if (cfg.lr <= 0 || cfg.lr_semantic <= 0 || cfg.lr_rest <= 0)
        throw std::invalid_argument("train config: learning rates must be positive");
    if (cfg.clip_norm < 0) throw std::invalid_argument("train config: clip norm must be >= 0");
    if (cfg.val_fraction < 0 || cfg.val_fraction >= 1)
        throw std::invalid_argument("train config: val fraction must lie in [0, 1)");
    if (cfg.early_stop_patience < 1 || cfg.plateau_patience < 1 || cfg.cosine_period < 1 ||
        cfg.cosine_mult < 1)
        throw std::invalid_argument("train config: patience and periods must be >= 1");
}

std::string train_config_to_json(const TrainConfig& cfg) {
    json j;
    j["target"] = to_string(cfg.target);
    j["batch_size"] = cfg.batch_size;
    j["max_epochs"] = cfg.max_epochs;
    j["decoupled_weight_decay"] = cfg.decoupled_weight_decay;
    j["lr"] = cfg.lr;
    j["lr_semantic"] = cfg.lr_semantic;
    j["lr_rest"] = cfg.lr_rest;
    j["weight_decay"] = cfg.weight_decay;
    j["clip_norm"] = cfg.clip_norm;
    j["early_stop_patience"] = cfg.early_stop_patience;
    j["plateau_factor"] = cfg.plateau_factor;
    j["plateau_patience"] = cfg.plateau_patience;
    j["cosine_period"] = cfg.cosine_period;
    j["cosine_mult"] = cfg.cosine_mult;
    j["val_fraction"] = cfg.val_fraction;
    j["test_area"] = cfg.test_area;
    j["seed"] = cfg.seed;
    return j.dump();
}

TrainConfig train_config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error&) {
        throw std::runtime_error("train config is not valid JSON");
    }
    TrainConfig base;
    TrainConfig cfg = default_train_config(
        j.contains("target") ? target_from_string(j["target"].get<std::string>()) : base.target);
    cfg.batch_size = j.value("batch_size", cfg.batch_size);
    cfg.max_epochs = j.value("max_epochs", cfg.max_epochs);
    cfg.decoupled_weight_decay = j.value("decoupled_weight_decay", cfg.decoupled_weight_decay);
    cfg.lr = j.value("lr", cfg.lr);
    cfg.lr_semantic = j.value("lr_semantic", cfg.lr_semantic);
    cfg.lr_rest = j.value("lr_rest", cfg.lr_rest);
    cfg.weight_decay = j.value("weight_decay", cfg.weight_decay);
    cfg.clip_norm = j.value("clip_norm", cfg.clip_norm);
    cfg.early_stop_patience = j.value("early_stop_patience", cfg.early_stop_patience);
    cfg.plateau_factor = j.value("plateau_factor", cfg.plateau_factor);
    cfg.plateau_patience = j.value("plateau_patience", cfg.plateau_patience);
    cfg.cosine_period = j.value("cosine_period", cfg.cosine_period);
    cfg.cosine_mult = j.value("cosine_mult", cfg.cosine_mult);
    cfg.val_fraction = j.value("val_fraction", cfg.val_fraction);
    cfg.test_area = j.value("test_area", cfg.test_area);
    cfg.seed = j.value("seed", cfg.seed);
    return cfg;
}

// --- training loop ------------------------------------------------------------

RunSummary train(const std::string& data_dir, const TrainConfig& tcfg, ModelConfig mcfg,
                 const std::string& run_dir) {
    validate_train_config(tcfg);
    const Corpus corpus = load_corpus(data_dir);
    const DatasetManifest& manifest = corpus.data.manifest;

    mcfg.target = tcfg.target;
    mcfg.seed = tcfg.seed;
    mcfg.distance_mean_m = manifest.distance_mean_m;
    mcfg.distance_std_m = manifest.distance_std_m;
    validate_model_config(mcfg);

    const DatasetSplit split =
        split_by_area(manifest, tcfg.test_area, tcfg.val_fraction, tcfg.seed);
    std::vector<const Sample*> train_set = pick(corpus, split.train);
    const std::vector<const Sample*> val_set = pick(corpus, split.val);
    if (train_set.empty()) throw std::runtime_error("training split is empty");

    PredictorNet net(mcfg);
    auto params = net.params();
    AdamConfig acg;
    acg.decoupled_weight_decay = tcfg.decoupled_weight_decay;
    auto groups = tcfg.target == Target::aps
                      ? Adam::groups_by_prefix(params, "semantic.", tcfg.lr_semantic, tcfg.lr_rest,
                                               tcfg.weight_decay)
                      : Adam::single_group(params, tcfg.lr, tcfg.weight_decay);
    Adam opt(params, acg, groups);

    const double scale = is_scalar_target(tcfg.target) ? scale_for(tcfg.target, manifest) : 1.0;
    const LossConfig lcfg;
    PlateauScheduler plateau(tcfg.plateau_factor, tcfg.plateau_patience);
    CosineWarmRestarts cosine(tcfg.cosine_period, tcfg.cosine_mult);
    EarlyStopper stopper(tcfg.early_stop_patience);

    fs::create_directories(fs::path(run_dir));
    {
        json echo;
        echo["data_dir"] = data_dir;
        echo["manifest_hash"] = manifest.content_hash_hex;
        echo["model"] = json::parse(model_config_to_json(mcfg));
        echo["train"] = json::parse(train_config_to_json(tcfg));
        write_text(fs::path(run_dir) / "config.echo", echo.dump(2) + "\n");
    }
    std::ofstream log(fs::path(run_dir) / "train.log", std::ios::binary);
    std::ofstream curves(fs::path(run_dir) / "curves.csv", std::ios::binary);
    curves << "epoch,train_loss,val_loss,lr_scale\n";

    RunSummary summary;
    summary.run_dir = run_dir;
    summary.target = tcfg.target;
    const fs::path ckpt_path = fs::path(run_dir) / "checkpoint";
    double plateau_cum = 1.0;
    long long step = 0;

    for (int epoch = 1; epoch <= tcfg.max_epochs; ++epoch) {
        double lr_scale = plateau_cum;
        if (tcfg.target == Target::aps) {
            lr_scale = cosine.factor(epoch - 1);
            opt.set_scale(lr_scale);
        }

        // Seeded order: one dedicated stream per epoch.
        CounterRng rng(tcfg.seed, "shuffle/" + std::to_string(epoch));
        for (std::size_t i = train_set.size(); i > 1; --i)
            std::swap(train_set[i - 1], train_set[rng.uniform_int(0, static_cast<int>(i) - 1)]);

        double train_acc = 0.0;
        for (std::size_t at = 0; at < train_set.size(); at += tcfg.batch_size) {
            const std::size_t end = std::min(train_set.size(), at + tcfg.batch_size);
            std::vector<const Sample*> batch(train_set.begin() + at, train_set.begin() + end);
            const Eigen::MatrixXf pred = net.forward(make_batch(batch), true);
            const StepLoss sl = is_scalar_target(tcfg.target)
                                    ? scalar_step_loss(pred, batch, tcfg.target, scale)
                                    : aps_step_loss(pred, batch, lcfg);
            if (!std::isfinite(sl.loss))
                throw std::runtime_error("non-finite training loss at epoch " +
                                         std::to_string(epoch) + " step " + std::to_string(step));
            opt.zero_grad();
            net.backward(sl.dpred);
            const double pre_norm = opt.step(tcfg.clip_norm);
            const double post_norm =
                tcfg.clip_norm > 0 ? std::min(pre_norm, tcfg.clip_norm) : pre_norm;
            ++step;
            train_acc += sl.loss * static_cast<double>(batch.size());

            json line;
            line["epoch"] = epoch;
            line["step"] = step;
            line["loss"] = sl.loss;
            line["grad_norm"] = pre_norm;
            line["post_clip_norm"] = post_norm;
            line["lr_scale"] = lr_scale;
            if (tcfg.target == Target::aps) {
                line["shape"] = sl.breakdown.shape;
                line["wmse"] = sl.breakdown.wmse;
                line["wl1"] = sl.breakdown.wl1;
                line["rtp"] = sl.breakdown.rtp;
            }
            log << line.dump() << "\n";
        }
        const double train_loss = train_acc / static_cast<double>(train_set.size());
        const double val_loss =
            val_set.empty() ? train_loss
                            : dataset_loss(net, val_set, tcfg.target, scale, lcfg, tcfg.batch_size);
        if (!std::isfinite(val_loss))
            throw std::runtime_error("non-finite validation loss at epoch " +
                                     std::to_string(epoch));

        curves << epoch << ',' << fmt_double(train_loss) << ',' << fmt_double(val_loss) << ','
               << fmt_double(lr_scale) << "\n";
        summary.curve.push_back({epoch, train_loss, val_loss, lr_scale});
        summary.epochs_run = epoch;

        const bool stop = stopper.observe(val_loss);
        if (stopper.improved_last()) {
            summary.best_epoch = epoch;
            summary.best_val = val_loss;
            CheckpointMeta meta;
            meta.model_config_json = model_config_to_json(mcfg);
            meta.train_config_json = train_config_to_json(tcfg);
            meta.epoch = epoch;
            meta.best_val = val_loss;
            save_checkpoint(ckpt_path.string(), net, &opt, meta);
        }
        if (is_scalar_target(tcfg.target) && plateau.observe(val_loss)) {
            opt.decay_base_lr(tcfg.plateau_factor);
            plateau_cum *= tcfg.plateau_factor;
        }
        if (stop) {
            summary.early_stopped = true;
            break;
        }
    }

    json sj;
    sj["target"] = to_string(summary.target);
    sj["epochs_run"] = summary.epochs_run;
    sj["best_epoch"] = summary.best_epoch;
    sj["best_val"] = summary.best_val;
    sj["early_stopped"] = summary.early_stopped;
    write_text(fs::path(run_dir) / "summary.json", sj.dump(2) + "\n");
    return summary;
}

// --- evaluation ----------------------------------------------------------------

std::string eval_record_to_json(const EvalRecord& rec) {
    json j;
    j["target"] = to_string(rec.target);
    j["split"] = rec.split;
    j["n"] = rec.n;
    j["rmse"] = rec.rmse;
    j["mae"] = rec.mae;
    j["units"] = rec.target == Target::pl    ? "dB"
                 : rec.target == Target::ds  ? "ns"
                 : rec.target == Target::aps ? "normalized"
                                             : "deg";
    if (rec.target == Target::aps) {
        json c;
        c["mean"] = rec.cosine.mean;
        c["median"] = rec.cosine.median;
        c["stddev"] = rec.cosine.stddev;
        c["min"] = rec.cosine.min;
        c["max"] = rec.cosine.max;
        c["histogram"] = std::vector<int>(rec.cosine.histogram.data(),
                                          rec.cosine.histogram.data() + rec.cosine.histogram.size());
        j["cosine"] = c;
    }
    j["predictions_path"] = rec.predictions_path;
    return j.dump(2) + "\n";
}

EvalRecord eval_record_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error&) {
        throw std::runtime_error("eval record is not valid JSON");
    }
    EvalRecord rec;
    rec.target = target_from_string(j.at("target").get<std::string>());
    rec.split = j.value("split", "");
    rec.n = j.value("n", 0);
    rec.rmse = j.value("rmse", 0.0);
    rec.mae = j.value("mae", 0.0);
    if (j.contains("cosine")) {
        const auto& c = j["cosine"];
        rec.cosine.mean = c.value("mean", 0.0);
        rec.cosine.median = c.value("median", 0.0);
        rec.cosine.stddev = c.value("stddev", 0.0);
        rec.cosine.min = c.value("min", 0.0);
        rec.cosine.max = c.value("max", 0.0);
        const auto h = c.value("histogram", std::vector<int>{});
        rec.cosine.histogram = Eigen::Map<const Eigen::VectorXi>(h.data(), h.size());
    }
    rec.predictions_path = j.value("predictions_path", "");
    return rec;
}

EvalRecord compute_metrics(Target target, const Eigen::MatrixXd& labels,
                           const Eigen::MatrixXd& preds) {
    if (labels.rows() != preds.rows() || labels.cols() != preds.cols() || labels.rows() == 0)
        throw std::invalid_argument("compute_metrics: shape mismatch");
    EvalRecord rec;
    rec.target = target;
    rec.n = static_cast<int>(labels.rows());
    rec.rmse = rmse(labels.reshaped(), preds.reshaped());
    rec.mae = mae(labels.reshaped(), preds.reshaped());
    if (target == Target::aps) {
        std::vector<double> cosines(labels.rows());
        for (Eigen::Index m = 0; m < labels.rows(); ++m)
            cosines[m] = cos_sim(labels.row(m).transpose(), preds.row(m).transpose(), 1e-8);
        rec.cosine = cosine_distribution(std::move(cosines));
    }
    return rec;
}

EvalRecord evaluate(const std::string& run_dir, const std::string& data_dir,
                    const std::string& split_name) {
    const fs::path ckpt = fs::path(run_dir) / "checkpoint";
    const CheckpointMeta meta = peek_checkpoint(ckpt.string());
    const ModelConfig mcfg = model_config_from_json(meta.model_config_json);
    const TrainConfig tcfg = train_config_from_json(meta.train_config_json);

    PredictorNet net(mcfg);
    load_checkpoint(ckpt.string(), net, nullptr);

    const Corpus corpus = load_corpus(data_dir);
    const DatasetSplit split =
        split_by_area(corpus.data.manifest, tcfg.test_area, tcfg.val_fraction, tcfg.seed);
    const std::vector<std::string>* ids = nullptr;
    if (split_name == "train")
        ids = &split.train;
    else if (split_name == "val")
        ids = &split.val;
    else if (split_name == "test")
        ids = &split.test;
    else
        throw std::invalid_argument("unknown split: " + split_name);
    if (ids->empty()) throw std::runtime_error("split '" + split_name + "' is empty");
    const std::vector<const Sample*> samples = pick(corpus, *ids);

    const int cols = mcfg.target == Target::aps ? 360 : 1;
    const double scale =
        is_scalar_target(mcfg.target) ? scale_for(mcfg.target, corpus.data.manifest) : 1.0;
    Eigen::MatrixXd labels(samples.size(), cols), preds(samples.size(), cols);
    for (std::size_t at = 0; at < samples.size(); at += tcfg.batch_size) {
        const std::size_t end = std::min(samples.size(), at + tcfg.batch_size);
        std::vector<const Sample*> batch(samples.begin() + at, samples.begin() + end);
        const Eigen::MatrixXf out = net.forward(make_batch(batch), false);
        for (std::size_t i = at; i < end; ++i) {
            if (mcfg.target == Target::aps) {
                labels.row(i) = samples[i]->labels.aps.transpose();
                preds.row(i) = out.col(i - at).cast<double>().transpose();
            } else {
                labels(i, 0) = physical_label(*samples[i], mcfg.target);
                preds(i, 0) = static_cast<double>(out(0, i - at)) * scale;
            }
        }
    }

    EvalRecord rec = compute_metrics(mcfg.target, labels, preds);
    rec.split = split_name;

    const fs::path pred_path = fs::path(run_dir) / "predictions.csv";
    std::ostringstream csv;
    if (mcfg.target == Target::aps) {
        csv << "snapshot_id";
        for (int k = 0; k < 360; ++k) csv << ",pred_" << k;
        for (int k = 0; k < 360; ++k) csv << ",target_" << k;
        csv << "\n";
        for (std::size_t i = 0; i < samples.size(); ++i) {
            csv << samples[i]->snapshot_id;
            for (int k = 0; k < 360; ++k) csv << ',' << fmt_double(preds(i, k));
            for (int k = 0; k < 360; ++k) csv << ',' << fmt_double(labels(i, k));
            csv << "\n";
        }
    } else {
        csv << "snapshot_id,actual,predicted\n";
        for (std::size_t i = 0; i < samples.size(); ++i)
            csv << samples[i]->snapshot_id << ',' << fmt_double(labels(i, 0)) << ','
                << fmt_double(preds(i, 0)) << "\n";
    }
    write_text(pred_path, csv.str());
    rec.predictions_path = pred_path.string();

    write_text(fs::path(run_dir) / ("eval_" + split_name + ".json"), eval_record_to_json(rec));
    return rec;
}

}  // namespace vcpred
