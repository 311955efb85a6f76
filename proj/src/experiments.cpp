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

#include "vcpred/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "vcpred/checkpoint.hpp"
#include "vcpred/plot.hpp"

namespace vcpred {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& path) {
    std::istringstream in(read_text(path));
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) fields.push_back(field);
        rows.push_back(std::move(fields));
    }
    return rows;
}

std::string modality_tag(const Modalities& m) {
    std::string tag = "sem";
    if (m.depth) tag += "-depth";
    if (m.location) tag += "-gps";
    return tag;
}

/// Trains one arm under <out>/runs/<name> and evaluates the test split.
json run_arm(const ExperimentContext& ctx, const std::string& name, const TrainConfig& tcfg,
             const ModelConfig& mcfg) {
    const fs::path run_dir = fs::path(ctx.out_dir) / "runs" / name;
    const RunSummary summary = train(ctx.data_dir, tcfg, mcfg, run_dir.string());
    evaluate(run_dir.string(), ctx.data_dir, "test");

    json arm;
    arm["name"] = name;
    arm["run_dir"] = "runs/" + name;
    arm["target"] = to_string(tcfg.target);
    arm["modalities"] = mcfg.modalities.to_string();
    arm["backbone"] = to_string(mcfg.backbone);
    arm["seed"] = tcfg.seed;
    (void)summary;
    return arm;
}

void finish_experiment(const ExperimentContext& ctx, const std::string& id, json arms,
                       json artifacts, json extra) {
    json exp;
    exp["schema"] = "vcpred-experiment/1";
    exp["id"] = id;
    exp["data_dir"] = ctx.data_dir;
    if (!ctx.masked_data_dir.empty()) exp["masked_data_dir"] = ctx.masked_data_dir;
    exp["config"] = json::parse(train_config_to_json(ctx.train));
    exp["arms"] = std::move(arms);
    exp["artifacts"] = std::move(artifacts);
    for (auto& [k, v] : extra.items()) exp[k] = v;
    write_text(fs::path(ctx.out_dir) / "exp.json", exp.dump(2) + "\n");
    write_report(ctx.out_dir, "both");
}

std::vector<PlotSeries> curves_series(const fs::path& run_dir, const std::string& label) {
    const auto rows = read_csv(run_dir / "curves.csv");
    PlotSeries s;
    s.label = label;
    for (std::size_t i = 1; i < rows.size(); ++i) {  // skip header
        s.x.push_back(std::stod(rows[i].at(0)));
        s.y.push_back(std::stod(rows[i].at(1)));  // train loss column
    }
    return {s};
}

}  // namespace

std::string run_modality_ablation(const ExperimentContext& ctx) {
    fs::create_directories(fs::path(ctx.out_dir));
    const Modalities combos[] = {{true, true, true}, {true, true, false},
                                 {true, false, true}, {true, false, false}};
    json arms = json::array();
    for (const Target target : ctx.targets) {
        if (!is_scalar_target(target))
            throw std::invalid_argument("modality ablation covers scalar targets only");
        for (const Modalities& combo : combos) {
            for (const std::uint64_t seed : ctx.seeds) {
                TrainConfig tcfg = ctx.train;
                tcfg.target = target;
                tcfg.seed = seed;
                ModelConfig mcfg = ctx.model;
                mcfg.modalities = combo;
                const std::string name = to_string(target) + "_" + modality_tag(combo) + "_s" +
                                         std::to_string(seed);
                arms.push_back(run_arm(ctx, name, tcfg, mcfg));
            }
        }
    }
    finish_experiment(ctx, "modality-ablation", std::move(arms), json::array(), json::object());
    return ctx.out_dir;
}

std::string run_dynamic_removal(const ExperimentContext& ctx) {
    if (ctx.masked_data_dir.empty())
        throw std::invalid_argument("dynamic removal needs a masked dataset directory");
    const DatasetManifest raw = read_manifest(ctx.data_dir);
    const DatasetManifest masked = read_manifest(ctx.masked_data_dir);
    std::set<std::string> raw_ids, masked_ids;
    for (const auto& [id, area] : raw.samples) raw_ids.insert(id);
    for (const auto& [id, area] : masked.samples) masked_ids.insert(id);
    if (raw_ids != masked_ids || raw.dynamics_masked || !masked.dynamics_masked)
        throw std::runtime_error(
            "unpaired datasets: the masked corpus must mirror the raw snapshot ids");

    fs::create_directories(fs::path(ctx.out_dir) / "plots");
    json arms = json::array();
    json artifacts = json::array();
    for (const std::uint64_t seed : ctx.seeds) {
        for (const bool use_masked : {false, true}) {
            ExperimentContext arm_ctx = ctx;
            arm_ctx.data_dir = use_masked ? ctx.masked_data_dir : ctx.data_dir;
            TrainConfig tcfg = ctx.train;
            tcfg.seed = seed;
            const std::string name =
                std::string(use_masked ? "masked" : "raw") + "_s" + std::to_string(seed);
            json arm = run_arm(arm_ctx, name, tcfg, ctx.model);
            arm["variant"] = use_masked ? "masked" : "raw";
            arms.push_back(std::move(arm));
        }
        std::vector<PlotSeries> series =
            curves_series(fs::path(ctx.out_dir) / "runs" / ("raw_s" + std::to_string(seed)),
                          "raw");
        auto masked_series = curves_series(
            fs::path(ctx.out_dir) / "runs" / ("masked_s" + std::to_string(seed)), "masked");
        series.push_back(masked_series[0]);
        const std::string plot = "plots/dynamic_curves_s" + std::to_string(seed) + ".svg";
        write_line_svg((fs::path(ctx.out_dir) / plot).string(),
                       "training error, raw vs masked scenes", "epoch", "train loss", series);
        artifacts.push_back(plot);
    }
    finish_experiment(ctx, "dynamic-removal", std::move(arms), std::move(artifacts),
                      json::object());
    return ctx.out_dir;
}

std::string run_backbone_sweep(const ExperimentContext& ctx) {
    fs::create_directories(fs::path(ctx.out_dir));
    json arms = json::array();
    for (const Backbone backbone : ctx.backbones) {
        TrainConfig tcfg = ctx.train;
        tcfg.seed = ctx.seeds.at(0);
        ModelConfig mcfg = ctx.model;
        mcfg.backbone = backbone;
        const std::string name = to_string(backbone);
        json arm = run_arm(ctx, name, tcfg, mcfg);

        // Complexity columns, recomputed from the stored checkpoint config.
        const fs::path run_dir = fs::path(ctx.out_dir) / "runs" / name;
        const CheckpointMeta meta = peek_checkpoint((run_dir / "checkpoint").string());
        const ModelConfig stored = model_config_from_json(meta.model_config_json);
        PredictorNet net(stored);
        load_checkpoint((run_dir / "checkpoint").string(), net, nullptr);
        const auto counts = count_model_params(net);
        const LatencyReport lat = measure_latency(net, ctx.latency_batch, ctx.latency_reps);
        json c;
        c["params_total"] = counts.total;
        c["params_trainable"] = counts.trainable;
        c["flops"] = estimate_flops(stored);
        c["latency_ms"] = lat.mean_ms;
        c["samples_per_s"] = lat.samples_per_s;
        c["latency_batch"] = lat.batch;
        c["latency_repetitions"] = lat.repetitions;
        c["hardware"] = lat.hardware;
        write_text(run_dir / "complexity.json", c.dump(2) + "\n");
        arms.push_back(std::move(arm));
    }
    finish_experiment(ctx, "backbone-sweep", std::move(arms), json::array(), json::object());
    return ctx.out_dir;
}

std::string run_aps_eval(const ExperimentContext& ctx) {
    fs::create_directories(fs::path(ctx.out_dir) / "plots");
    TrainConfig tcfg = ctx.train;
    tcfg.target = Target::aps;
    tcfg.seed = ctx.seeds.at(0);
    ModelConfig mcfg = ctx.model;
    const std::string name = "aps_s" + std::to_string(tcfg.seed);
    json arms = json::array();
    arms.push_back(run_arm(ctx, name, tcfg, mcfg));

    const fs::path run_dir = fs::path(ctx.out_dir) / "runs" / name;
    const EvalRecord rec =
        eval_record_from_json(read_text(run_dir / "eval_test.json"));
    json artifacts = json::array();

    std::vector<long long> counts(rec.cosine.histogram.size());
    for (Eigen::Index i = 0; i < rec.cosine.histogram.size(); ++i)
        counts[i] = rec.cosine.histogram(i);
    write_hist_svg((fs::path(ctx.out_dir) / "plots/cosine_hist.svg").string(),
                   "per-sample cosine similarity, held-out area", "cosine similarity", counts,
                   -1.0, 1.0);
    artifacts.push_back("plots/cosine_hist.svg");

    const auto rows = read_csv(run_dir / "predictions.csv");
    const int overlays = std::min<int>(ctx.overlay_count, static_cast<int>(rows.size()) - 1);
    for (int i = 0; i < overlays; ++i) {
        const auto& row = rows.at(i + 1);
        PlotSeries pred, target;
        pred.label = "prediction";
        target.label = "target";
        for (int k = 0; k < 360; ++k) {
            pred.x.push_back(k);
            pred.y.push_back(std::stod(row.at(1 + k)));
            target.x.push_back(k);
            target.y.push_back(std::stod(row.at(1 + 360 + k)));
        }
        const std::string plot = "plots/overlay_" + std::to_string(i) + "_" + row.at(0) + ".svg";
        write_line_svg((fs::path(ctx.out_dir) / plot).string(),
                       "angular power spectrum, sample " + row.at(0), "azimuth bin (deg)",
                       "normalized power", {target, pred});
        artifacts.push_back(plot);
    }
    json extra;
    extra["overlay_count"] = overlays;
    finish_experiment(ctx, "aps-eval", std::move(arms), std::move(artifacts), std::move(extra));
    return ctx.out_dir;
}

// --- reporting ------------------------------------------------------------------

namespace {

struct ArmData {
    json arm;
    json eval;
    json summary;
    json complexity;  // null unless stored
};

json row_from_arm(const ArmData& a) {
    json row;
    row["name"] = a.arm.at("name");
    row["target"] = a.arm.at("target");
    row["modalities"] = a.arm.at("modalities");
    row["backbone"] = a.arm.at("backbone");
    row["seed"] = a.arm.at("seed");
    if (a.arm.contains("variant")) row["variant"] = a.arm.at("variant");
    row["rmse"] = a.eval.at("rmse");
    row["mae"] = a.eval.at("mae");
    row["units"] = a.eval.value("units", "");
    row["n_test"] = a.eval.at("n");
    if (a.eval.contains("cosine")) row["cosine"] = a.eval.at("cosine");
    row["epochs_run"] = a.summary.value("epochs_run", 0);
    row["best_epoch"] = a.summary.value("best_epoch", 0);
    row["best_val"] = a.summary.value("best_val", 0.0);
    if (!a.complexity.is_null()) {
        for (const auto& [k, v] : a.complexity.items()) row[k] = v;
    }
    return row;
}

}  // namespace

void write_report(const std::string& exp_dir, const std::string& format) {
    if (format != "json" && format != "csv" && format != "both")
        throw std::invalid_argument("unknown report format: " + format);
    const json exp = json::parse(read_text(fs::path(exp_dir) / "exp.json"));
    const std::string id = exp.at("id").get<std::string>();

    std::vector<ArmData> arms;
    for (const auto& arm : exp.at("arms")) {
        ArmData a;
        a.arm = arm;
        const fs::path run_dir = fs::path(exp_dir) / arm.at("run_dir").get<std::string>();
        a.eval = json::parse(read_text(run_dir / "eval_test.json"));
        a.summary = json::parse(read_text(run_dir / "summary.json"));
        if (fs::exists(run_dir / "complexity.json"))
            a.complexity = json::parse(read_text(run_dir / "complexity.json"));
        arms.push_back(std::move(a));
    }

    json rows = json::array();
    for (const auto& a : arms) rows.push_back(row_from_arm(a));

    // Seed-averaged groups with a best marker per target (lowest mean RMSE).
    json groups = json::array();
    if (id == "modality-ablation") {
        std::map<std::pair<std::string, std::string>, std::vector<double>> rmse_by, mae_by;
        for (const auto& r : rows) {
            const auto key = std::make_pair(r.at("target").get<std::string>(),
                                            r.at("modalities").get<std::string>());
            rmse_by[key].push_back(r.at("rmse").get<double>());
            mae_by[key].push_back(r.at("mae").get<double>());
        }
        std::map<std::string, double> best_rmse;
        std::map<std::pair<std::string, std::string>, double> mean_rmse;
        for (const auto& [key, values] : rmse_by) {
            double mean = 0.0;
            for (const double v : values) mean += v;
            mean /= static_cast<double>(values.size());
            mean_rmse[key] = mean;
            const auto it = best_rmse.find(key.first);
            if (it == best_rmse.end() || mean < it->second) best_rmse[key.first] = mean;
        }
        for (const auto& [key, values] : rmse_by) {
            double mae_mean = 0.0;
            for (const double v : mae_by[key]) mae_mean += v;
            mae_mean /= static_cast<double>(mae_by[key].size());
            json g;
            g["target"] = key.first;
            g["modalities"] = key.second;
            g["seeds"] = values.size();
            g["rmse_mean"] = mean_rmse[key];
            g["mae_mean"] = mae_mean;
            g["best"] = mean_rmse[key] == best_rmse[key.first];
            groups.push_back(std::move(g));
        }
    }

    if (format == "json" || format == "both") {
        json report;
        report["schema"] = "vcpred-report/1";
        report["experiment"] = id;
        report["config"] = exp.at("config");
        report["data_dir"] = exp.at("data_dir");
        if (exp.contains("masked_data_dir")) report["masked_data_dir"] = exp.at("masked_data_dir");
        report["rows"] = rows;
        if (!groups.empty()) report["groups"] = groups;
        report["artifacts"] = exp.at("artifacts");
        write_text(fs::path(exp_dir) / "report.json", report.dump(2) + "\n");
    }
    if (format == "csv" || format == "both") {
        std::ostringstream csv;
        if (id == "backbone-sweep") {
            csv << "backbone,rmse,mae,params_total,params_trainable,flops,latency_ms,"
                   "samples_per_s,hardware\n";
            for (const auto& r : rows)
                csv << r.at("backbone").get<std::string>() << ','
                    << fmt_double(r.at("rmse").get<double>()) << ','
                    << fmt_double(r.at("mae").get<double>()) << ','
                    << r.value("params_total", 0LL) << ',' << r.value("params_trainable", 0LL)
                    << ',' << r.value("flops", 0LL) << ','
                    << fmt_double(r.value("latency_ms", 0.0)) << ','
                    << fmt_double(r.value("samples_per_s", 0.0)) << ",\""
                    << r.value("hardware", std::string()) << "\"\n";
        } else if (id == "aps-eval") {
            csv << "seed,n_test,rmse,mae,cos_mean,cos_median,cos_stddev,cos_min,cos_max\n";
            for (const auto& r : rows) {
                const json& c = r.at("cosine");
                csv << r.at("seed").get<std::uint64_t>() << ',' << r.at("n_test").get<int>() << ','
                    << fmt_double(r.at("rmse").get<double>()) << ','
                    << fmt_double(r.at("mae").get<double>()) << ','
                    << fmt_double(c.at("mean").get<double>()) << ','
                    << fmt_double(c.at("median").get<double>()) << ','
                    << fmt_double(c.at("stddev").get<double>()) << ','
                    << fmt_double(c.at("min").get<double>()) << ','
                    << fmt_double(c.at("max").get<double>()) << "\n";
            }
        } else if (id == "dynamic-removal") {
            csv << "variant,seed,rmse,mae,epochs_run\n";
            for (const auto& r : rows)
                csv << r.value("variant", std::string()) << ','
                    << r.at("seed").get<std::uint64_t>() << ','
                    << fmt_double(r.at("rmse").get<double>()) << ','
                    << fmt_double(r.at("mae").get<double>()) << ','
                    << r.at("epochs_run").get<int>() << "\n";
        } else {
            csv << "target,modalities,seed,rmse,mae,epochs_run,best\n";
            for (const auto& r : rows)
                csv << r.at("target").get<std::string>() << ','
                    << r.at("modalities").get<std::string>() << ','
                    << r.at("seed").get<std::uint64_t>() << ','
                    << fmt_double(r.at("rmse").get<double>()) << ','
                    << fmt_double(r.at("mae").get<double>()) << ','
                    << r.at("epochs_run").get<int>() << ",\n";
            for (const auto& g : groups)
                csv << g.at("target").get<std::string>() << ','
                    << g.at("modalities").get<std::string>() << ",mean,"
                    << fmt_double(g.at("rmse_mean").get<double>()) << ','
                    << fmt_double(g.at("mae_mean").get<double>()) << ",,"
                    << (g.at("best").get<bool>() ? "*" : "") << "\n";
        }
        write_text(fs::path(exp_dir) / "report.csv", csv.str());
    }
}

}  // namespace vcpred
