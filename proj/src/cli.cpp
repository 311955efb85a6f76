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

#include "vcpred/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vcpred/checkpoint.hpp"
#include "vcpred/experiments.hpp"
#include "vcpred/plot.hpp"
#include "vcpred/train.hpp"

namespace vcpred {

namespace fs = std::filesystem;

namespace {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Train-config overrides shared by `train` and the experiment subcommands.
/// Sentinels mean "keep the per-target default".
struct Overrides {
    int epochs = -1;
    int batch = -1;
    int patience = -1;
    double val_fraction = -1.0;
    std::string test_area;
};

void add_override_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--epochs", o.epochs, "Cap on training epochs");
    cmd->add_option("--batch", o.batch, "Mini-batch size");
    cmd->add_option("--patience", o.patience, "Early-stop patience in epochs");
    cmd->add_option("--val-fraction", o.val_fraction,
                    "Fraction of training snapshots held out for validation");
    cmd->add_option("--test-area", o.test_area, "Area id reserved for the test split");
}

void apply(const Overrides& o, TrainConfig& tcfg) {
    if (o.epochs >= 0) tcfg.max_epochs = o.epochs;
    if (o.batch >= 0) tcfg.batch_size = o.batch;
    if (o.patience >= 0) tcfg.early_stop_patience = o.patience;
    if (o.val_fraction >= 0.0) tcfg.val_fraction = o.val_fraction;
    if (!o.test_area.empty()) tcfg.test_area = o.test_area;
}

std::vector<Target> parse_targets(const std::vector<std::string>& names) {
    std::vector<Target> targets;
    for (const auto& name : names) targets.push_back(target_from_string(name));
    return targets;
}

std::vector<Backbone> parse_backbones(const std::vector<std::string>& names) {
    std::vector<Backbone> backbones;
    for (const auto& name : names) backbones.push_back(backbone_from_string(name));
    return backbones;
}

void write_curve_plot(const RunSummary& summary, const std::string& run_dir) {
    PlotSeries train_s, val_s;
    train_s.label = "train";
    val_s.label = "validation";
    for (const EpochPoint& p : summary.curve) {
        train_s.x.push_back(p.epoch);
        train_s.y.push_back(p.train_loss);
        val_s.x.push_back(p.epoch);
        val_s.y.push_back(p.val_loss);
    }
    write_line_svg((fs::path(run_dir) / "curves.svg").string(),
                   "loss, " + to_string(summary.target), "epoch", "loss", {train_s, val_s});
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"vcpred: panorama and location based V2I channel prediction"};
    app.require_subcommand(1);

    // gen-data -----------------------------------------------------------------
    auto* gen = app.add_subcommand("gen-data", "Generate a synthetic snapshot corpus");
    GenConfig gcfg;
    std::string gen_out;
    gen->add_option("--out", gen_out, "Dataset directory")->required();
    gen->add_option("--seed", gcfg.seed, "Corpus seed");
    gen->add_option("--areas", gcfg.areas, "Number of scene areas");
    gen->add_option("--per-area", gcfg.per_area, "Trajectory snapshots per area");
    gen->add_flag("--masked", gcfg.masked, "Mask dynamic scatterers out of the panoramas");
    gen->callback([&] {
        const DatasetManifest m = generate_dataset(gcfg, gen_out);
        std::cout << "wrote " << m.sample_count << " samples to " << gen_out << " (hash "
                  << m.content_hash_hex << ")\n";
    });

    // train --------------------------------------------------------------------
    auto* tr = app.add_subcommand("train", "Train one predictor into a run directory");
    std::string tr_data, tr_out, tr_target = "pl", tr_config, tr_modalities, tr_backbone;
    std::uint64_t tr_seed = 0;
    bool tr_plots = false;
    Overrides tr_over;
    tr->add_option("--data", tr_data, "Dataset directory")->required();
    tr->add_option("--out", tr_out, "Run directory")->required();
    auto* tr_target_opt = tr->add_option("--target", tr_target, "pl, ds, asa, asd or aps");
    tr->add_option("--config", tr_config, "JSON file with train-config overrides");
    auto* tr_seed_opt = tr->add_option("--seed", tr_seed, "Run seed");
    tr->add_option("--modalities", tr_modalities,
                   "Active branches, e.g. semantic+depth+gps or semantic");
    tr->add_option("--backbone", tr_backbone, "residual-34 or compact-conv");
    add_override_flags(tr, tr_over);
    tr->add_flag("--plots", tr_plots, "Also render curves.svg");
    tr->callback([&] {
        TrainConfig tcfg = tr_config.empty()
                               ? default_train_config(target_from_string(tr_target))
                               : train_config_from_json(read_text_file(tr_config));
        if (!tr_config.empty() && tr_target_opt->count() > 0)
            tcfg.target = target_from_string(tr_target);
        if (tr_seed_opt->count() > 0) tcfg.seed = tr_seed;
        apply(tr_over, tcfg);
        ModelConfig mcfg;
        if (!tr_modalities.empty()) mcfg.modalities = Modalities::from_string(tr_modalities);
        if (!tr_backbone.empty()) mcfg.backbone = backbone_from_string(tr_backbone);
        const RunSummary summary = train(tr_data, tcfg, mcfg, tr_out);
        if (tr_plots) write_curve_plot(summary, tr_out);
        std::cout << "trained " << to_string(summary.target) << " for " << summary.epochs_run
                  << " epochs, best val " << summary.best_val << " at epoch "
                  << summary.best_epoch << (summary.early_stopped ? " (early stop)" : "")
                  << " -> " << tr_out << "\n";
    });

    // eval ---------------------------------------------------------------------
    auto* ev = app.add_subcommand("eval", "Evaluate a run directory on one split");
    std::string ev_run = "run", ev_data, ev_split = "test", ev_target;
    ev->add_option("--run", ev_run, "Run directory (default ./run)");
    ev->add_option("--data", ev_data, "Dataset directory")->required();
    ev->add_option("--split", ev_split, "train, val or test");
    ev->add_option("--target", ev_target, "Cross-check against the checkpoint target");
    ev->callback([&] {
        if (!ev_target.empty()) {
            const CheckpointMeta meta =
                peek_checkpoint((fs::path(ev_run) / "checkpoint").string());
            const ModelConfig stored = model_config_from_json(meta.model_config_json);
            if (stored.target != target_from_string(ev_target))
                throw std::runtime_error("target mismatch: checkpoint holds " +
                                         to_string(stored.target) + ", requested " + ev_target);
        }
        const EvalRecord rec = evaluate(ev_run, ev_data, ev_split);
        std::cout << to_string(rec.target) << " " << rec.split << " n=" << rec.n
                  << " rmse=" << rec.rmse << " mae=" << rec.mae;
        if (rec.target == Target::aps) std::cout << " cosine_mean=" << rec.cosine.mean;
        std::cout << "\n";
    });

    // experiments ----------------------------------------------------------------
    ExperimentContext ctx;
    std::vector<std::string> x_targets{"pl", "ds", "asa", "asd"};
    std::vector<std::string> x_backbones{"residual-34", "compact-conv"};
    std::string x_target = "pl", x_backbone;
    std::uint64_t x_seed = 1;
    Overrides x_over;

    auto* e1 = app.add_subcommand("exp1", "Modality ablation: retrain the branch combinations");
    e1->add_option("--data", ctx.data_dir, "Dataset directory")->required();
    e1->add_option("--out", ctx.out_dir, "Experiment directory")->required();
    e1->add_option("--targets", x_targets, "Scalar targets to cover")->delimiter(',');
    auto* e1_seeds =
        e1->add_option("--seeds", ctx.seeds, "Seeds, one full retrain set each")->delimiter(',');
    e1->add_option("--backbone", x_backbone, "residual-34 or compact-conv");
    add_override_flags(e1, x_over);
    e1->callback([&] {
        if (e1_seeds->count() == 0) ctx.seeds = {1, 2, 3};
        ctx.targets = parse_targets(x_targets);
        if (!x_backbone.empty()) ctx.model.backbone = backbone_from_string(x_backbone);
        apply(x_over, ctx.train);
        std::cout << "modality ablation -> " << run_modality_ablation(ctx) << "\n";
    });

    auto* e2 = app.add_subcommand("exp2", "Dynamic-removal study on a paired corpus");
    e2->add_option("--data", ctx.data_dir, "Raw dataset directory")->required();
    e2->add_option("--masked-data", ctx.masked_data_dir, "Masked paired dataset")->required();
    e2->add_option("--out", ctx.out_dir, "Experiment directory")->required();
    e2->add_option("--target", x_target, "Scalar target");
    e2->add_option("--seeds", ctx.seeds, "Seeds, one raw+masked pair each")->delimiter(',');
    e2->add_option("--backbone", x_backbone, "residual-34 or compact-conv");
    add_override_flags(e2, x_over);
    e2->callback([&] {
        ctx.train = default_train_config(target_from_string(x_target));
        if (!x_backbone.empty()) ctx.model.backbone = backbone_from_string(x_backbone);
        apply(x_over, ctx.train);
        std::cout << "dynamic removal -> " << run_dynamic_removal(ctx) << "\n";
    });

    auto* e3 = app.add_subcommand("exp3", "Backbone sweep with complexity columns");
    e3->add_option("--data", ctx.data_dir, "Dataset directory")->required();
    e3->add_option("--out", ctx.out_dir, "Experiment directory")->required();
    e3->add_option("--backbones", x_backbones, "Backbones to sweep")->delimiter(',');
    e3->add_option("--target", x_target, "Scalar target");
    e3->add_option("--seed", x_seed, "Run seed");
    e3->add_option("--latency-batch", ctx.latency_batch, "Batch size for the timing pass");
    e3->add_option("--latency-reps", ctx.latency_reps, "Repetitions for the timing pass");
    add_override_flags(e3, x_over);
    e3->callback([&] {
        ctx.train = default_train_config(target_from_string(x_target));
        ctx.seeds = {x_seed};
        ctx.backbones = parse_backbones(x_backbones);
        apply(x_over, ctx.train);
        std::cout << "backbone sweep -> " << run_backbone_sweep(ctx) << "\n";
    });

    auto* e4 = app.add_subcommand("exp4", "APS evaluation: cosine histogram and overlays");
    e4->add_option("--data", ctx.data_dir, "Dataset directory")->required();
    e4->add_option("--out", ctx.out_dir, "Experiment directory")->required();
    e4->add_option("--seed", x_seed, "Run seed");
    e4->add_option("--overlays", ctx.overlay_count, "Number of target/prediction overlays");
    e4->add_option("--backbone", x_backbone, "residual-34 or compact-conv");
    add_override_flags(e4, x_over);
    e4->callback([&] {
        ctx.train = default_train_config(Target::aps);
        ctx.seeds = {x_seed};
        if (!x_backbone.empty()) ctx.model.backbone = backbone_from_string(x_backbone);
        apply(x_over, ctx.train);
        std::cout << "aps eval -> " << run_aps_eval(ctx) << "\n";
    });

    // report -------------------------------------------------------------------
    auto* rep = app.add_subcommand("report", "Regenerate report files from an experiment dir");
    std::string rep_out, rep_format = "both";
    rep->add_option("--out", rep_out, "Experiment directory")->required();
    rep->add_option("--format", rep_format, "json, csv or both")
        ->check(CLI::IsMember({"json", "csv", "both"}));
    rep->callback([&] {
        write_report(rep_out, rep_format);
        std::cout << "report regenerated in " << rep_out << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // help request
            std::cout << app.help();
            return 0;
        }
        std::cerr << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace vcpred
