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

// Release gate.  Each test case checks one acceptance criterion end to end
// and prints a single [PASS]/[FAIL] line with the measured numbers, so the
// log of a full run reads as a ten-line report.  Numeric tolerances are
// pinned here, not in a config, on purpose: moving them is a code review.
//
// The two training criteria regenerate their corpora from fixed seeds and
// train at budgets calibrated on this corpus family (see the constants
// below); everything else is closed-form or oracle-backed and fast.

#include "doctest.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "vcpred/channel_stats.hpp"
#include "vcpred/dataset.hpp"
#include "vcpred/experiments.hpp"
#include "vcpred/geodesy.hpp"
#include "vcpred/losses.hpp"
#include "vcpred/model.hpp"
#include "vcpred/nn.hpp"
#include "vcpred/optim.hpp"
#include "vcpred/rng.hpp"
#include "vcpred/scene.hpp"
#include "vcpred/tensor.hpp"
#include "vcpred/train.hpp"
#include "oracles.hpp"

using namespace vcpred;
namespace fs = std::filesystem;

namespace {

// Training budgets, calibrated once on the seeded corpora used below.
// Overfit: 64 samples, private pilot reached 0.56 dB at 120 epochs (PL) and
// train cosine 0.987 at 60 epochs (APS), both in under three minutes.
constexpr int kOverfitPlEpochs = 120;
constexpr int kOverfitApsEpochs = 60;
// Ablation: 1000 samples, 4 branch combinations x 3 seeds.  The trimodal
// model needs enough epochs for the depth branch to stop hurting; 40 was the
// first budget where the modality ordering settled in the pilot.
constexpr int kAblationEpochs = 40;
constexpr int kApsEvalEpochs = 30;

fs::path accept_root() {
    static const fs::path root = [] {
        const fs::path p = fs::temp_directory_path() / "vcpred_acceptance";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return root;
}

void report(int id, const std::string& text, bool ok) {
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", id, text.c_str());
    std::fflush(stdout);
    CHECK_MESSAGE(ok, "criterion ", id, ": ", text);
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Error normalized the way doctest's Approx does it: relative for large
// magnitudes, absolute near zero.  A pure ratio is meaningless for spreads,
// whose derivative with respect to the mean resultant diverges as the
// spread approaches zero.
double norm_err(double got, double want) {
    return std::abs(got - want) / (1.0 + std::max(std::abs(got), std::abs(want)));
}

// Same amplitude span as the library's documented random family; delays and
// azimuths range wider so wrap handling is exercised past both circle ends.
MpcSet random_wide_set(CounterRng& rng) {
    MpcSet s;
    s.snapshot_id = "accept";
    const auto n = rng.uniform_int(1, 64);
    for (std::int64_t i = 0; i < n; ++i) {
        Mpc c;
        c.amplitude = std::pow(10.0, rng.uniform(-4.0, -1.0));
        c.phase_rad = rng.uniform(0.0, 2.0 * M_PI);
        c.delay_ns = rng.uniform(0.0, 2000.0);
        c.aod_deg = rng.uniform(-360.0, 720.0);
        c.aoa_deg = rng.uniform(-360.0, 720.0);
        s.components.push_back(c);
    }
    return s;
}

Eigen::MatrixXd random_rows(CounterRng& rng, int rows, double lo, double hi) {
    Eigen::MatrixXd m(rows, 360);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < 360; ++c) m(r, c) = rng.uniform(lo, hi);
    return m;
}

Sample random_sample(std::uint64_t seed, double along_m) {
    Sample s;
    s.semantic_in = Tensor::zeros({3, 224, 224});
    s.depth_in = Tensor::zeros({3, 224, 224});
    CounterRng rng(seed, "accept-sample");
    for (auto& v : s.semantic_in.data) v = static_cast<float>(rng.uniform());
    for (auto& v : s.depth_in.data) v = static_cast<float>(rng.uniform());
    s.tx_geo = {40.0, -105.0};
    s.rx_geo = to_geodetic(s.tx_geo, along_m, 0.0);
    s.snapshot_id = "a" + std::to_string(seed);
    s.area_id = "area0";
    return s;
}

ModelBatch batch_of(const std::vector<Sample>& samples) {
    std::vector<const Sample*> ptrs;
    for (const auto& s : samples) ptrs.push_back(&s);
    return make_batch(ptrs);
}

// Exhaustive triplet matcher: maximize the match count, then minimize the
// summed offsets.  Written as plain branch-and-bound with no code shared
// with the greedy implementation under test.
struct ExhaustiveSync {
    const std::vector<double>* channel;
    const std::vector<double>* image;
    const std::vector<double>* gps;
    double max_offset;
    int best_count = -1;
    double best_total = 0.0;
    std::vector<SyncTriplet> best;
    std::vector<SyncTriplet> current;
    std::vector<bool> image_used;
    std::vector<bool> gps_used;

    void search(std::size_t c, double total) {
        const int potential =
            static_cast<int>(current.size()) + static_cast<int>(channel->size() - c);
        if (potential < best_count) return;
        if (potential == best_count && total >= best_total && best_count >= 0) return;
        if (c == channel->size()) {
            const int count = static_cast<int>(current.size());
            if (count > best_count || (count == best_count && total < best_total)) {
                best_count = count;
                best_total = total;
                best = current;
            }
            return;
        }
        const double t = (*channel)[c];
        for (std::size_t im = 0; im < image->size(); ++im) {
            if (image_used[im] || std::abs((*image)[im] - t) > max_offset) continue;
            for (std::size_t gp = 0; gp < gps->size(); ++gp) {
                if (gps_used[gp] || std::abs((*gps)[gp] - t) > max_offset) continue;
                image_used[im] = true;
                gps_used[gp] = true;
                current.push_back(
                    {static_cast<int>(c), static_cast<int>(im), static_cast<int>(gp)});
                search(c + 1,
                       total + std::abs((*image)[im] - t) + std::abs((*gps)[gp] - t));
                current.pop_back();
                image_used[im] = false;
                gps_used[gp] = false;
            }
        }
        search(c + 1, total);
    }
};

std::vector<SyncTriplet> exhaustive_synchronize(const std::vector<double>& channel,
                                                const std::vector<double>& image,
                                                const std::vector<double>& gps,
                                                double max_offset) {
    ExhaustiveSync st;
    st.channel = &channel;
    st.image = &image;
    st.gps = &gps;
    st.max_offset = max_offset;
    st.image_used.assign(image.size(), false);
    st.gps_used.assign(gps.size(), false);
    st.search(0, 0.0);
    return st.best;
}

}  // namespace

// --- 1: channel statistics against brute-force recomputation ---------------

TEST_CASE("channel statistics match brute-force recomputation") {
    const auto t0 = std::chrono::steady_clock::now();
    CounterRng rng(2026, "accept-stats");
    double worst_sum = 0.0, worst_stat = 0.0, worst_aps = 0.0;
    bool ok = true;
    for (int trial = 0; trial < 1000; ++trial) {
        const MpcSet s = random_wide_set(rng);

        const double p_rel = norm_err(total_power(s), oracles::total_power(s));
        worst_sum = std::max(worst_sum, p_rel);
        ok = ok && p_rel <= 1e-12;

        const double pl_rel = norm_err(path_loss_db(s), oracles::path_loss_db(s));
        worst_stat = std::max(worst_stat, pl_rel);
        ok = ok && pl_rel <= 1e-9;

        const double ds_rel = norm_err(rms_delay_spread_ns(s), oracles::rms_delay_spread_ns(s));
        worst_stat = std::max(worst_stat, ds_rel);
        ok = ok && ds_rel <= 1e-9;

        for (const bool arrival : {true, false}) {
            const double r = norm_err(
                azimuth_spread_deg(s, arrival ? AngleSide::arrival : AngleSide::departure),
                oracles::azimuth_spread_deg(s, arrival));
            worst_stat = std::max(worst_stat, r);
            ok = ok && r <= 1e-9;
        }

        const Eigen::VectorXd got_aps = aps_360(s);
        const std::vector<double> want_aps = oracles::aps_360(s);
        REQUIRE(got_aps.size() == 360);
        for (int k = 0; k < 360; ++k) {
            const double d = std::abs(got_aps(k) - want_aps[static_cast<std::size_t>(k)]);
            worst_aps = std::max(worst_aps, d);
            ok = ok && d <= 1e-9;
        }
    }
    const double elapsed = seconds_since(t0);
    ok = ok && elapsed < 10.0;

    char line[256];
    std::snprintf(line, sizeof line,
                  "1000 random snapshots: worst power err %.2e (<= 1e-12), worst stat "
                  "err %.2e (<= 1e-9), worst spectrum abs %.2e, %.2f s",
                  worst_sum, worst_stat, worst_aps, elapsed);
    report(1, line, ok);
}

// --- 2: closed-form spot checks ---------------------------------------------

TEST_CASE("closed-form delay and angle spreads") {
    MpcSet two_delay;
    two_delay.snapshot_id = "two-delay";
    two_delay.components = {Mpc{1.0, 0.0, 0.0, 10.0, 20.0}, Mpc{1.0, 0.0, 100.0, 10.0, 20.0}};
    const double ds = rms_delay_spread_ns(two_delay);
    const bool ds_ok = std::abs(ds - 50.0) <= 1e-9;

    MpcSet two_angle;
    two_angle.snapshot_id = "two-angle";
    two_angle.components = {Mpc{1.0, 0.0, 0.0, 0.0, 0.0}, Mpc{1.0, 0.0, 0.0, 90.0, 90.0}};
    const double want_deg = std::sqrt(std::log(2.0)) * 180.0 / M_PI;
    const double asa = azimuth_spread_deg(two_angle, AngleSide::arrival);
    const double asd = azimuth_spread_deg(two_angle, AngleSide::departure);
    const bool angle_ok = std::abs(asa - want_deg) <= 1e-6 && std::abs(asd - want_deg) <= 1e-6;

    MpcSet single;
    single.snapshot_id = "single";
    single.components = {Mpc{0.5, 1.0, 700.0, 33.0, 251.0}};
    const bool single_ok = rms_delay_spread_ns(single) == 0.0 &&
                           azimuth_spread_deg(single, AngleSide::arrival) == 0.0 &&
                           azimuth_spread_deg(single, AngleSide::departure) == 0.0;

    char line[256];
    std::snprintf(line, sizeof line,
                  "two-path spread %.12f ns, 0/90 deg spread %.9f deg (want %.9f), "
                  "single-path spreads %s zero",
                  ds, asa, want_deg, single_ok ? "exactly" : "NOT");
    report(2, line, ds_ok && angle_ok && single_ok);
}

// --- 3: composite loss and its gradient -------------------------------------

TEST_CASE("composite loss identities and gradient check") {
    const auto t0 = std::chrono::steady_clock::now();
    const LossConfig cfg;
    CounterRng rng(2027, "accept-loss");
    bool ok = true;

    double worst_perfect = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::MatrixXd t = random_rows(rng, 4, 0.0, 1.0);
        for (int r = 0; r < t.rows(); ++r) t.row(r) /= t.row(r).maxCoeff();
        const double total = composite_aps_loss(t, t, cfg).total;
        worst_perfect = std::max(worst_perfect, total);
        ok = ok && total <= 1e-6;
    }

    Eigen::MatrixXd one_t = Eigen::MatrixXd::Zero(1, 360);
    Eigen::MatrixXd one_p = Eigen::MatrixXd::Zero(1, 360);
    one_t(0, 0) = 1.0;
    one_p(0, 180) = 1.0;
    const double one_hot = composite_aps_loss(one_t, one_p, cfg).total;
    ok = ok && std::abs(one_hot - 1.00225) <= 1e-6;

    double worst_grad = 0.0;
    const double step = 1e-6;
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::MatrixXd t = random_rows(rng, 1, 0.0, 1.0);
        if (trial % 4 == 0) t(0, static_cast<int>(rng.uniform_int(0, 359))) = 0.5;
        const Eigen::MatrixXd p = random_rows(rng, 1, 0.01, 0.99);
        const Eigen::MatrixXd g = composite_aps_loss_grad(t, p, cfg);
        Eigen::MatrixXd fd(1, 360);
        for (int k = 0; k < 360; ++k) {
            Eigen::MatrixXd hi = p, lo = p;
            hi(0, k) += step;
            lo(0, k) -= step;
            fd(0, k) = (composite_aps_loss(t, hi, cfg).total -
                        composite_aps_loss(t, lo, cfg).total) /
                       (2.0 * step);
        }
        const double rel = (g - fd).norm() / std::max(fd.norm(), 1e-12);
        worst_grad = std::max(worst_grad, rel);
        ok = ok && rel < 1e-4;
    }

    const double elapsed = seconds_since(t0);
    ok = ok && elapsed < 60.0;

    char line[256];
    std::snprintf(line, sizeof line,
                  "perfect-prediction loss <= %.2e, one-hot total %.8f, worst gradient "
                  "rel %.2e over 100 points, %.2f s",
                  worst_perfect, one_hot, worst_grad, elapsed);
    report(3, line, ok);
}

// --- 4: circular equivariance of the spectrum smoother ----------------------

TEST_CASE("spectrum smoother commutes with circular shifts") {
    nn::CircularConv1d<float> smooth("smooth", 5);
    CounterRng rng(2028, "accept-circ");
    std::vector<nn::ParamRef<float>> refs;
    smooth.collect(refs, "");
    for (auto& r : refs)
        for (Eigen::Index i = 0; i < r.value->size(); ++i)
            (*r.value)(i) = static_cast<float>(rng.uniform(-1.0, 1.0));

    Eigen::MatrixXf x(360, 4);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = static_cast<float>(rng.uniform());

    const auto shift_rows = [](const Eigen::MatrixXf& m, int k) {
        Eigen::MatrixXf out(m.rows(), m.cols());
        const int n = static_cast<int>(m.rows());
        for (int r = 0; r < n; ++r) out.row((r + k) % n) = m.row(r);
        return out;
    };

    const Eigen::MatrixXf base = smooth.forward(x, false);
    float worst = 0.0f;
    for (const int k : {1, 90, 180, 359}) {
        const Eigen::MatrixXf shifted_then_smoothed = smooth.forward(shift_rows(x, k), false);
        const Eigen::MatrixXf smoothed_then_shifted = shift_rows(base, k);
        worst = std::max(worst,
                         (shifted_then_smoothed - smoothed_then_shifted).cwiseAbs().maxCoeff());
    }
    char line[128];
    std::snprintf(line, sizeof line,
                  "shift k in {1,90,180,359}: max deviation %.2e with random taps", worst);
    report(4, line, worst < 1e-6f);
}

// --- 5: output ranges and frozen stages -------------------------------------

TEST_CASE("output constraints hold and frozen stages stay bitwise fixed") {
    bool range_ok = true;
    long long checked = 0;
    {
        ModelConfig scalar_cfg;
        scalar_cfg.backbone = Backbone::compact;
        scalar_cfg.freeze_semantic = false;
        scalar_cfg.target = Target::pl;
        scalar_cfg.distance_mean_m = 90.0;
        scalar_cfg.distance_std_m = 50.0;
        scalar_cfg.seed = 7;
        PredictorNet scalar_net(scalar_cfg);

        ModelConfig aps_cfg = scalar_cfg;
        aps_cfg.target = Target::aps;
        PredictorNet aps_net(aps_cfg);

        CounterRng rng(2029, "accept-range");
        std::uint64_t sample_seed = 1;
        for (int b = 0; b < 125 && range_ok; ++b) {
            std::vector<Sample> samples;
            for (int i = 0; i < 4; ++i)
                samples.push_back(random_sample(sample_seed++, rng.uniform(5.0, 200.0)));
            const ModelBatch batch = batch_of(samples);
            const bool train_mode = b % 2 == 1;

            const Eigen::MatrixXf sp = scalar_net.forward(batch, train_mode);
            range_ok = range_ok && (sp.array() > 0.0f).all();
            const Eigen::MatrixXf& sg = scalar_net.last_gate();
            range_ok = range_ok && (sg.array() > 0.0f).all() && (sg.array() < 1.0f).all();

            const Eigen::MatrixXf ap = aps_net.forward(batch, train_mode);
            range_ok = range_ok && (ap.array() > 0.0f).all() && (ap.array() < 1.0f).all();
            const Eigen::MatrixXf& ag = aps_net.last_gate();
            range_ok = range_ok && (ag.array() > 0.0f).all() && (ag.array() < 1.0f).all();
            checked += sp.size() + ap.size();
        }
    }

    // Transfer-learning contract: everything under the frozen stages of the
    // residual backbone, including the normalization statistics, is bitwise
    // identical after real optimizer steps.
    ModelConfig frozen_cfg;
    frozen_cfg.backbone = Backbone::residual34;
    frozen_cfg.freeze_semantic = true;
    frozen_cfg.modalities = {true, false, true};
    frozen_cfg.target = Target::pl;
    frozen_cfg.distance_mean_m = 50.0;
    frozen_cfg.distance_std_m = 30.0;
    frozen_cfg.seed = 11;
    PredictorNet net(frozen_cfg);

    const auto is_frozen_stage = [](const std::string& name) {
        return name.find("backbone.stem") != std::string::npos ||
               name.find("backbone.layer1") != std::string::npos ||
               name.find("backbone.layer2") != std::string::npos;
    };
    std::vector<Eigen::MatrixXf> before;
    for (const auto& r : net.params())
        if ((!r.buffer && !r.trainable) || (r.buffer && is_frozen_stage(r.name)))
            before.push_back(*r.value);
    REQUIRE(!before.empty());
    std::vector<Eigen::MatrixXf> live_before;
    for (const auto& r : net.params())
        if (!r.buffer && r.trainable) live_before.push_back(*r.value);

    auto params = net.params();
    Adam opt(params, AdamConfig{}, Adam::single_group(params, 1e-3, 0.0));
    const std::vector<Sample> samples = {random_sample(9001, 40.0)};
    const ModelBatch batch = batch_of(samples);
    for (int step = 0; step < 10; ++step) {
        opt.zero_grad();
        const Eigen::MatrixXf pred = net.forward(batch, true);
        net.backward(pred);
        opt.step(1.0);
    }

    bool frozen_ok = true;
    std::size_t fi = 0;
    for (const auto& r : net.params())
        if ((!r.buffer && !r.trainable) || (r.buffer && is_frozen_stage(r.name)))
            frozen_ok = frozen_ok && *r.value == before[fi++];
    frozen_ok = frozen_ok && fi == before.size();

    bool any_moved = false;
    std::size_t li = 0;
    for (const auto& r : net.params())
        if (!r.buffer && r.trainable) any_moved = any_moved || *r.value != live_before[li++];

    char line[256];
    std::snprintf(line, sizeof line,
                  "%lld predictions in range with gates in (0,1); %zu frozen tensors "
                  "bitwise stable over 10 optimizer steps (live weights %s)",
                  checked, before.size(), any_moved ? "moved" : "DID NOT MOVE");
    report(5, line, range_ok && frozen_ok && any_moved);
}

// --- 6: overfit sanity -------------------------------------------------------

TEST_CASE("small-corpus overfit reaches the calibrated thresholds") {
    const fs::path data = accept_root() / "overfit_data";
    GenConfig gen;
    gen.seed = 21;
    gen.areas = 2;
    gen.per_area = 64;
    generate_dataset(gen, data.string());
    const DatasetManifest manifest = read_manifest(data.string());
    REQUIRE(manifest.sample_count == 128);
    REQUIRE(manifest.area_counts.at("area1") == 64);

    // area2 only exists to satisfy the held-out-area contract; the train
    // split is exactly the 64 area1 snapshots.
    TrainConfig pl_cfg = default_train_config(Target::pl);
    pl_cfg.max_epochs = kOverfitPlEpochs;
    pl_cfg.early_stop_patience = 200;
    pl_cfg.val_fraction = 0.0;
    pl_cfg.test_area = "area2";
    pl_cfg.seed = 1;
    ModelConfig mcfg;
    mcfg.backbone = Backbone::compact;

    const fs::path pl_run = accept_root() / "overfit_pl";
    auto t0 = std::chrono::steady_clock::now();
    train(data.string(), pl_cfg, mcfg, pl_run.string());
    const double pl_s = seconds_since(t0);
    const EvalRecord pl_eval = evaluate(pl_run.string(), data.string(), "train");
    REQUIRE(pl_eval.n == 64);
    const bool pl_ok = pl_eval.rmse < 1.0 && pl_s < 300.0;

    TrainConfig aps_cfg = default_train_config(Target::aps);
    aps_cfg.max_epochs = kOverfitApsEpochs;
    aps_cfg.early_stop_patience = 200;
    aps_cfg.val_fraction = 0.0;
    aps_cfg.test_area = "area2";
    aps_cfg.seed = 1;

    const fs::path aps_run = accept_root() / "overfit_aps";
    t0 = std::chrono::steady_clock::now();
    train(data.string(), aps_cfg, mcfg, aps_run.string());
    const double aps_s = seconds_since(t0);
    const EvalRecord aps_eval = evaluate(aps_run.string(), data.string(), "train");
    REQUIRE(aps_eval.n == 64);
    const bool aps_ok = aps_eval.cosine.mean > 0.95 && aps_s < 300.0;

    char line[256];
    std::snprintf(line, sizeof line,
                  "64-sample overfit: pl train rmse %.3f dB in %.0f s (< 1.0 dB, < 300 s); "
                  "aps train cosine %.4f in %.0f s (> 0.95, < 300 s)",
                  pl_eval.rmse, pl_s, aps_eval.cosine.mean, aps_s);
    report(6, line, pl_ok && aps_ok);
}

// --- 7: directional modality ablation ---------------------------------------

TEST_CASE("modality ablation shows the expected ordering on a held-out area") {
    const fs::path data = accept_root() / "ablation_data";
    GenConfig gen;
    gen.seed = 3;
    gen.areas = 5;
    gen.per_area = 200;
    generate_dataset(gen, data.string());
    const DatasetManifest manifest = read_manifest(data.string());
    REQUIRE(manifest.sample_count == 1000);
    REQUIRE(manifest.area_counts.at("area5") == 200);

    ExperimentContext ctx;
    ctx.data_dir = data.string();
    ctx.out_dir = (accept_root() / "ablation_exp").string();
    ctx.train = default_train_config(Target::pl);
    ctx.train.max_epochs = kAblationEpochs;
    ctx.train.test_area = "area5";
    ctx.model.backbone = Backbone::compact;
    ctx.targets = {Target::pl};
    ctx.seeds = {1, 2, 3};
    run_modality_ablation(ctx);

    const auto rmse_of = [&](const std::string& tag, std::uint64_t seed) {
        const fs::path p = fs::path(ctx.out_dir) / "runs" /
                           ("pl_" + tag + "_s" + std::to_string(seed)) / "eval_test.json";
        const EvalRecord rec = eval_record_from_json(slurp(p));
        REQUIRE(rec.n == 200);
        return rec.rmse;
    };

    int passes = 0;
    std::string detail;
    for (const std::uint64_t seed : {1, 2, 3}) {
        const double tri = rmse_of("sem-depth-gps", seed);
        const double bi_depth = rmse_of("sem-depth", seed);
        const double bi_gps = rmse_of("sem-gps", seed);
        const double sem = rmse_of("sem", seed);
        const bool tri_best = tri <= bi_depth && tri <= bi_gps;
        const bool bi_better = bi_depth <= sem && bi_gps <= sem;
        passes += (tri_best ? 1 : 0) + (bi_better ? 1 : 0);
        char buf[96];
        std::snprintf(buf, sizeof buf, " s%llu[%.2f|%.2f,%.2f|%.2f]",
                      static_cast<unsigned long long>(seed), tri, bi_depth, bi_gps, sem);
        detail += buf;
    }

    ExperimentContext aps_ctx;
    aps_ctx.data_dir = data.string();
    aps_ctx.out_dir = (accept_root() / "aps_exp").string();
    aps_ctx.train = default_train_config(Target::aps);
    aps_ctx.train.max_epochs = kApsEvalEpochs;
    aps_ctx.train.test_area = "area5";
    aps_ctx.model.backbone = Backbone::compact;
    aps_ctx.seeds = {1};
    run_aps_eval(aps_ctx);
    const EvalRecord aps_rec = eval_record_from_json(
        slurp(fs::path(aps_ctx.out_dir) / "runs" / "aps_s1" / "eval_test.json"));
    REQUIRE(aps_rec.n == 200);

    char line[320];
    std::snprintf(line, sizeof line,
                  "orderings held %d/6 (need >= 4), rmse%s; aps test cosine %.4f (>= 0.85)",
                  passes, detail.c_str(), aps_rec.cosine.mean);
    report(7, line, passes >= 4 && aps_rec.cosine.mean >= 0.85);
}

// --- 8: dynamic-removal pipeline --------------------------------------------

TEST_CASE("dynamic masking removes the transient classes end to end") {
    // Mask invariant at the panorama level, where the mask operates.
    const SceneConfig sc = area_config(0);
    const Scene scene = generate_scene(sc);
    const std::vector<RxPose> poses = sample_trajectory(scene, 12, sc);
    bool saw_dynamic = false, saw_sky = false, saw_road = false;
    bool mask_ok = true, idempotent = true;
    for (const RxPose& pose : poses) {
        const Panorama pano = render_panorama(scene, pose);
        const Panorama masked = mask_dynamic(pano);
        for (int r = 0; r < Panorama::kHeight && mask_ok; ++r)
            for (int c = 0; c < Panorama::kWidth; ++c) {
                const auto before = static_cast<SemanticClass>(pano.semantic(r, c));
                const auto after = static_cast<SemanticClass>(masked.semantic(r, c));
                saw_dynamic = saw_dynamic || before == SemanticClass::vehicle ||
                              before == SemanticClass::pedestrian;
                saw_sky = saw_sky || before == SemanticClass::sky;
                saw_road = saw_road || before == SemanticClass::road;
                const bool was_masked =
                    before == SemanticClass::sky || before == SemanticClass::road ||
                    before == SemanticClass::vehicle || before == SemanticClass::pedestrian;
                if (after == SemanticClass::sky || after == SemanticClass::road ||
                    after == SemanticClass::vehicle || after == SemanticClass::pedestrian)
                    mask_ok = false;
                if (was_masked &&
                    (after != SemanticClass::void_class || masked.depth(r, c) != 1.0))
                    mask_ok = false;
                if (!was_masked && (after != before || masked.depth(r, c) != pano.depth(r, c)))
                    mask_ok = false;
            }
        const Panorama twice = mask_dynamic(masked);
        idempotent = idempotent && twice.semantic == masked.semantic &&
                     twice.depth == masked.depth;
    }
    REQUIRE(saw_dynamic);
    REQUIRE(saw_sky);
    REQUIRE(saw_road);

    // Encoded masked samples carry only void and building palette colors.
    const fs::path raw_dir = accept_root() / "removal_raw";
    const fs::path masked_dir = accept_root() / "removal_masked";
    GenConfig gen;
    gen.seed = 9;
    gen.areas = 2;
    gen.per_area = 10;
    generate_dataset(gen, raw_dir.string());
    gen.masked = true;
    generate_dataset(gen, masked_dir.string());
    const LoadedDataset masked_set = read_dataset(masked_dir.string());
    REQUIRE(masked_set.manifest.dynamics_masked);
    const Palette palette = default_palette();
    bool colors_ok = true;
    for (std::size_t si = 0; si < 3 && si < masked_set.samples.size(); ++si) {
        const Tensor& img = masked_set.samples[si].semantic_in;
        const std::size_t hw = 224 * 224;
        for (std::size_t i = 0; i < hw && colors_ok; ++i) {
            bool any = false;
            for (const int cls : {0, 3}) {
                bool all = true;
                for (int ch = 0; ch < 3; ++ch)
                    all = all && std::abs(img.data[ch * hw + i] -
                                          palette[static_cast<std::size_t>(cls)]
                                                 [static_cast<std::size_t>(ch)] /
                                              255.0f) <= 1e-6f;
                any = any || all;
            }
            colors_ok = colors_ok && any;
        }
    }

    // The paired study runs to completion and emits both curves.
    ExperimentContext ctx;
    ctx.data_dir = raw_dir.string();
    ctx.masked_data_dir = masked_dir.string();
    ctx.out_dir = (accept_root() / "removal_exp").string();
    ctx.train = default_train_config(Target::pl);
    ctx.train.max_epochs = 2;
    ctx.train.batch_size = 4;
    ctx.train.val_fraction = 0.25;
    ctx.train.test_area = "area2";
    ctx.model.backbone = Backbone::compact;
    ctx.seeds = {1};
    run_dynamic_removal(ctx);
    const fs::path out = ctx.out_dir;
    const bool curves_ok = fs::file_size(out / "runs" / "raw_s1" / "curves.csv") > 0 &&
                           fs::file_size(out / "runs" / "masked_s1" / "curves.csv") > 0 &&
                           fs::file_size(out / "plots" / "dynamic_curves_s1.svg") > 0;

    char line[256];
    std::snprintf(line, sizeof line,
                  "mask invariant over %zu panoramas (idempotent %s), masked samples "
                  "void/building only: %s, paired study curves emitted: %s",
                  poses.size(), idempotent ? "yes" : "NO", colors_ok ? "yes" : "NO",
                  curves_ok ? "yes" : "NO");
    report(8, line, mask_ok && idempotent && colors_ok && curves_ok);
}

// --- 9: pipeline integrity ---------------------------------------------------

TEST_CASE("dataset io, seeding and synchronization are reproducible") {
    const fs::path dir_a = accept_root() / "roundtrip_a";
    const fs::path dir_b = accept_root() / "roundtrip_b";
    const fs::path dir_c = accept_root() / "roundtrip_c";
    GenConfig gen;
    gen.seed = 5;
    gen.areas = 2;
    gen.per_area = 8;
    generate_dataset(gen, dir_a.string());

    // Round trip: everything the loader reconstructs is rewritten bit for
    // bit.  drops.log is a generation log, not dataset content, and a loaded
    // dataset has no drops to replay.
    const LoadedDataset loaded = read_dataset(dir_a.string());
    write_dataset(loaded.samples, loaded.manifest, dir_b.string());
    bool roundtrip_ok = true;
    int compared = 0;
    for (const auto& entry : fs::recursive_directory_iterator(dir_a)) {
        if (!entry.is_regular_file() || entry.path().filename() == "drops.log") continue;
        const fs::path rel = fs::relative(entry.path(), dir_a);
        roundtrip_ok = roundtrip_ok && fs::exists(dir_b / rel) &&
                       slurp(entry.path()) == slurp(dir_b / rel);
        ++compared;
    }
    REQUIRE(compared == 1 + 2 * loaded.manifest.sample_count);

    generate_dataset(gen, dir_c.string());
    const bool seed_ok = read_manifest(dir_c.string()).content_hash_hex ==
                         loaded.manifest.content_hash_hex;

    const std::vector<double> base = {10.0, 11.0, 12.0};
    std::vector<double> near, far;
    for (const double t : base) {
        near.push_back(t + 0.05);
        far.push_back(t + 0.15);
    }
    const bool near_ok = synchronize(base, near, near).size() == 3;
    const bool far_ok = synchronize(base, far, far).empty();

    bool oracle_ok = true;
    for (std::uint64_t seed = 100; seed < 103; ++seed) {
        CounterRng rng(seed, "accept-sync");
        std::vector<double> channel, image, gps;
        for (int i = 0; i < 50; ++i) {
            const double t = i * 0.5;
            channel.push_back(t + rng.uniform(-0.04, 0.04));
            if (rng.uniform() > 0.1) image.push_back(t + rng.uniform(-0.048, 0.048));
            if (rng.uniform() > 0.1) gps.push_back(t + rng.uniform(-0.048, 0.048));
        }
        std::sort(channel.begin(), channel.end());
        std::sort(image.begin(), image.end());
        std::sort(gps.begin(), gps.end());
        const auto got = synchronize(channel, image, gps, 0.1);
        const auto want = exhaustive_synchronize(channel, image, gps, 0.1);
        oracle_ok = oracle_ok && got.size() == want.size();
        for (std::size_t i = 0; i < got.size() && oracle_ok; ++i)
            oracle_ok = got[i].channel == want[i].channel && got[i].image == want[i].image &&
                        got[i].gps == want[i].gps;
    }

    char line[256];
    std::snprintf(line, sizeof line,
                  "round trip %d files identical: %s; same-seed hash equal: %s; 0.05 s "
                  "offset kept / 0.15 s dropped: %s; greedy equals exhaustive on 3 "
                  "50-record streams: %s",
                  compared, roundtrip_ok ? "yes" : "NO", seed_ok ? "yes" : "NO",
                  near_ok && far_ok ? "yes" : "NO", oracle_ok ? "yes" : "NO");
    report(9, line, roundtrip_ok && seed_ok && near_ok && far_ok && oracle_ok);
}

// --- 10: complexity accounting ----------------------------------------------

TEST_CASE("parameter count and flop estimates match hand derivations") {
    // Compact trimodal scalar model, derived layer by layer.  Convolutions
    // carry no bias; batch norm contributes scale and shift (running
    // statistics are state, not parameters).
    const long long sem_convs =
        9 * (3 * 16 + 16 * 32 + 32 * 48 + 48 * 64 + 64 * 96 + 96 * 128);
    const long long sem_bn = 2 * (16 + 32 + 48 + 64 + 96 + 128);
    const long long sem_fc = 512 * 256 + 256;
    const long long semantic = sem_convs + sem_bn + sem_fc;

    const long long depth_convs = 9 * (3 * 16 + 16 * 32 + 32 * 64 + 64 * 128);
    const long long depth_bn = 2 * (16 + 32 + 64 + 128);
    const long long depth_fc = 128 * 256 + 256;
    const long long depth = depth_convs + depth_bn + depth_fc;

    const long long location = (1 * 64 + 64) + (64 * 256 + 256);
    const long long gate = (768 * 48 + 48) + (48 * 1 + 1);
    const long long scalar_head = (768 * 256 + 256) + (256 * 64 + 64) + (64 * 1 + 1);
    const long long want_total = semantic + depth + location + gate + scalar_head;

    ModelConfig cfg;
    cfg.backbone = Backbone::compact;
    cfg.freeze_semantic = false;
    cfg.target = Target::pl;
    cfg.distance_mean_m = 90.0;
    cfg.distance_std_m = 50.0;
    cfg.seed = 3;
    PredictorNet net(cfg);
    const auto counts = count_model_params(net);
    const bool count_ok = counts.total == want_total && counts.trainable == want_total;

    // The two worked examples of the documented 2-flops-per-mac convention
    // (README, "Complexity accounting").
    nn::Dense<float> fused_fc("fc", 768, 256, 1);
    const bool dense_ok = 2 * fused_fc.macs_per_sample() == 393216;

    nn::Conv2d<float> conv1("c1", 3, 16, 3, 2, 1, 1);
    conv1.forward(nn::Fmap<float>::zeros(1, 3, 224, 224), false);
    const bool conv_ok = 2 * conv1.macs_per_sample() == 10838016;

    char line[256];
    std::snprintf(line, sizeof line,
                  "compact trimodal params %lld (derived %lld), dense 768->256 flops "
                  "%lld (want 393216), conv 3->16 flops %lld (want 10838016)",
                  counts.total, want_total, 2 * fused_fc.macs_per_sample(),
                  2 * conv1.macs_per_sample());
    report(10, line, count_ok && dense_ok && conv_ok);
}
