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

// Covered:
// - hand-computed values for every term (one-hot cases, uniform prediction)
// - the low-power weighting boundary convention (strict <)
// - analytic gradient of the composite loss vs central finite differences
// - degenerate reductions (omega_low = 1) and invariances
// - rmse/mae/cosine agreement with naive loop oracles
// - cosine-distribution summary statistics and histogram conservation

#include <doctest.h>

#include <cmath>
#include <vector>

#include "vcpred/losses.hpp"
#include "vcpred/rng.hpp"

using namespace vcpred;
using Eigen::MatrixXd;
using Eigen::RowVectorXd;

namespace {

MatrixXd one_hot_row(int bin, double value = 1.0) {
    MatrixXd m = MatrixXd::Zero(1, 360);
    m(0, bin) = value;
    return m;
}

MatrixXd random_batch(CounterRng& rng, int rows, double lo, double hi) {
    MatrixXd m(rows, 360);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < 360; ++c)
            m(r, c) = rng.uniform(lo, hi);
    return m;
}

}  // namespace

TEST_CASE("mse against the naive mean") {
    CounterRng rng(11, "mse");
    const MatrixXd t = random_batch(rng, 3, 0.0, 1.0);
    const MatrixXd p = random_batch(rng, 3, 0.0, 1.0);
    double acc = 0.0;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 360; ++c)
            acc += (p(r, c) - t(r, c)) * (p(r, c) - t(r, c));
    CHECK(mse_loss(t, p) == doctest::Approx(acc / (3.0 * 360.0)).epsilon(1e-12));
    CHECK(mse_loss(t, t) == 0.0);

    Eigen::Vector2d a(0.0, 0.0), b(1.0, 1.0);
    CHECK(mse_loss(a, b) == 1.0);
}

TEST_CASE("cosine similarity basics") {
    const MatrixXd p = one_hot_row(0);
    const MatrixXd q = one_hot_row(180);
    CHECK(cos_sim(p.row(0).transpose(), q.row(0).transpose(), 1e-8) == 0.0);
    const double self = cos_sim(p.row(0).transpose(), p.row(0).transpose(), 1e-8);
    CHECK(self > 1.0 - 1e-7);
    CHECK(self < 1.0);
    // scale invariance holds up to the epsilon deficit, which shrinks with norm
    const MatrixXd p5 = 5.0 * p;
    const MatrixXd q3 = 3.0 * p5;
    const double self5 = cos_sim(p5.row(0).transpose(), p5.row(0).transpose(), 1e-8);
    CHECK(cos_sim(p5.row(0).transpose(), q3.row(0).transpose(), 1e-8) ==
          doctest::Approx(self5).epsilon(1e-9));
}

TEST_CASE("shape loss orthogonal and averaged") {
    const MatrixXd t = one_hot_row(0);
    const MatrixXd p = one_hot_row(180);
    CHECK(shape_loss(t, p, 1e-8) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(shape_loss(t, t, 1e-8) == doctest::Approx(0.0).epsilon(1e-7));

    MatrixXd t2(2, 360), p2(2, 360);
    t2 << t, t;
    p2 << p, t;
    CHECK(shape_loss(t2, p2, 1e-8) == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("shape loss ignores positive per-row prediction scale") {
    CounterRng rng(12, "shape-scale");
    MatrixXd t = random_batch(rng, 4, 0.0, 1.0) * 3.0;
    MatrixXd p = random_batch(rng, 4, 0.1, 1.0) * 3.0;
    const double base = shape_loss(t, p, 1e-8);
    for (int r = 0; r < 4; ++r)
        p.row(r) *= rng.uniform(0.5, 20.0);
    CHECK(shape_loss(t, p, 1e-8) == doctest::Approx(base).epsilon(1e-9));
}

TEST_CASE("low-power weighting boundary is strict") {
    LossConfig cfg;
    MatrixXd t(1, 360);
    t.setConstant(0.7);
    t(0, 0) = 0.49;
    t(0, 1) = 0.5;
    const auto w = low_power_weights(t, cfg);
    CHECK(w(0, 0) == 8.0);
    CHECK(w(0, 1) == 1.0);
    CHECK(w(0, 2) == 1.0);
}

TEST_CASE("weighted distances on the bin-0 bin-180 one-hot pair") {
    LossConfig cfg;
    const MatrixXd t = one_hot_row(0);
    const MatrixXd p = one_hot_row(180);
    CHECK(weighted_mse(t, p, cfg) == doctest::Approx(9.0 / 360.0).epsilon(1e-12));
    CHECK(weighted_l1(t, p, cfg) == doctest::Approx(9.0 / 360.0).epsilon(1e-12));
    CHECK(weighted_mse(t, t, cfg) == 0.0);
    CHECK(weighted_l1(t, t, cfg) == 0.0);

    // duplicated rows leave the means unchanged
    MatrixXd t2(2, 360), p2(2, 360);
    t2 << t, t;
    p2 << p, p;
    CHECK(weighted_mse(t2, p2, cfg) == doctest::Approx(weighted_mse(t, p, cfg)).epsilon(1e-12));
    CHECK(weighted_l1(t2, p2, cfg) == doctest::Approx(weighted_l1(t, p, cfg)).epsilon(1e-12));
}

TEST_CASE("weighted distances reduce to plain means at omega_low 1") {
    LossConfig cfg;
    cfg.omega_low = 1.0;
    CounterRng rng(13, "wl-reduce");
    const MatrixXd t = random_batch(rng, 2, 0.0, 1.0);
    const MatrixXd p = random_batch(rng, 2, 0.0, 1.0);
    CHECK(weighted_mse(t, p, cfg) == doctest::Approx(mse_loss(t, p)).epsilon(1e-12));
    CHECK(weighted_l1(t, p, cfg) == doctest::Approx((p - t).array().abs().mean()).epsilon(1e-12));
}

TEST_CASE("relative total power") {
    LossConfig cfg;
    MatrixXd t = MatrixXd::Constant(1, 360, 100.0 / 360.0);
    MatrixXd p = MatrixXd::Constant(1, 360, 90.0 / 360.0);
    CHECK(relative_total_power(t, p, cfg) == doctest::Approx(0.1).epsilon(1e-9));
    CHECK(relative_total_power(t, t, cfg) == 0.0);
    // scaling target and prediction of a row together is neutral
    MatrixXd t10 = 10.0 * t, p10 = 10.0 * p;
    CHECK(relative_total_power(t10, p10, cfg) == doctest::Approx(0.1).epsilon(1e-7));
}

TEST_CASE("composite loss hand-computed one-hot case") {
    LossConfig cfg;
    const MatrixXd t = one_hot_row(0);
    const MatrixXd p = one_hot_row(180);
    const auto br = composite_aps_loss(t, p, cfg);
    CHECK(std::abs(br.total - 1.00225) < 1e-6);
    CHECK(br.shape == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(br.wmse == doctest::Approx(0.025).epsilon(1e-12));
    CHECK(br.wl1 == doctest::Approx(0.025).epsilon(1e-12));
    CHECK(br.rtp == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(br.total >= br.shape);
}

TEST_CASE("composite loss vanishes on a perfect prediction") {
    LossConfig cfg;
    CounterRng rng(14, "perfect");
    MatrixXd t = random_batch(rng, 4, 0.0, 1.0);
    for (int r = 0; r < 4; ++r)
        t.row(r) /= t.row(r).maxCoeff();
    const auto br = composite_aps_loss(t, t, cfg);
    CHECK(br.total >= 0.0);
    CHECK(br.total <= 1e-6);
}

TEST_CASE("composite gradient matches central finite differences") {
    LossConfig cfg;
    CounterRng rng(15, "grad-check");
    const double step = 1e-6;
    for (int trial = 0; trial < 100; ++trial) {
        MatrixXd t = random_batch(rng, 1, 0.0, 1.0);
        if (trial % 3 == 0)
            t(0, static_cast<int>(rng.uniform_int(0, 359))) = 0.5;  // exactly at the threshold
        MatrixXd p = random_batch(rng, 1, 0.01, 0.99);
        const MatrixXd g = composite_aps_loss_grad(t, p, cfg);
        MatrixXd fd(1, 360);
        for (int k = 0; k < 360; ++k) {
            MatrixXd hi = p, lo = p;
            hi(0, k) += step;
            lo(0, k) -= step;
            fd(0, k) = (composite_aps_loss(t, hi, cfg).total - composite_aps_loss(t, lo, cfg).total) /
                       (2.0 * step);
        }
        const double rel = (g - fd).norm() / std::max(fd.norm(), 1e-12);
        CHECK(rel < 1e-4);
    }
}

TEST_CASE("gradient handles multi-row batches") {
    LossConfig cfg;
    CounterRng rng(16, "grad-batch");
    MatrixXd t = random_batch(rng, 3, 0.0, 1.0);
    MatrixXd p = random_batch(rng, 3, 0.01, 0.99);
    const MatrixXd g = composite_aps_loss_grad(t, p, cfg);
    const double step = 1e-6;
    // spot-check a few coordinates across rows
    for (int r = 0; r < 3; ++r) {
        for (int k : {0, 17, 359}) {
            MatrixXd hi = p, lo = p;
            hi(r, k) += step;
            lo(r, k) -= step;
            const double fd =
                (composite_aps_loss(t, hi, cfg).total - composite_aps_loss(t, lo, cfg).total) / (2.0 * step);
            CHECK(g(r, k) == doctest::Approx(fd).epsilon(1e-4));
        }
    }
}

TEST_CASE("rmse and mae") {
    Eigen::Vector2d y(0.0, 0.0), yhat(3.0, 4.0);
    CHECK(rmse(y, yhat) == doctest::Approx(std::sqrt(12.5)).epsilon(1e-12));
    CHECK(mae(y, yhat) == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(rmse(y, y) == 0.0);
    CHECK(mae(y, y) == 0.0);

    CounterRng rng(17, "rmse-mae");
    for (int i = 0; i < 20; ++i) {
        Eigen::VectorXd a(50), b(50);
        for (int k = 0; k < 50; ++k) {
            a[k] = rng.uniform(-5.0, 5.0);
            b[k] = rng.uniform(-5.0, 5.0);
        }
        double se = 0.0, ae = 0.0;
        for (int k = 0; k < 50; ++k) {
            se += (a[k] - b[k]) * (a[k] - b[k]);
            ae += std::abs(a[k] - b[k]);
        }
        CHECK(rmse(a, b) == doctest::Approx(std::sqrt(se / 50.0)).epsilon(1e-12));
        CHECK(mae(a, b) == doctest::Approx(ae / 50.0).epsilon(1e-12));
        CHECK(rmse(a, b) >= mae(a, b));
    }
}

TEST_CASE("cosine distribution summaries") {
    const CosineStats c = cosine_distribution({0.5, 0.5, 0.5});
    CHECK(c.mean == 0.5);
    CHECK(c.median == 0.5);
    CHECK(c.stddev == 0.0);
    CHECK(c.min == 0.5);
    CHECK(c.max == 0.5);

    const CosineStats d = cosine_distribution({0.0, 1.0});
    CHECK(d.mean == 0.5);
    CHECK(d.median == 0.5);
    CHECK(d.histogram.sum() == 2);
    CHECK(d.histogram[49] == 1);  // v = 1 lands in the last bin

    CounterRng rng(18, "cosdist");
    std::vector<double> vals;
    for (int i = 0; i < 101; ++i)
        vals.push_back(rng.uniform(-1.0, 1.0));
    const CosineStats e = cosine_distribution(vals);
    CHECK(e.histogram.sum() == 101);
    CHECK(e.min <= e.median);
    CHECK(e.median <= e.max);
    CHECK_THROWS_AS(cosine_distribution({}), std::invalid_argument);
}

TEST_CASE("shape errors are rejected") {
    LossConfig cfg;
    MatrixXd t(1, 360), bad(1, 359);
    t.setZero();
    bad.setZero();
    CHECK_THROWS_AS(weighted_mse(t, bad, cfg), std::invalid_argument);
    MatrixXd t2(2, 360), p1(1, 360);
    t2.setZero();
    p1.setZero();
    CHECK_THROWS_AS(composite_aps_loss(t2, p1, cfg), std::invalid_argument);
    Eigen::VectorXd a = Eigen::VectorXd::Ones(3);
    Eigen::VectorXd b = Eigen::VectorXd::Ones(2);
    CHECK_THROWS_AS(mse_loss(a, b), std::invalid_argument);
}
