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
// - closed-form spot values (single path, two-path delay spread, orthogonal
//   equal-power azimuth spread)
// - agreement with independent loop oracles on random snapshots
// - invariances: delay shift, amplitude scaling, angle rotation, permutation
// - angular power spectrum binning, normalization and power conservation
// - error behavior on empty or degenerate sets

#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "oracles.hpp"
#include "vcpred/channel_stats.hpp"
#include "vcpred/rng.hpp"

using namespace vcpred;

static MpcSet make_set(std::initializer_list<Mpc> list) {
    MpcSet s;
    s.snapshot_id = "fixture";
    s.components = list;
    return s;
}

TEST_CASE("single-path closed forms") {
    const auto s = make_set({Mpc{0.1, 0.0, 123.0, 45.0, 270.0}});
    CHECK(total_power(s) == doctest::Approx(0.01).epsilon(1e-15));
    CHECK(path_loss_db(s) == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(rms_delay_spread_ns(s) == 0.0);
    CHECK(azimuth_spread_deg(s, AngleSide::arrival) == 0.0);
    CHECK(azimuth_spread_deg(s, AngleSide::departure) == 0.0);
}

TEST_CASE("two equal paths 100 ns apart spread 50 ns") {
    const auto s = make_set({Mpc{1.0, 0.0, 100.0, 0.0, 0.0}, Mpc{1.0, 0.0, 200.0, 0.0, 0.0}});
    CHECK(std::abs(rms_delay_spread_ns(s) - 50.0) < 1e-9);
}

TEST_CASE("equal-power paths at 0 and 90 degrees") {
    // mean phasor length cos(45 deg) => spread sqrt(ln 2) rad on both sides
    const double expect_deg = std::sqrt(std::log(2.0)) * 180.0 / M_PI;
    const auto s = make_set({Mpc{1.0, 0.0, 0.0, 0.0, 0.0}, Mpc{1.0, 0.0, 0.0, 90.0, 90.0}});
    CHECK(std::abs(azimuth_spread_deg(s, AngleSide::arrival) - expect_deg) < 1e-6);
    CHECK(std::abs(azimuth_spread_deg(s, AngleSide::departure) - expect_deg) < 1e-6);
    CHECK(expect_deg == doctest::Approx(47.7).epsilon(1e-3));
}

TEST_CASE("angular power spectrum binning and normalization") {
    const auto s = make_set({Mpc{1.0, 0.0, 0.0, 0.0, 10.4}, Mpc{0.1, 0.0, 0.0, 0.0, 200.7}});
    const Eigen::VectorXd aps = aps_360(s);
    REQUIRE(aps.size() == 360);
    CHECK(aps[10] == 1.0);
    CHECK(aps[200] == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(aps.sum() == doctest::Approx(1.01).epsilon(1e-12));

    const auto edge = make_set({Mpc{1.0, 0.0, 0.0, 0.0, 359.9}});
    CHECK(aps_360(edge)[359] == 1.0);
}

TEST_CASE("aps peak bin is exactly one") {
    CounterRng rng(7, "aps-peak");
    for (int i = 0; i < 50; ++i) {
        const auto s = oracles::random_mpc_set(rng);
        const Eigen::VectorXd aps = aps_360(s);
        CHECK(aps.maxCoeff() == 1.0);
        CHECK(aps.minCoeff() >= 0.0);
    }
}

TEST_CASE("agreement with loop oracles on random snapshots") {
    CounterRng rng(42, "stats-oracle");
    for (int i = 0; i < 300; ++i) {
        const auto s = oracles::random_mpc_set(rng);
        CHECK(total_power(s) == doctest::Approx(oracles::total_power(s)).epsilon(1e-12));
        CHECK(path_loss_db(s) == doctest::Approx(oracles::path_loss_db(s)).epsilon(1e-9));
        CHECK(rms_delay_spread_ns(s) == doctest::Approx(oracles::rms_delay_spread_ns(s)).epsilon(1e-9));
        CHECK(azimuth_spread_deg(s, AngleSide::arrival) ==
              doctest::Approx(oracles::azimuth_spread_deg(s, true)).epsilon(1e-9));
        CHECK(azimuth_spread_deg(s, AngleSide::departure) ==
              doctest::Approx(oracles::azimuth_spread_deg(s, false)).epsilon(1e-9));
        const auto aps = aps_360(s);
        const auto ref = oracles::aps_360(s);
        for (int k = 0; k < 360; ++k)
            CHECK(aps[k] == doctest::Approx(ref[static_cast<std::size_t>(k)]).epsilon(1e-9));
    }
}

TEST_CASE("delay shift leaves the spread unchanged") {
    CounterRng rng(1, "delay-shift");
    for (int i = 0; i < 50; ++i) {
        auto s = oracles::random_mpc_set(rng);
        const double base = rms_delay_spread_ns(s);
        const double shift = rng.uniform(0.0, 1e5);
        for (Mpc& c : s.components)
            c.delay_ns += shift;
        CHECK(rms_delay_spread_ns(s) == doctest::Approx(base).epsilon(1e-12));
    }
}

TEST_CASE("amplitude scaling shifts only the path loss") {
    CounterRng rng(2, "amp-scale");
    for (int i = 0; i < 50; ++i) {
        auto s = oracles::random_mpc_set(rng);
        const double pl = path_loss_db(s);
        const double ds = rms_delay_spread_ns(s);
        const double asa = azimuth_spread_deg(s, AngleSide::arrival);
        const Eigen::VectorXd aps = aps_360(s);
        const double k = rng.uniform(0.1, 10.0);
        for (Mpc& c : s.components)
            c.amplitude *= k;
        CHECK(path_loss_db(s) == doctest::Approx(pl - 20.0 * std::log10(k)).epsilon(1e-9));
        CHECK(rms_delay_spread_ns(s) == doctest::Approx(ds).epsilon(1e-12));
        CHECK(azimuth_spread_deg(s, AngleSide::arrival) == doctest::Approx(asa).epsilon(1e-12));
        CHECK((aps_360(s) - aps).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("rotating every azimuth leaves the spread unchanged") {
    CounterRng rng(3, "rotate");
    for (int i = 0; i < 50; ++i) {
        auto s = oracles::random_mpc_set(rng);
        const double asa = azimuth_spread_deg(s, AngleSide::arrival);
        const double asd = azimuth_spread_deg(s, AngleSide::departure);
        const double rot = rng.uniform(0.0, 360.0);
        for (Mpc& c : s.components) {
            c.aoa_deg = std::fmod(c.aoa_deg + rot, 360.0);
            c.aod_deg = std::fmod(c.aod_deg + rot, 360.0);
        }
        CHECK(azimuth_spread_deg(s, AngleSide::arrival) == doctest::Approx(asa).epsilon(1e-9));
        CHECK(azimuth_spread_deg(s, AngleSide::departure) == doctest::Approx(asd).epsilon(1e-9));
    }
}

TEST_CASE("component order does not matter") {
    CounterRng rng(4, "permute");
    auto s = oracles::random_mpc_set(rng, 32);
    const ChannelLabels before = labels_from_mpcs(s);
    std::reverse(s.components.begin(), s.components.end());
    const ChannelLabels after = labels_from_mpcs(s);
    CHECK(after.pl_db == doctest::Approx(before.pl_db).epsilon(1e-12));
    CHECK(after.ds_ns == doctest::Approx(before.ds_ns).epsilon(1e-12));
    CHECK(after.asa_deg == doctest::Approx(before.asa_deg).epsilon(1e-12));
    CHECK(after.asd_deg == doctest::Approx(before.asd_deg).epsilon(1e-12));
    CHECK((after.aps - before.aps).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("removing a component never lowers the path loss") {
    CounterRng rng(5, "monotone");
    for (int i = 0; i < 30; ++i) {
        auto s = oracles::random_mpc_set(rng, 16);
        if (s.components.size() < 2)
            continue;
        const double pl = path_loss_db(s);
        s.components.pop_back();
        CHECK(path_loss_db(s) >= pl);
    }
}

TEST_CASE("aps conserves total power up to the peak normalization") {
    CounterRng rng(6, "conserve");
    for (int i = 0; i < 30; ++i) {
        const auto s = oracles::random_mpc_set(rng);
        double peak = 0.0;
        {
            std::vector<double> raw(360, 0.0);
            for (const Mpc& c : s.components)
                raw[static_cast<std::size_t>(std::fmod(c.aoa_deg, 360.0))] += c.amplitude * c.amplitude;
            for (double b : raw)
                peak = std::max(peak, b);
        }
        CHECK(aps_360(s).sum() * peak == doctest::Approx(total_power(s)).epsilon(1e-9));
    }
}

TEST_CASE("empty and invalid sets are rejected") {
    MpcSet empty;
    empty.snapshot_id = "empty";
    CHECK_THROWS_AS(total_power(empty), std::invalid_argument);
    CHECK_THROWS_AS(path_loss_db(empty), std::invalid_argument);
    CHECK_THROWS_AS(rms_delay_spread_ns(empty), std::invalid_argument);
    CHECK_THROWS_AS(azimuth_spread_deg(empty, AngleSide::arrival), std::invalid_argument);
    CHECK_THROWS_AS(aps_360(empty), std::invalid_argument);

    const auto bad_amp = make_set({Mpc{0.0, 0.0, 0.0, 0.0, 0.0}});
    CHECK_THROWS_AS(total_power(bad_amp), std::invalid_argument);
    const auto bad_delay = make_set({Mpc{1.0, 0.0, -1.0, 0.0, 0.0}});
    CHECK_THROWS_AS(rms_delay_spread_ns(bad_delay), std::invalid_argument);
}

TEST_CASE("labels compose the individual statistics") {
    CounterRng rng(8, "labels");
    const auto s = oracles::random_mpc_set(rng);
    const ChannelLabels l = labels_from_mpcs(s);
    CHECK(l.pl_db == path_loss_db(s));
    CHECK(l.ds_ns == rms_delay_spread_ns(s));
    CHECK(l.asa_deg == azimuth_spread_deg(s, AngleSide::arrival));
    CHECK(l.asd_deg == azimuth_spread_deg(s, AngleSide::departure));
    CHECK(l.aps.maxCoeff() == 1.0);
}
