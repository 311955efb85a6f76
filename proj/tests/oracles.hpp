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

// Independent reference implementations used to pin expected test values.
// Deliberately written as plain scalar loops with no shared code paths with
// the library; keep them boring.

#pragma once

#include <cmath>
#include <vector>

#include "vcpred/channel_stats.hpp"
#include "vcpred/rng.hpp"

namespace vcpred::oracles {

inline double total_power(const MpcSet& s) {
    double acc = 0.0;
    for (const Mpc& c : s.components)
        acc += c.amplitude * c.amplitude;
    return acc;
}

inline double path_loss_db(const MpcSet& s) { return -10.0 * std::log10(oracles::total_power(s)); }

inline double rms_delay_spread_ns(const MpcSet& s) {
    const double tot = oracles::total_power(s);
    double m1 = 0.0;
    for (const Mpc& c : s.components)
        m1 += c.amplitude * c.amplitude / tot * c.delay_ns;
    // second moment about the weighted mean; the raw-moment difference form
    // cancels catastrophically for clustered delays
    double var = 0.0;
    for (const Mpc& c : s.components)
        var += c.amplitude * c.amplitude / tot * (c.delay_ns - m1) * (c.delay_ns - m1);
    return var > 0.0 ? std::sqrt(var) : 0.0;
}

inline double azimuth_spread_deg(const MpcSet& s, bool arrival) {
    const double tot = oracles::total_power(s);
    double re = 0.0, im = 0.0;
    for (const Mpc& c : s.components) {
        const double q = c.amplitude * c.amplitude / tot;
        const double a = (arrival ? c.aoa_deg : c.aod_deg) * M_PI / 180.0;
        re += q * std::cos(a);
        im += q * std::sin(a);
    }
    const double r = std::hypot(re, im);
    if (r >= 1.0 - 1e-12)
        return 0.0;
    return std::sqrt(-2.0 * std::log(std::max(1e-12, r))) * 180.0 / M_PI;
}

inline std::vector<double> aps_360(const MpcSet& s) {
    std::vector<double> bins(360, 0.0);
    for (const Mpc& c : s.components) {
        double az = std::fmod(c.aoa_deg, 360.0);
        if (az < 0.0)
            az += 360.0;
        bins[static_cast<std::size_t>(az)] += c.amplitude * c.amplitude;
    }
    double peak = 0.0;
    for (double b : bins)
        peak = std::max(peak, b);
    for (double& b : bins)
        b /= peak;
    return bins;
}

/// Random snapshot with L in [1, max_paths], log-uniform amplitudes spanning
/// ~60 dB, delays up to 3 us, azimuths over the full circle.
inline MpcSet random_mpc_set(CounterRng& rng, int max_paths = 64) {
    MpcSet s;
    s.snapshot_id = "random";
    const auto n = rng.uniform_int(1, max_paths);
    for (std::int64_t i = 0; i < n; ++i) {
        Mpc c;
        c.amplitude = std::pow(10.0, rng.uniform(-4.0, -1.0));
        c.phase_rad = rng.uniform(0.0, 2.0 * M_PI);
        c.delay_ns = rng.uniform(0.0, 3000.0);
        c.aod_deg = rng.uniform(0.0, 360.0);
        c.aoa_deg = rng.uniform(0.0, 360.0);
        s.components.push_back(c);
    }
    return s;
}

}  // namespace vcpred::oracles
