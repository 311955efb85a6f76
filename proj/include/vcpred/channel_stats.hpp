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

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace vcpred {

/// One resolved multipath component of a channel snapshot.
/// amplitude is the linear magnitude of the complex path gain; angles are
/// azimuths in [0, 360) degrees (arrival angles in the vehicle frame,
/// departure angles in the world frame).
struct Mpc {
    double amplitude = 0.0;
    double phase_rad = 0.0;
    double delay_ns = 0.0;
    double aod_deg = 0.0;
    double aoa_deg = 0.0;
};

static_assert(sizeof(Mpc) == 5 * sizeof(double), "Mpc must stay a plain 5-double record");

struct MpcSet {
    std::string snapshot_id;
    std::vector<Mpc> components;
};

enum class AngleSide { departure, arrival };

/// Ground-truth targets derived from one MpcSet. aps holds 360 one-degree
/// bins of arrival power, normalized so the strongest bin is exactly 1.
struct ChannelLabels {
    double pl_db = 0.0;
    double ds_ns = 0.0;
    double asa_deg = 0.0;
    double asd_deg = 0.0;
    Eigen::VectorXd aps;
};

// --- Eigen-level kernels -------------------------------------------------

/// Power-weighted RMS spread of `values`: sqrt(E[v^2] - E[v]^2) with weights
/// powers/sum(powers). Evaluated about the weighted mean so the result is
/// shift-invariant at full precision. A radicand below -1e-12 (impossible for
/// consistent inputs) raises an internal-consistency error.
template <typename DerivedP, typename DerivedV>
typename DerivedP::Scalar weighted_rms_spread(const Eigen::ArrayBase<DerivedP>& powers,
                                              const Eigen::ArrayBase<DerivedV>& values) {
    using Scalar = typename DerivedP::Scalar;
    if (powers.size() == 0 || powers.size() != values.size())
        throw std::invalid_argument("weighted_rms_spread: empty or mismatched inputs");
    const Scalar total = powers.sum();
    if (!(total > Scalar(0)))
        throw std::invalid_argument("weighted_rms_spread: total power must be positive");
    const auto q = powers / total;
    const Scalar mean = (q * values).sum();
    const auto centered = values - mean;
    const Scalar m2 = (q * centered.square()).sum();
    const Scalar r = (q * centered).sum();
    const Scalar radicand = m2 - r * r;
    if (radicand < Scalar(-1e-12))
        throw std::runtime_error("weighted_rms_spread: negative radicand (internal consistency)");
    return radicand > Scalar(0) ? std::sqrt(radicand) : Scalar(0);
}

/// Circular (angular) spread in radians: sqrt(-2 ln R) where R is the length
/// of the power-weighted mean phasor. R is clamped to [1e-12, 1] before the
/// logarithm, capping the spread for near-uniform angle distributions. A mean
/// phasor within 1e-12 of unit length reports exactly zero: below that the
/// logarithm only amplifies representation noise of coherent sets.
template <typename DerivedP, typename DerivedA>
typename DerivedP::Scalar circular_spread_rad(const Eigen::ArrayBase<DerivedP>& powers,
                                              const Eigen::ArrayBase<DerivedA>& angles_rad) {
    using Scalar = typename DerivedP::Scalar;
    if (powers.size() == 0 || powers.size() != angles_rad.size())
        throw std::invalid_argument("circular_spread_rad: empty or mismatched inputs");
    const Scalar total = powers.sum();
    if (!(total > Scalar(0)))
        throw std::invalid_argument("circular_spread_rad: total power must be positive");
    const Scalar re = (powers * angles_rad.cos()).sum() / total;
    const Scalar im = (powers * angles_rad.sin()).sum() / total;
    const Scalar r = std::sqrt(re * re + im * im);
    if (r >= Scalar(1) - Scalar(1e-12))
        return Scalar(0);
    return std::sqrt(Scalar(-2) * std::log(std::max(Scalar(1e-12), r)));
}

// --- MpcSet operations ----------------------------------------------------

namespace detail {

inline void require_valid(const MpcSet& mpcs, const char* op) {
    if (mpcs.components.empty())
        throw std::invalid_argument(std::string(op) + ": empty MPC set");
    for (const Mpc& c : mpcs.components) {
        if (!(c.amplitude > 0.0) || !std::isfinite(c.amplitude))
            throw std::invalid_argument(std::string(op) + ": amplitudes must be positive and finite");
        if (!(c.delay_ns >= 0.0) || !std::isfinite(c.delay_ns))
            throw std::invalid_argument(std::string(op) + ": delays must be nonnegative and finite");
        if (!std::isfinite(c.aod_deg) || !std::isfinite(c.aoa_deg))
            throw std::invalid_argument(std::string(op) + ": angles must be finite");
    }
}

// Strided maps over the packed Mpc records; no copies.
using FieldMap = Eigen::Map<const Eigen::ArrayXd, 0, Eigen::InnerStride<5>>;

inline FieldMap field(const MpcSet& m, const double Mpc::* f) {
    return FieldMap(&(m.components.data()->*f), static_cast<Eigen::Index>(m.components.size()));
}

}  // namespace detail

/// Sum of squared path amplitudes (total received power, linear).
inline double total_power(const MpcSet& mpcs) {
    detail::require_valid(mpcs, "total_power");
    return detail::field(mpcs, &Mpc::amplitude).square().sum();
}

/// Path loss in dB: -10 log10 of the total received power.
inline double path_loss_db(const MpcSet& mpcs) { return -10.0 * std::log10(total_power(mpcs)); }

/// RMS delay spread in nanoseconds, weighted by per-path power.
inline double rms_delay_spread_ns(const MpcSet& mpcs) {
    detail::require_valid(mpcs, "rms_delay_spread_ns");
    return weighted_rms_spread(detail::field(mpcs, &Mpc::amplitude).square().eval(),
                               detail::field(mpcs, &Mpc::delay_ns));
}

/// Power-weighted circular azimuth spread in degrees for the chosen side.
inline double azimuth_spread_deg(const MpcSet& mpcs, AngleSide side) {
    detail::require_valid(mpcs, "azimuth_spread_deg");
    const auto angles = detail::field(mpcs, side == AngleSide::arrival ? &Mpc::aoa_deg : &Mpc::aod_deg);
    const double rad = circular_spread_rad(detail::field(mpcs, &Mpc::amplitude).square().eval(),
                                           (angles * (std::numbers::pi / 180.0)).eval());
    return rad * 180.0 / std::numbers::pi;
}

/// Angular power spectrum over 360 one-degree bins (bin k covers [k, k+1)
/// degrees), peak-normalized so the strongest bin equals 1 exactly.
inline Eigen::VectorXd aps_360(const MpcSet& mpcs, AngleSide side = AngleSide::arrival) {
    detail::require_valid(mpcs, "aps_360");
    Eigen::VectorXd bins = Eigen::VectorXd::Zero(360);
    for (const Mpc& c : mpcs.components) {
        const double az = side == AngleSide::arrival ? c.aoa_deg : c.aod_deg;
        int k = static_cast<int>(std::floor(az)) % 360;
        if (k < 0)
            k += 360;
        bins[k] += c.amplitude * c.amplitude;
    }
    bins /= bins.maxCoeff();
    return bins;
}

/// All prediction targets of one snapshot.
inline ChannelLabels labels_from_mpcs(const MpcSet& mpcs) {
    ChannelLabels out;
    out.pl_db = path_loss_db(mpcs);
    out.ds_ns = rms_delay_spread_ns(mpcs);
    out.asa_deg = azimuth_spread_deg(mpcs, AngleSide::arrival);
    out.asd_deg = azimuth_spread_deg(mpcs, AngleSide::departure);
    out.aps = aps_360(mpcs, AngleSide::arrival);
    return out;
}

}  // namespace vcpred
