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
#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace vcpred {

/// Weighting of the composite spectrum loss. tau/omega_low steer the
/// low-power emphasis; the epsilon guards the cosine denominator and the
/// relative-power denominator. Values are the published operating point.
struct LossConfig {
    double tau_threshold = 0.5;
    double omega_low = 8.0;
    double omega_mse = 0.065;
    double omega_l1 = 0.025;
    double omega_tp = 0.01;
    double epsilon = 1e-8;
};

template <typename Scalar>
struct LossBreakdown {
    Scalar total = 0;
    Scalar shape = 0;
    Scalar wmse = 0;
    Scalar wl1 = 0;
    Scalar rtp = 0;
};

namespace detail {

template <typename DT, typename DP>
void require_aps_batch(const Eigen::MatrixBase<DT>& target, const Eigen::MatrixBase<DP>& pred, const char* op) {
    if (target.rows() < 1 || target.cols() != 360)
        throw std::invalid_argument(std::string(op) + ": target must be M x 360 with M >= 1");
    if (pred.rows() != target.rows() || pred.cols() != target.cols())
        throw std::invalid_argument(std::string(op) + ": prediction shape must match target");
}

}  // namespace detail

/// Mean squared difference over all coefficients.
template <typename DA, typename DB>
typename DA::Scalar mse_loss(const Eigen::MatrixBase<DA>& target, const Eigen::MatrixBase<DB>& pred) {
    if (target.size() == 0 || target.rows() != pred.rows() || target.cols() != pred.cols())
        throw std::invalid_argument("mse_loss: empty or mismatched inputs");
    return (pred - target).array().square().mean();
}

/// Cosine similarity with the stabilizer inside the denominator:
/// dot(p,q) / (|p| |q| + eps). Note cos_sim(p, p) sits slightly below 1 for
/// eps > 0; this keeps the published form instead of repairing it.
template <typename DA, typename DB>
typename DA::Scalar cos_sim(const Eigen::MatrixBase<DA>& p, const Eigen::MatrixBase<DB>& q,
                            typename DA::Scalar epsilon) {
    if (p.size() == 0 || p.size() != q.size())
        throw std::invalid_argument("cos_sim: empty or mismatched inputs");
    using Scalar = typename DA::Scalar;
    const Scalar denom = p.norm() * q.norm() + epsilon;
    return Scalar(p.reshaped().dot(q.reshaped())) / denom;
}

/// 1 - mean over rows of cos_sim(target_m, prediction_m).
template <typename DT, typename DP>
typename DT::Scalar shape_loss(const Eigen::MatrixBase<DT>& target, const Eigen::MatrixBase<DP>& pred,
                               typename DT::Scalar epsilon) {
    detail::require_aps_batch(target, pred, "shape_loss");
    using Scalar = typename DT::Scalar;
    Scalar acc = 0;
    for (Eigen::Index m = 0; m < target.rows(); ++m)
        acc += cos_sim(target.row(m).transpose(), pred.row(m).transpose(), epsilon);
    return Scalar(1) - acc / Scalar(target.rows());
}

/// Per-coefficient weights: 1 + (omega_low - 1) where the target power is
/// strictly below tau, 1 elsewhere. Shape follows the input.
template <typename DT>
auto low_power_weights(const Eigen::MatrixBase<DT>& target, const LossConfig& cfg) {
    using Scalar = typename DT::Scalar;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    Mat w = Mat::Ones(target.rows(), target.cols());
    w.array() += Scalar(cfg.omega_low - 1.0) * (target.array() < Scalar(cfg.tau_threshold)).template cast<Scalar>();
    return w;
}

/// (1/(M*360)) sum of w .* (target - prediction)^2.
template <typename DT, typename DP>
typename DT::Scalar weighted_mse(const Eigen::MatrixBase<DT>& target, const Eigen::MatrixBase<DP>& pred,
                                 const LossConfig& cfg) {
    detail::require_aps_batch(target, pred, "weighted_mse");
    const auto w = low_power_weights(target, cfg);
    return (w.array() * (target - pred).array().square()).mean();
}

/// (1/(M*360)) sum of w .* |target - prediction|.
template <typename DT, typename DP>
typename DT::Scalar weighted_l1(const Eigen::MatrixBase<DT>& target, const Eigen::MatrixBase<DP>& pred,
                                const LossConfig& cfg) {
    detail::require_aps_batch(target, pred, "weighted_l1");
    const auto w = low_power_weights(target, cfg);
    return (w.array() * (target - pred).array().abs()).mean();
}

/// Mean over rows of |sum(target) - sum(prediction)| / (sum(target) + eps).
template <typename DT, typename DP>
typename DT::Scalar relative_total_power(const Eigen::MatrixBase<DT>& target, const Eigen::MatrixBase<DP>& pred,
                                         const LossConfig& cfg) {
    detail::require_aps_batch(target, pred, "relative_total_power");
    using Scalar = typename DT::Scalar;
    Scalar acc = 0;
    for (Eigen::Index m = 0; m < target.rows(); ++m) {
        const Scalar st = target.row(m).sum();
        const Scalar sp = pred.row(m).sum();
        acc += std::abs(st - sp) / (st + Scalar(cfg.epsilon));
    }
    return acc / Scalar(target.rows());
}

/// Composite spectrum loss: shape + omega_mse*WMSE + omega_l1*WL1 + omega_tp*RTP.
template <typename DT, typename DP>
LossBreakdown<typename DT::Scalar> composite_aps_loss(const Eigen::MatrixBase<DT>& target,
                                                      const Eigen::MatrixBase<DP>& pred, const LossConfig& cfg) {
    detail::require_aps_batch(target, pred, "composite_aps_loss");
    using Scalar = typename DT::Scalar;
    LossBreakdown<Scalar> out;
    out.shape = shape_loss(target, pred, Scalar(cfg.epsilon));
    out.wmse = weighted_mse(target, pred, cfg);
    out.wl1 = weighted_l1(target, pred, cfg);
    out.rtp = relative_total_power(target, pred, cfg);
    out.total = out.shape + Scalar(cfg.omega_mse) * out.wmse + Scalar(cfg.omega_l1) * out.wl1 +
                Scalar(cfg.omega_tp) * out.rtp;
    return out;
}

/// Analytic gradient of composite_aps_loss with respect to the prediction.
/// The L1 and relative-power terms use the zero subgradient at exact ties.
template <typename DT, typename DP>
Eigen::Matrix<typename DT::Scalar, Eigen::Dynamic, Eigen::Dynamic> composite_aps_loss_grad(
    const Eigen::MatrixBase<DT>& target, const Eigen::MatrixBase<DP>& pred, const LossConfig& cfg) {
    detail::require_aps_batch(target, pred, "composite_aps_loss_grad");
    using Scalar = typename DT::Scalar;
    using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
    const Eigen::Index m_rows = target.rows();
    const Eigen::Index n = target.cols();
    const Scalar inv_m = Scalar(1) / Scalar(m_rows);
    const Scalar inv_mn = inv_m / Scalar(n);
    const Mat w = low_power_weights(target, cfg);
    Mat grad(m_rows, n);
    for (Eigen::Index m = 0; m < m_rows; ++m) {
        const auto t = target.row(m);
        const auto p = pred.row(m);
        const Scalar nt = t.norm();
        const Scalar np = p.norm();
        if (!(np > Scalar(0)))
            throw std::invalid_argument("composite_aps_loss_grad: zero-norm prediction row");
        const Scalar dot = t.dot(p);
        const Scalar denom = nt * np + Scalar(cfg.epsilon);
        // d(-cos)/dp = -(t/denom - dot*nt*p/(np*denom^2))
        grad.row(m) = -inv_m * (t / denom - (dot * nt / (np * denom * denom)) * p);
        grad.row(m) += (Scalar(2) * Scalar(cfg.omega_mse) * inv_mn) * (w.row(m).array() * (p - t).array()).matrix();
        grad.row(m) += (Scalar(cfg.omega_l1) * inv_mn) *
                       (w.row(m).array() * (p - t).array().sign()).matrix();
        const Scalar st = t.sum();
        const Scalar sp = p.sum();
        const Scalar sign_tp = sp > st ? Scalar(1) : (sp < st ? Scalar(-1) : Scalar(0));
        grad.row(m).array() += Scalar(cfg.omega_tp) * inv_m * sign_tp / (st + Scalar(cfg.epsilon));
    }
    return grad;
}

/// Root-mean-square error over flattened coefficients.
template <typename DA, typename DB>
typename DA::Scalar rmse(const Eigen::MatrixBase<DA>& y, const Eigen::MatrixBase<DB>& yhat) {
    return std::sqrt(mse_loss(y, yhat));
}

/// Mean absolute error over flattened coefficients.
template <typename DA, typename DB>
typename DA::Scalar mae(const Eigen::MatrixBase<DA>& y, const Eigen::MatrixBase<DB>& yhat) {
    if (y.size() == 0 || y.rows() != yhat.rows() || y.cols() != yhat.cols())
        throw std::invalid_argument("mae: empty or mismatched inputs");
    return (yhat - y).array().abs().mean();
}

/// Summary of a per-sample cosine-similarity population. std is the
/// population standard deviation; the histogram spans [-1, 1] in 50 equal
/// bins with the right edge closed.
struct CosineStats {
    double mean = 0.0;
    double median = 0.0;
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
    Eigen::VectorXi histogram;
};

inline CosineStats cosine_distribution(std::vector<double> values) {
    if (values.empty())
        throw std::invalid_argument("cosine_distribution: empty input");
    CosineStats out;
    out.histogram = Eigen::VectorXi::Zero(50);
    double acc = 0.0;
    out.min = values.front();
    out.max = values.front();
    for (double v : values) {
        acc += v;
        out.min = std::min(out.min, v);
        out.max = std::max(out.max, v);
        int k = static_cast<int>(std::floor((v + 1.0) / 2.0 * 50.0));
        k = std::clamp(k, 0, 49);
        out.histogram[k] += 1;
    }
    out.mean = acc / static_cast<double>(values.size());
    double var = 0.0;
    for (double v : values)
        var += (v - out.mean) * (v - out.mean);
    out.stddev = std::sqrt(var / static_cast<double>(values.size()));
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    out.median = (n % 2 == 1) ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
    return out;
}

}  // namespace vcpred
