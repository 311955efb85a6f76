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
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vcpred/rng.hpp"

// Minimal train-by-hand layer library. Every layer owns its parameters and
// gradients, caches what its backward pass needs when asked to, and exposes
// the parameters through ParamRef for optimizers and checkpoints. Layers are
// templated on the scalar so unit tests can finite-difference them in double
// while the model trains in float.
namespace vcpred::nn {

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

/// Batch of feature maps. m has one row per channel; columns are sample-major
/// blocks of h*w spatial positions (index y*w + x), so per-sample blocks are
/// contiguous and channel reductions are rowwise.
template <typename S>
struct Fmap {
    int n = 0, c = 0, h = 0, w = 0;
    Mat<S> m;

    static Fmap zeros(int n, int c, int h, int w) {
        Fmap f;
        f.n = n;
        f.c = c;
        f.h = h;
        f.w = w;
        f.m = Mat<S>::Zero(c, static_cast<Eigen::Index>(n) * h * w);
        return f;
    }
    Eigen::Index spatial() const { return static_cast<Eigen::Index>(h) * w; }
};

/// Named view of one parameter or state buffer. Buffers (running statistics)
/// are checkpointed but never counted as parameters or touched by optimizers.
template <typename S>
struct ParamRef {
    std::string name;
    Mat<S>* value = nullptr;
    Mat<S>* grad = nullptr;
    bool trainable = true;
    bool buffer = false;
};

template <typename S>
struct ParamCount {
    long long total = 0;
    long long trainable = 0;
};

template <typename S>
ParamCount<S> count_params(const std::vector<ParamRef<S>>& refs) {
    ParamCount<S> out;
    for (const ParamRef<S>& r : refs) {
        if (r.buffer) continue;
        out.total += r.value->size();
        if (r.trainable) out.trainable += r.value->size();
    }
    return out;
}

namespace detail {

inline int conv_out_extent(int in, int k, int stride, int pad) {
    return (in + 2 * pad - k) / stride + 1;
}

// Patch matrix for one sample block: row index (ky*k + kx)*c_in + c so the
// channel run of every kernel tap is a contiguous column segment; column
// index oy*w_out + ox. The weight layout of Conv2d matches this scheme.
template <typename S>
void im2col(const Eigen::Ref<const Mat<S>>& x, int c, int h, int w, int k, int stride, int pad,
            Mat<S>& patches) {
    const int h_out = conv_out_extent(h, k, stride, pad);
    const int w_out = conv_out_extent(w, k, stride, pad);
    patches.setZero(static_cast<Eigen::Index>(c) * k * k, static_cast<Eigen::Index>(h_out) * w_out);
    for (int oy = 0; oy < h_out; ++oy)
        for (int ox = 0; ox < w_out; ++ox) {
            const Eigen::Index q = static_cast<Eigen::Index>(oy) * w_out + ox;
            for (int ky = 0; ky < k; ++ky) {
                const int iy = oy * stride - pad + ky;
                if (iy < 0 || iy >= h) continue;
                for (int kx = 0; kx < k; ++kx) {
                    const int ix = ox * stride - pad + kx;
                    if (ix < 0 || ix >= w) continue;
                    patches.col(q).segment(static_cast<Eigen::Index>(ky * k + kx) * c, c) =
                        x.col(static_cast<Eigen::Index>(iy) * w + ix);
                }
            }
        }
}

template <typename S>
void col2im_add(const Mat<S>& patches, int c, int h, int w, int k, int stride, int pad,
                Eigen::Ref<Mat<S>> x) {
    const int h_out = conv_out_extent(h, k, stride, pad);
    const int w_out = conv_out_extent(w, k, stride, pad);
    for (int oy = 0; oy < h_out; ++oy)
        for (int ox = 0; ox < w_out; ++ox) {
            const Eigen::Index q = static_cast<Eigen::Index>(oy) * w_out + ox;
            for (int ky = 0; ky < k; ++ky) {
                const int iy = oy * stride - pad + ky;
                if (iy < 0 || iy >= h) continue;
                for (int kx = 0; kx < k; ++kx) {
                    const int ix = ox * stride - pad + kx;
                    if (ix < 0 || ix >= w) continue;
                    x.col(static_cast<Eigen::Index>(iy) * w + ix) +=
                        patches.col(q).segment(static_cast<Eigen::Index>(ky * k + kx) * c, c);
                }
            }
        }
}

}  // namespace detail

/// 2-D convolution via im2col + GEMM. Weights are fan-out He-normal at
/// construction; bias is off by default because every conv here feeds a
/// normalization layer.
template <typename S>
class Conv2d {
  public:
    Conv2d(std::string name, int c_in, int c_out, int k, int stride, int pad, std::uint64_t seed,
           bool with_bias = false)
        : name_(std::move(name)), c_in_(c_in), c_out_(c_out), k_(k), stride_(stride), pad_(pad),
          with_bias_(with_bias) {
        W_.resize(c_out, static_cast<Eigen::Index>(c_in) * k * k);
        CounterRng rng(seed, "init/" + name_);
        const double stddev = std::sqrt(2.0 / (static_cast<double>(c_out) * k * k));
        for (Eigen::Index i = 0; i < W_.size(); ++i)
            W_.data()[i] = static_cast<S>(stddev * rng.normal());
        gW_ = Mat<S>::Zero(W_.rows(), W_.cols());
        if (with_bias_) {
            b_ = Mat<S>::Zero(c_out, 1);
            gb_ = Mat<S>::Zero(c_out, 1);
        }
    }

    Fmap<S> forward(const Fmap<S>& x, bool cache) {
        if (x.c != c_in_) throw std::invalid_argument(name_ + ": channel mismatch");
        const int h_out = detail::conv_out_extent(x.h, k_, stride_, pad_);
        const int w_out = detail::conv_out_extent(x.w, k_, stride_, pad_);
        Fmap<S> y = Fmap<S>::zeros(x.n, c_out_, h_out, w_out);
        for (int i = 0; i < x.n; ++i) {
            detail::im2col<S>(x.m.middleCols(i * x.spatial(), x.spatial()), x.c, x.h, x.w, k_,
                              stride_, pad_, patches_);
            y.m.middleCols(i * y.spatial(), y.spatial()).noalias() = W_ * patches_;
        }
        if (with_bias_) y.m.colwise() += b_.col(0);
        last_out_spatial_ = y.spatial();
        if (cache) x_ = x;
        return y;
    }

    Fmap<S> backward(const Fmap<S>& dy) {
        Fmap<S> dx = Fmap<S>::zeros(x_.n, x_.c, x_.h, x_.w);
        for (int i = 0; i < x_.n; ++i) {
            detail::im2col<S>(x_.m.middleCols(i * x_.spatial(), x_.spatial()), x_.c, x_.h, x_.w, k_,
                              stride_, pad_, patches_);
            const auto dy_block = dy.m.middleCols(i * dy.spatial(), dy.spatial());
            gW_.noalias() += dy_block * patches_.transpose();
            dpatches_.noalias() = W_.transpose() * dy_block;
            detail::col2im_add<S>(dpatches_, x_.c, x_.h, x_.w, k_, stride_, pad_,
                                  dx.m.middleCols(i * dx.spatial(), dx.spatial()));
        }
        if (with_bias_) gb_.col(0) += dy.m.rowwise().sum();
        return dx;
    }

    void collect(std::vector<ParamRef<S>>& out, const std::string& prefix, bool trainable) {
        out.push_back({prefix + name_ + ".weight", &W_, &gW_, trainable, false});
        if (with_bias_) out.push_back({prefix + name_ + ".bias", &b_, &gb_, trainable, false});
    }

    long long macs_per_sample() const {
        return static_cast<long long>(k_) * k_ * c_in_ * c_out_ * last_out_spatial_;
    }
    Mat<S>& weight() { return W_; }

  private:
    std::string name_;
    int c_in_, c_out_, k_, stride_, pad_;
    bool with_bias_;
    Mat<S> W_, b_, gW_, gb_;
    Mat<S> patches_, dpatches_;
    Fmap<S> x_;
    Eigen::Index last_out_spatial_ = 0;
};

/// Per-channel batch normalization. Training mode normalizes with biased
/// batch statistics and blends them into the running buffers; evaluation and
/// frozen layers use the running buffers, so a frozen layer behaves like a
/// fixed affine map and never changes state.
template <typename S>
class BatchNorm2d {
  public:
    explicit BatchNorm2d(std::string name, int c)
        : name_(std::move(name)), c_(c), gamma_(Mat<S>::Ones(c, 1)), beta_(Mat<S>::Zero(c, 1)),
          g_gamma_(Mat<S>::Zero(c, 1)), g_beta_(Mat<S>::Zero(c, 1)),
          running_mean_(Mat<S>::Zero(c, 1)), running_var_(Mat<S>::Ones(c, 1)) {}

    Fmap<S> forward(const Fmap<S>& x, bool train, bool cache) {
        if (x.c != c_) throw std::invalid_argument(name_ + ": channel mismatch");
        Fmap<S> y = x;
        const S eps = S(1e-5);
        batch_mode_ = train && !frozen_;
        if (batch_mode_) {
            const S inv_m = S(1) / static_cast<S>(x.m.cols());
            const Mat<S> mean = x.m.rowwise().mean();
            Mat<S> var = (x.m.colwise() - mean.col(0)).array().square().matrix().rowwise().sum() *
                         inv_m;
            inv_std_ = (var.array() + eps).rsqrt();
            y.m = ((x.m.colwise() - mean.col(0)).array().colwise() * inv_std_.col(0).array())
                      .matrix();
            running_mean_ = (S(1) - momentum_) * running_mean_ + momentum_ * mean;
            running_var_ = (S(1) - momentum_) * running_var_ + momentum_ * var;
            if (cache) xhat_ = y.m;
        } else {
            inv_std_ = (running_var_.array() + eps).rsqrt();
            y.m = ((x.m.colwise() - running_mean_.col(0)).array().colwise() *
                   inv_std_.col(0).array())
                      .matrix();
            if (cache) xhat_ = y.m;
        }
        y.m = (y.m.array().colwise() * gamma_.col(0).array()).matrix();
        y.m.colwise() += beta_.col(0);
        return y;
    }

    Fmap<S> backward(const Fmap<S>& dy) {
        Fmap<S> dx = dy;
        g_beta_.col(0) += dy.m.rowwise().sum();
        g_gamma_.col(0) += (dy.m.array() * xhat_.array()).matrix().rowwise().sum();
        if (batch_mode_) {
            const S inv_m = S(1) / static_cast<S>(dy.m.cols());
            const Mat<S> mean_dy = dy.m.rowwise().sum() * inv_m;
            const Mat<S> mean_dyx = (dy.m.array() * xhat_.array()).matrix().rowwise().sum() * inv_m;
            dx.m = dy.m.colwise() - mean_dy.col(0);
            dx.m -= (xhat_.array().colwise() * mean_dyx.col(0).array()).matrix();
            dx.m = (dx.m.array().colwise() * (gamma_.col(0).array() * inv_std_.col(0).array()))
                       .matrix();
        } else {
            dx.m = (dy.m.array().colwise() * (gamma_.col(0).array() * inv_std_.col(0).array()))
                       .matrix();
        }
        return dx;
    }

    void collect(std::vector<ParamRef<S>>& out, const std::string& prefix, bool trainable) {
        out.push_back({prefix + name_ + ".gamma", &gamma_, &g_gamma_, trainable, false});
        out.push_back({prefix + name_ + ".beta", &beta_, &g_beta_, trainable, false});
        out.push_back({prefix + name_ + ".running_mean", &running_mean_, nullptr, false, true});
        out.push_back({prefix + name_ + ".running_var", &running_var_, nullptr, false, true});
    }

    void set_frozen(bool frozen) { frozen_ = frozen; }
    const Mat<S>& running_mean() const { return running_mean_; }
    const Mat<S>& running_var() const { return running_var_; }

  private:
    std::string name_;
    int c_;
    S momentum_ = S(0.1);
    bool frozen_ = false;
    bool batch_mode_ = false;
    Mat<S> gamma_, beta_, g_gamma_, g_beta_;
    Mat<S> running_mean_, running_var_;
    Mat<S> xhat_, inv_std_;
};

template <typename S>
class ReLU {
  public:
    Mat<S> forward(const Mat<S>& x, bool cache) {
        Mat<S> y = x.cwiseMax(S(0));
        if (cache) y_ = y;
        return y;
    }
    Mat<S> backward(const Mat<S>& dy) const {
        return (y_.array() > S(0)).template cast<S>().matrix().cwiseProduct(dy);
    }
    Fmap<S> forward(const Fmap<S>& x, bool cache) {
        Fmap<S> y = x;
        y.m = forward(x.m, cache);
        return y;
    }
    Fmap<S> backward(const Fmap<S>& dy) const {
        Fmap<S> dx = dy;
        dx.m = backward(dy.m);
        return dx;
    }

  private:
    Mat<S> y_;
};

template <typename S>
class MaxPool2d {
  public:
    MaxPool2d(int k, int stride, int pad) : k_(k), stride_(stride), pad_(pad) {}

    Fmap<S> forward(const Fmap<S>& x, bool cache) {
        const int h_out = detail::conv_out_extent(x.h, k_, stride_, pad_);
        const int w_out = detail::conv_out_extent(x.w, k_, stride_, pad_);
        Fmap<S> y = Fmap<S>::zeros(x.n, x.c, h_out, w_out);
        src_.resize(x.c, y.m.cols());
        in_shape_ = {x.n, x.c, x.h, x.w};
        for (int i = 0; i < x.n; ++i) {
            const auto xb = x.m.middleCols(i * x.spatial(), x.spatial());
            auto yb = y.m.middleCols(i * y.spatial(), y.spatial());
            for (int oy = 0; oy < h_out; ++oy)
                for (int ox = 0; ox < w_out; ++ox) {
                    const Eigen::Index q = static_cast<Eigen::Index>(oy) * w_out + ox;
                    for (int c = 0; c < x.c; ++c) {
                        S best = std::numeric_limits<S>::lowest();
                        Eigen::Index best_src = -1;
                        for (int ky = 0; ky < k_; ++ky) {
                            const int iy = oy * stride_ - pad_ + ky;
                            if (iy < 0 || iy >= x.h) continue;
                            for (int kx = 0; kx < k_; ++kx) {
                                const int ix = ox * stride_ - pad_ + kx;
                                if (ix < 0 || ix >= x.w) continue;
                                const Eigen::Index s = static_cast<Eigen::Index>(iy) * x.w + ix;
                                if (xb(c, s) > best) {
                                    best = xb(c, s);
                                    best_src = s;
                                }
                            }
                        }
                        yb(c, q) = best;
                        src_(c, i * y.spatial() + q) = i * x.spatial() + best_src;
                    }
                }
        }
        (void)cache;
        return y;
    }

    Fmap<S> backward(const Fmap<S>& dy) const {
        Fmap<S> dx = Fmap<S>::zeros(in_shape_[0], in_shape_[1], in_shape_[2], in_shape_[3]);
        for (Eigen::Index q = 0; q < dy.m.cols(); ++q)
            for (int c = 0; c < dy.c; ++c) dx.m(c, src_(c, q)) += dy.m(c, q);
        return dx;
    }

  private:
    int k_, stride_, pad_;
    Eigen::Matrix<Eigen::Index, Eigen::Dynamic, Eigen::Dynamic> src_;
    std::array<int, 4> in_shape_{};
};

/// Mean over all spatial positions; output one column per sample.
template <typename S>
class GlobalAvgPool {
  public:
    Mat<S> forward(const Fmap<S>& x) {
        in_shape_ = {x.n, x.c, x.h, x.w};
        Mat<S> y(x.c, x.n);
        for (int i = 0; i < x.n; ++i)
            y.col(i) = x.m.middleCols(i * x.spatial(), x.spatial()).rowwise().mean();
        return y;
    }
    Fmap<S> backward(const Mat<S>& dy) const {
        Fmap<S> dx = Fmap<S>::zeros(in_shape_[0], in_shape_[1], in_shape_[2], in_shape_[3]);
        const S inv = S(1) / static_cast<S>(dx.spatial());
        for (int i = 0; i < dx.n; ++i)
            dx.m.middleCols(i * dx.spatial(), dx.spatial()).colwise() = (dy.col(i) * inv).eval();
        return dx;
    }

  private:
    std::array<int, 4> in_shape_{};
};

/// Collapses the height axis by averaging, then flattens to a (c*w) feature
/// column per sample. Feature index x*c + channel (column-major flatten).
template <typename S>
class HeightPoolFlatten {
  public:
    Mat<S> forward(const Fmap<S>& x) {
        in_shape_ = {x.n, x.c, x.h, x.w};
        Mat<S> y(static_cast<Eigen::Index>(x.c) * x.w, x.n);
        const S inv_h = S(1) / static_cast<S>(x.h);
        for (int i = 0; i < x.n; ++i)
            for (int ox = 0; ox < x.w; ++ox) {
                Mat<S> acc = Mat<S>::Zero(x.c, 1);
                for (int iy = 0; iy < x.h; ++iy)
                    acc.col(0) += x.m.col(i * x.spatial() + static_cast<Eigen::Index>(iy) * x.w + ox);
                y.col(i).segment(static_cast<Eigen::Index>(ox) * x.c, x.c) = acc.col(0) * inv_h;
            }
        return y;
    }
    Fmap<S> backward(const Mat<S>& dy) const {
        Fmap<S> dx = Fmap<S>::zeros(in_shape_[0], in_shape_[1], in_shape_[2], in_shape_[3]);
        const S inv_h = S(1) / static_cast<S>(in_shape_[2]);
        for (int i = 0; i < dx.n; ++i)
            for (int ox = 0; ox < dx.w; ++ox)
                for (int iy = 0; iy < dx.h; ++iy)
                    dx.m.col(i * dx.spatial() + static_cast<Eigen::Index>(iy) * dx.w + ox) =
                        dy.col(i).segment(static_cast<Eigen::Index>(ox) * dx.c, dx.c) * inv_h;
        return dx;
    }

  private:
    std::array<int, 4> in_shape_{};
};

/// Fully-connected layer on column-per-sample matrices; Glorot-uniform init.
template <typename S>
class Dense {
  public:
    Dense(std::string name, int in, int out, std::uint64_t seed)
        : name_(std::move(name)), in_(in), out_(out) {
        W_.resize(out, in);
        CounterRng rng(seed, "init/" + name_);
        const double bound = std::sqrt(6.0 / (in + out));
        for (Eigen::Index i = 0; i < W_.size(); ++i)
            W_.data()[i] = static_cast<S>(rng.uniform(-bound, bound));
        b_ = Mat<S>::Zero(out, 1);
        gW_ = Mat<S>::Zero(out, in);
        gb_ = Mat<S>::Zero(out, 1);
    }

    Mat<S> forward(const Mat<S>& x, bool cache) {
        if (x.rows() != in_) throw std::invalid_argument(name_ + ": input width mismatch");
        Mat<S> y = W_ * x;
        y.colwise() += b_.col(0);
        if (cache) x_ = x;
        return y;
    }

    Mat<S> backward(const Mat<S>& dy) {
        gW_.noalias() += dy * x_.transpose();
        gb_.col(0) += dy.rowwise().sum();
        return W_.transpose() * dy;
    }

    void collect(std::vector<ParamRef<S>>& out, const std::string& prefix, bool trainable = true) {
        out.push_back({prefix + name_ + ".weight", &W_, &gW_, trainable, false});
        out.push_back({prefix + name_ + ".bias", &b_, &gb_, trainable, false});
    }

    long long macs_per_sample() const { return static_cast<long long>(in_) * out_; }
    Mat<S>& weight() { return W_; }
    Mat<S>& bias() { return b_; }

  private:
    std::string name_;
    int in_, out_;
    Mat<S> W_, b_, gW_, gb_, x_;
};

/// Inverted dropout with a private counter stream; the mask sequence is a
/// pure function of (seed, layer name, call ordinal), drawn column-major.
template <typename S>
class Dropout {
  public:
    Dropout(std::string name, double p, std::uint64_t seed)
        : p_(p), rng_(seed, "dropout/" + name) {
        if (p < 0.0 || p >= 1.0) throw std::invalid_argument(name + ": dropout rate outside [0,1)");
    }

    Mat<S> forward(const Mat<S>& x, bool train) {
        if (!train || p_ == 0.0) {
            active_ = false;
            return x;
        }
        active_ = true;
        mask_.resize(x.rows(), x.cols());
        const S keep_scale = S(1.0 / (1.0 - p_));
        for (Eigen::Index i = 0; i < mask_.size(); ++i)
            mask_.data()[i] = rng_.uniform() >= p_ ? keep_scale : S(0);
        return x.cwiseProduct(mask_);
    }

    Mat<S> backward(const Mat<S>& dy) const { return active_ ? dy.cwiseProduct(mask_).eval() : dy; }

  private:
    double p_;
    CounterRng rng_;
    bool active_ = false;
    Mat<S> mask_;
};

/// Per-sample (per-column) layer normalization with affine parameters.
template <typename S>
class LayerNorm {
  public:
    LayerNorm(std::string name, int dim)
        : name_(std::move(name)), dim_(dim), gamma_(Mat<S>::Ones(dim, 1)),
          beta_(Mat<S>::Zero(dim, 1)), g_gamma_(Mat<S>::Zero(dim, 1)),
          g_beta_(Mat<S>::Zero(dim, 1)) {}

    Mat<S> forward(const Mat<S>& x, bool cache) {
        if (x.rows() != dim_) throw std::invalid_argument(name_ + ": width mismatch");
        const S eps = S(1e-5);
        const S inv_d = S(1) / static_cast<S>(dim_);
        Mat<S> xhat(x.rows(), x.cols());
        inv_std_.resize(1, x.cols());
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            const S mean = x.col(j).mean();
            const S var = (x.col(j).array() - mean).square().sum() * inv_d;
            inv_std_(0, j) = S(1) / std::sqrt(var + eps);
            xhat.col(j) = (x.col(j).array() - mean) * inv_std_(0, j);
        }
        if (cache) xhat_ = xhat;
        Mat<S> y = (xhat.array().colwise() * gamma_.col(0).array()).matrix();
        y.colwise() += beta_.col(0);
        return y;
    }

    Mat<S> backward(const Mat<S>& dy) {
        g_beta_.col(0) += dy.rowwise().sum();
        g_gamma_.col(0) += (dy.array() * xhat_.array()).matrix().rowwise().sum();
        const S inv_d = S(1) / static_cast<S>(dim_);
        Mat<S> dx(dy.rows(), dy.cols());
        for (Eigen::Index j = 0; j < dy.cols(); ++j) {
            const auto g = (dy.col(j).array() * gamma_.col(0).array()).eval();
            const S mean_g = g.sum() * inv_d;
            const S mean_gx = (g * xhat_.col(j).array()).sum() * inv_d;
            dx.col(j) = ((g - mean_g - xhat_.col(j).array() * mean_gx) * inv_std_(0, j)).matrix();
        }
        return dx;
    }

    void collect(std::vector<ParamRef<S>>& out, const std::string& prefix) {
        out.push_back({prefix + name_ + ".gamma", &gamma_, &g_gamma_, true, false});
        out.push_back({prefix + name_ + ".beta", &beta_, &g_beta_, true, false});
    }

  private:
    std::string name_;
    int dim_;
    Mat<S> gamma_, beta_, g_gamma_, g_beta_, xhat_, inv_std_;
};

/// Single-channel 1-D convolution over a periodic axis (wrap-around padding),
/// kernel width k centered on each bin. Taps start at the averaging kernel so
/// the residual smoothing mix behaves as designed before any training.
template <typename S>
class CircularConv1d {
  public:
    CircularConv1d(std::string name, int k) : name_(std::move(name)), k_(k) {
        if (k < 1 || k % 2 == 0) throw std::invalid_argument(name_ + ": kernel must be odd");
        W_ = Mat<S>::Constant(k, 1, S(1) / static_cast<S>(k));
        b_ = Mat<S>::Zero(1, 1);
        gW_ = Mat<S>::Zero(k, 1);
        gb_ = Mat<S>::Zero(1, 1);
    }

    Mat<S> forward(const Mat<S>& x, bool cache) {
        const Eigen::Index d = x.rows();
        const int half = k_ / 2;
        Mat<S> y = Mat<S>::Constant(d, x.cols(), b_(0, 0));
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            for (Eigen::Index t = 0; t < d; ++t) {
                S acc = S(0);
                for (int tap = 0; tap < k_; ++tap) acc += W_(tap, 0) * x((t + tap - half + d) % d, j);
                y(t, j) += acc;
            }
        if (cache) x_ = x;
        last_bins_ = d;
        return y;
    }

    Mat<S> backward(const Mat<S>& dy) {
        const Eigen::Index d = dy.rows();
        const int half = k_ / 2;
        Mat<S> dx = Mat<S>::Zero(d, dy.cols());
        gb_(0, 0) += dy.sum();
        for (Eigen::Index j = 0; j < dy.cols(); ++j)
            for (Eigen::Index t = 0; t < d; ++t)
                for (int tap = 0; tap < k_; ++tap) {
                    const Eigen::Index s = (t + tap - half + d) % d;
                    gW_(tap, 0) += dy(t, j) * x_(s, j);
                    dx(s, j) += W_(tap, 0) * dy(t, j);
                }
        return dx;
    }

    void collect(std::vector<ParamRef<S>>& out, const std::string& prefix) {
        out.push_back({prefix + name_ + ".weight", &W_, &gW_, true, false});
        out.push_back({prefix + name_ + ".bias", &b_, &gb_, true, false});
    }

    long long macs_per_sample() const { return static_cast<long long>(k_) * last_bins_; }
    Mat<S>& weight() { return W_; }

  private:
    std::string name_;
    int k_;
    Mat<S> W_, b_, gW_, gb_, x_;
    Eigen::Index last_bins_ = 0;
};

/// softplus(x) = log(1 + e^x), evaluated in its overflow-free split form.
template <typename S>
class Softplus {
  public:
    Mat<S> forward(const Mat<S>& x, bool cache) {
        Mat<S> y(x.rows(), x.cols());
        for (Eigen::Index i = 0; i < x.size(); ++i) {
            const S v = x.data()[i];
            y.data()[i] = v > S(0) ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v));
        }
        if (cache) x_ = x;
        return y;
    }
    Mat<S> backward(const Mat<S>& dy) const {
        Mat<S> dx(dy.rows(), dy.cols());
        for (Eigen::Index i = 0; i < dy.size(); ++i)
            dx.data()[i] = dy.data()[i] / (S(1) + std::exp(-x_.data()[i]));
        return dx;
    }

  private:
    Mat<S> x_;
};

template <typename S>
class Sigmoid {
  public:
    Mat<S> forward(const Mat<S>& x, bool cache) {
        Mat<S> y = (S(1) / (S(1) + (-x.array()).exp())).matrix();
        if (cache) y_ = y;
        return y;
    }
    Mat<S> backward(const Mat<S>& dy) const {
        return dy.cwiseProduct((y_.array() * (S(1) - y_.array())).matrix());
    }

  private:
    Mat<S> y_;
};

/// Two 3x3 convolutions with identity (or 1x1 projected) skip connection.
template <typename S>
class BasicBlock {
  public:
    BasicBlock(const std::string& name, int c_in, int c_out, int stride, std::uint64_t seed)
        : name_(name), conv1_(name + ".conv1", c_in, c_out, 3, stride, 1, seed),
          bn1_(name + ".bn1", c_out), conv2_(name + ".conv2", c_out, c_out, 3, 1, 1, seed),
          bn2_(name + ".bn2", c_out), projected_(stride != 1 || c_in != c_out) {
        if (projected_) {
            proj_conv_.emplace(name + ".downsample.conv", c_in, c_out, 1, stride, 0, seed);
            proj_bn_.emplace(name + ".downsample.bn", c_out);
        }
    }

    Fmap<S> forward(const Fmap<S>& x, bool train, bool cache) {
        Fmap<S> main = relu1_.forward(bn1_.forward(conv1_.forward(x, cache), train, cache), cache);
        main = bn2_.forward(conv2_.forward(main, cache), train, cache);
        Fmap<S> skip = projected_
                           ? proj_bn_->forward(proj_conv_->forward(x, cache), train, cache)
                           : x;
        main.m += skip.m;
        return relu2_.forward(main, cache);
    }

    Fmap<S> backward(const Fmap<S>& dy) {
        const Fmap<S> dsum = relu2_.backward(dy);
        Fmap<S> dmain = conv1_.backward(bn1_.backward(relu1_.backward(
            conv2_.backward(bn2_.backward(dsum)))));
        if (projected_) {
            const Fmap<S> dskip = proj_conv_->backward(proj_bn_->backward(dsum));
            dmain.m += dskip.m;
        } else {
            dmain.m += dsum.m;
        }
        return dmain;
    }

    void set_frozen(bool frozen) {
        frozen_ = frozen;
        bn1_.set_frozen(frozen);
        bn2_.set_frozen(frozen);
        if (projected_) proj_bn_->set_frozen(frozen);
    }
    bool frozen() const { return frozen_; }

    void collect(std::vector<ParamRef<S>>& out, const std::string& prefix) {
        conv1_.collect(out, prefix, !frozen_);
        bn1_.collect(out, prefix, !frozen_);
        conv2_.collect(out, prefix, !frozen_);
        bn2_.collect(out, prefix, !frozen_);
        if (projected_) {
            proj_conv_->collect(out, prefix, !frozen_);
            proj_bn_->collect(out, prefix, !frozen_);
        }
    }

    long long macs_per_sample() const {
        long long acc = conv1_.macs_per_sample() + conv2_.macs_per_sample();
        if (projected_) acc += proj_conv_->macs_per_sample();
        return acc;
    }

  private:
    std::string name_;
    Conv2d<S> conv1_;
    BatchNorm2d<S> bn1_;
    Conv2d<S> conv2_;
    BatchNorm2d<S> bn2_;
    ReLU<S> relu1_, relu2_;
    bool projected_;
    bool frozen_ = false;
    std::optional<Conv2d<S>> proj_conv_;
    std::optional<BatchNorm2d<S>> proj_bn_;
};

/// Global gradient-norm clip over the trainable parameters. Returns the
/// pre-clip norm; scales every gradient by max_norm/norm when it exceeds.
template <typename S>
double clip_grad_norm(const std::vector<ParamRef<S>>& refs, double max_norm) {
    double sq = 0.0;
    for (const ParamRef<S>& r : refs)
        if (r.trainable && !r.buffer && r.grad) sq += r.grad->template cast<double>().squaredNorm();
    const double norm = std::sqrt(sq);
    if (max_norm > 0.0 && norm > max_norm) {
        const S scale = static_cast<S>(max_norm / norm);
        for (const ParamRef<S>& r : refs)
            if (r.trainable && !r.buffer && r.grad) *r.grad *= scale;
    }
    return norm;
}

template <typename S>
void zero_grads(const std::vector<ParamRef<S>>& refs) {
    for (const ParamRef<S>& r : refs)
        if (r.grad) r.grad->setZero();
}

}  // namespace vcpred::nn
