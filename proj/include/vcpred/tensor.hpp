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

// Row-major float32 tensor container, rank 1..4.  Deliberately minimal:
// shape bookkeeping plus a flat Eigen array; math code maps views onto the
// flat storage with explicit shapes.

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <vector>

namespace vcpred {

struct Tensor {
    std::uint32_t rank = 0;
    std::array<int, 4> dims{1, 1, 1, 1};
    Eigen::ArrayXf data;

    static Tensor zeros(std::initializer_list<int> shape);

    [[nodiscard]] std::int64_t numel() const {
        return static_cast<std::int64_t>(dims[0]) * dims[1] * dims[2] * dims[3];
    }

    float& operator()(int i) { return data[i]; }
    float operator()(int i) const { return data[i]; }
    float& operator()(int i, int j) { return data[i * dims[1] + j]; }
    float operator()(int i, int j) const { return data[i * dims[1] + j]; }
    float& operator()(int i, int j, int k) { return data[(i * dims[1] + j) * dims[2] + k]; }
    float operator()(int i, int j, int k) const {
        return data[(i * dims[1] + j) * dims[2] + k];
    }
    float& operator()(int i, int j, int k, int l) {
        return data[((i * dims[1] + j) * dims[2] + k) * dims[3] + l];
    }
    float operator()(int i, int j, int k, int l) const {
        return data[((i * dims[1] + j) * dims[2] + k) * dims[3] + l];
    }

    [[nodiscard]] bool same_shape(const Tensor& other) const {
        return rank == other.rank && dims == other.dims;
    }
};

// One record: 16-byte header = u32 magic "VCT1", u32 rank, u16 dims[4]
// (unused trailing dims stored as 1), then numel little-endian float32.
// A file is a plain concatenation of records.
inline constexpr std::uint32_t kTensorMagic = 0x31544356u;  // "VCT1"

void write_tensor_record(std::ostream& os, const Tensor& t);
// Throws std::runtime_error on bad magic, bad shape or truncation.
Tensor read_tensor_record(std::istream& is);

void write_tensors_file(const std::string& path, const std::vector<Tensor>& tensors);
std::vector<Tensor> read_tensors_file(const std::string& path);

}  // namespace vcpred
