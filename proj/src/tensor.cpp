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

#include "vcpred/tensor.hpp"

#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace vcpred {

Tensor Tensor::zeros(std::initializer_list<int> shape) {
    if (shape.size() < 1 || shape.size() > 4)
        throw std::invalid_argument("Tensor: rank must be 1..4");
    Tensor t;
    t.rank = static_cast<std::uint32_t>(shape.size());
    int i = 0;
    for (int d : shape) {
        if (d < 1 || d > 0xffff)
            throw std::invalid_argument("Tensor: dims must be in [1, 65535]");
        t.dims[static_cast<std::size_t>(i++)] = d;
    }
    t.data = Eigen::ArrayXf::Zero(t.numel());
    return t;
}

void write_tensor_record(std::ostream& os, const Tensor& t) {
    if (t.rank < 1 || t.rank > 4 || t.data.size() != t.numel())
        throw std::invalid_argument("write_tensor_record: malformed tensor");
    std::uint8_t header[16];
    std::memcpy(header, &kTensorMagic, 4);
    std::memcpy(header + 4, &t.rank, 4);
    for (int i = 0; i < 4; ++i) {
        const auto d = static_cast<std::uint16_t>(t.dims[static_cast<std::size_t>(i)]);
        std::memcpy(header + 8 + 2 * i, &d, 2);
    }
    os.write(reinterpret_cast<const char*>(header), sizeof(header));
    os.write(reinterpret_cast<const char*>(t.data.data()),
             static_cast<std::streamsize>(t.numel() * 4));
    if (!os) throw std::runtime_error("write_tensor_record: stream write failed");
}

Tensor read_tensor_record(std::istream& is) {
    std::uint8_t header[16];
    is.read(reinterpret_cast<char*>(header), sizeof(header));
    if (is.gcount() != sizeof(header))
        throw std::runtime_error("read_tensor_record: truncated header");
    std::uint32_t magic = 0;
    std::uint32_t rank = 0;
    std::memcpy(&magic, header, 4);
    std::memcpy(&rank, header + 4, 4);
    if (magic != kTensorMagic) throw std::runtime_error("read_tensor_record: bad magic");
    if (rank < 1 || rank > 4) throw std::runtime_error("read_tensor_record: bad rank");
    Tensor t;
    t.rank = rank;
    for (int i = 0; i < 4; ++i) {
        std::uint16_t d = 0;
        std::memcpy(&d, header + 8 + 2 * i, 2);
        if (d < 1) throw std::runtime_error("read_tensor_record: zero dimension");
        t.dims[static_cast<std::size_t>(i)] = d;
    }
    t.data.resize(t.numel());
    is.read(reinterpret_cast<char*>(t.data.data()),
            static_cast<std::streamsize>(t.numel() * 4));
    if (is.gcount() != static_cast<std::streamsize>(t.numel() * 4))
        throw std::runtime_error("read_tensor_record: truncated payload");
    return t;
}

void write_tensors_file(const std::string& path, const std::vector<Tensor>& tensors) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_tensors_file: cannot open " + path);
    for (const Tensor& t : tensors) write_tensor_record(os, t);
}

std::vector<Tensor> read_tensors_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_tensors_file: cannot open " + path);
    std::vector<Tensor> tensors;
    while (is.peek() != std::char_traits<char>::eof())
        tensors.push_back(read_tensor_record(is));
    return tensors;
}

}  // namespace vcpred
