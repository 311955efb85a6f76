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

#include "vcpred/checkpoint.hpp"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "vcpred/tensor.hpp"

namespace vcpred {

namespace {

Tensor matrix_to_tensor(const Eigen::MatrixXf& m) {
    Tensor t = Tensor::zeros({static_cast<int>(m.rows()), static_cast<int>(m.cols())});
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) t(static_cast<int>(i), static_cast<int>(j)) = m(i, j);
    return t;
}

void tensor_to_matrix(const Tensor& t, Eigen::MatrixXf& m, const std::string& name) {
    if (t.rank != 2 || t.dims[0] != m.rows() || t.dims[1] != m.cols())
        throw std::runtime_error("checkpoint tensor " + name + " does not match the model shape");
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = t(static_cast<int>(i), static_cast<int>(j));
}

template <typename T>
void write_pod(std::ostream& os, T value) {
    os.write(reinterpret_cast<const char*>(&value), sizeof(value));
}

template <typename T>
T read_pod(std::istream& is, const char* what) {
    T value;
    is.read(reinterpret_cast<char*>(&value), sizeof(value));
    if (!is) throw std::runtime_error(std::string("checkpoint: truncated ") + what);
    return value;
}

void write_name(std::ostream& os, const std::string& name) {
    if (name.size() > 0xffff) throw std::invalid_argument("checkpoint: tensor name too long");
    write_pod<std::uint16_t>(os, static_cast<std::uint16_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
}

std::string read_name(std::istream& is) {
    const auto len = read_pod<std::uint16_t>(is, "tensor name");
    std::string name(len, '\0');
    is.read(name.data(), len);
    if (!is) throw std::runtime_error("checkpoint: truncated tensor name");
    return name;
}

nlohmann::json meta_to_json(const CheckpointMeta& meta) {
    nlohmann::json j;
    j["best_val"] = meta.best_val;
    j["epoch"] = meta.epoch;
    j["model"] = nlohmann::json::parse(meta.model_config_json);
    j["train"] = nlohmann::json::parse(meta.train_config_json.empty() ? "{}" : meta.train_config_json);
    return j;
}

CheckpointMeta meta_from_json(const nlohmann::json& j) {
    CheckpointMeta meta;
    meta.best_val = j.at("best_val").get<double>();
    meta.epoch = j.at("epoch").get<int>();
    meta.model_config_json = j.at("model").dump();
    meta.train_config_json = j.at("train").dump();
    return meta;
}

CheckpointMeta read_header(std::istream& is, const std::string& path) {
    const auto magic = read_pod<std::uint32_t>(is, "header");
    if (magic != kCheckpointMagic) throw std::runtime_error("checkpoint has a bad magic: " + path);
    const auto version = read_pod<std::uint32_t>(is, "header");
    if (version != 1u)
        throw std::runtime_error("checkpoint version " + std::to_string(version) + " is unsupported");
    const auto meta_len = read_pod<std::uint64_t>(is, "meta length");
    std::string text(meta_len, '\0');
    is.read(text.data(), static_cast<std::streamsize>(meta_len));
    if (!is) throw std::runtime_error("checkpoint: truncated meta block");
    return meta_from_json(nlohmann::json::parse(text));
}

}  // namespace

void save_checkpoint(const std::string& path, PredictorNet& net, const Adam* optimizer,
                     const CheckpointMeta& meta) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open checkpoint for writing: " + path);
    write_pod<std::uint32_t>(os, kCheckpointMagic);
    write_pod<std::uint32_t>(os, 1u);
    const std::string meta_text = meta_to_json(meta).dump();
    write_pod<std::uint64_t>(os, meta_text.size());
    os.write(meta_text.data(), static_cast<std::streamsize>(meta_text.size()));

    const auto refs = net.params();
    write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(refs.size()));
    for (const auto& r : refs) {
        write_name(os, r.name);
        write_tensor_record(os, matrix_to_tensor(*r.value));
    }

    write_pod<std::uint8_t>(os, optimizer ? 1 : 0);
    if (optimizer) {
        Adam& opt = const_cast<Adam&>(*optimizer);
        write_pod<std::uint64_t>(os, opt.step_count());
        write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(opt.slots().size()));
        for (Adam::Slot& s : opt.slots()) {
            write_name(os, s.name);
            write_tensor_record(os, matrix_to_tensor(s.m));
            write_tensor_record(os, matrix_to_tensor(s.v));
        }
    }
    if (!os) throw std::runtime_error("checkpoint write failed: " + path);
}

CheckpointMeta load_checkpoint(const std::string& path, PredictorNet& net, Adam* optimizer) {
    if (!std::filesystem::exists(path)) throw std::runtime_error("checkpoint not found: " + path);
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("checkpoint not found: " + path);
    const CheckpointMeta meta = read_header(is, path);

    const auto refs = net.params();
    const auto count = read_pod<std::uint32_t>(is, "tensor count");
    if (count != refs.size())
        throw std::runtime_error("checkpoint tensor count does not match the model");
    for (const auto& r : refs) {
        const std::string name = read_name(is);
        if (name != r.name)
            throw std::runtime_error("checkpoint tensor " + name + " does not match the model (expected " +
                                     r.name + ")");
        tensor_to_matrix(read_tensor_record(is), *r.value, name);
    }

    const auto has_opt = read_pod<std::uint8_t>(is, "optimizer flag");
    if (optimizer) {
        if (!has_opt) throw std::runtime_error("checkpoint has no optimizer state: " + path);
        optimizer->set_step_count(read_pod<std::uint64_t>(is, "optimizer step"));
        const auto slots = read_pod<std::uint32_t>(is, "optimizer slot count");
        if (slots != optimizer->slots().size())
            throw std::runtime_error("checkpoint optimizer state does not match the model");
        for (Adam::Slot& s : optimizer->slots()) {
            const std::string name = read_name(is);
            if (name != s.name)
                throw std::runtime_error("checkpoint optimizer slot " + name + " does not match " + s.name);
            tensor_to_matrix(read_tensor_record(is), s.m, name + ".m");
            tensor_to_matrix(read_tensor_record(is), s.v, name + ".v");
        }
    }
    return meta;
}

CheckpointMeta peek_checkpoint(const std::string& path) {
    if (!std::filesystem::exists(path)) throw std::runtime_error("checkpoint not found: " + path);
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("checkpoint not found: " + path);
    return read_header(is, path);
}

}  // namespace vcpred
