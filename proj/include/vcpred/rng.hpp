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

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string_view>

#include "vcpred/hash.hpp"

namespace vcpred {

/// Finalizer from splitmix64; bijective on 64-bit integers.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Counter-based generator. Draw i of stream (seed, name) is a pure function
/// of (seed, name, i), so independently created generators with the same key
/// produce the same sequence and parallel consumers never interleave state.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::string_view stream, std::uint64_t start = 0)
        : key_(mix64(seed ^ mix64(fnv1a64(stream)))), ctr_(start) {}

    std::uint64_t next_u64() { return mix64(key_ + 0x9e3779b97f4a7c15ULL * ++ctr_); }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi). Requires lo <= hi.
    double uniform(double lo, double hi) {
        if (lo > hi)
            throw std::invalid_argument("CounterRng::uniform: empty range");
        return lo + (hi - lo) * uniform();
    }

    /// Uniform integer in [lo, hi], both ends inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (lo > hi)
            throw std::invalid_argument("CounterRng::uniform_int: empty range");
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1u;
        // Lemire multiply-shift; bias < 2^-64 per draw, fully deterministic.
        const auto wide = static_cast<unsigned __int128>(next_u64()) * span;
        return lo + static_cast<std::int64_t>(static_cast<std::uint64_t>(wide >> 64));
    }

    /// Standard normal via Box-Muller; consumes two draws per call.
    double normal() {
        const double u1 = static_cast<double>((next_u64() >> 11) + 1u) * 0x1.0p-53;  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t counter() const { return ctr_; }

  private:
    std::uint64_t key_;
    std::uint64_t ctr_;
};

}  // namespace vcpred
