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

#include <string>
#include <vector>

namespace vcpred {

/// One labeled polyline; x and y must have equal nonzero length.
struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

/// Static SVG line chart. Byte-deterministic for identical inputs.
void write_line_svg(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series);

/// Static SVG bar chart over `counts` equal bins spanning [lo, hi].
void write_hist_svg(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::vector<long long>& counts, double lo,
                    double hi);

}  // namespace vcpred
