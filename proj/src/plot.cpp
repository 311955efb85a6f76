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

#include "vcpred/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vcpred {

namespace {

constexpr int kWidth = 640;
constexpr int kHeight = 400;
constexpr int kLeft = 62;
constexpr int kRight = 16;
constexpr int kTop = 34;
constexpr int kBottom = 46;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    double scale(double v, double px_lo, double px_hi) const {
        const double t = hi > lo ? (v - lo) / (hi - lo) : 0.5;
        return px_lo + t * (px_hi - px_lo);
    }
};

Axis fit_axis(double lo, double hi) {
    if (!(std::isfinite(lo) && std::isfinite(hi))) return {0.0, 1.0};
    if (hi <= lo) {
        const double pad = std::max(1e-12, std::abs(lo) * 0.1 + 0.5);
        return {lo - pad, lo + pad};
    }
    const double pad = (hi - lo) * 0.05;
    return {lo - pad, hi + pad};
}

void open_svg(std::ostringstream& out, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << kWidth / 2 << "\" y=\"20\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
}

void draw_frame(std::ostringstream& out, const Axis& xa, const Axis& ya, const std::string& xl,
                const std::string& yl) {
    const int x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;
    out << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
        << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
        << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = xa.lo + (xa.hi - xa.lo) * i / 4.0;
        const double px = xa.scale(fx, x0, x1);
        out << "<line x1=\"" << num(px) << "\" y1=\"" << y0 << "\" x2=\"" << num(px) << "\" y2=\""
            << y0 + 4 << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << num(px) << "\" y=\"" << y0 + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << num(fx)
            << "</text>\n";
        const double fy = ya.lo + (ya.hi - ya.lo) * i / 4.0;
        const double py = ya.scale(fy, y0, y1);
        out << "<line x1=\"" << x0 - 4 << "\" y1=\"" << num(py) << "\" x2=\"" << x0 << "\" y2=\""
            << num(py) << "\" stroke=\"black\"/>\n"
            << "<text x=\"" << x0 - 7 << "\" y=\"" << num(py + 4)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << num(fy)
            << "</text>\n";
    }
    out << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 8
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << xl
        << "</text>\n"
        << "<text x=\"14\" y=\"" << (y0 + y1) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 14 " << (y0 + y1) / 2 << ")\">" << yl << "</text>\n";
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write plot file: " + path);
    out << text;
}

}  // namespace

void write_line_svg(const std::string& path, const std::string& title, const std::string& x_label,
                    const std::string& y_label, const std::vector<PlotSeries>& series) {
    if (series.empty()) throw std::invalid_argument("plot needs at least one series");
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size() || s.x.empty())
            throw std::invalid_argument("plot series must pair x and y");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xlo = std::min(xlo, s.x[i]);
            xhi = std::max(xhi, s.x[i]);
            ylo = std::min(ylo, s.y[i]);
            yhi = std::max(yhi, s.y[i]);
        }
    }
    const Axis xa = fit_axis(xlo, xhi), ya = fit_axis(ylo, yhi);
    const int x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;

    std::ostringstream out;
    open_svg(out, title);
    draw_frame(out, xa, ya, x_label, y_label);
    for (std::size_t si = 0; si < series.size(); ++si) {
        const char* color = kColors[si % 6];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < series[si].x.size(); ++i) {
            out << num(xa.scale(series[si].x[i], x0, x1)) << ","
                << num(ya.scale(series[si].y[i], y0, y1)) << " ";
        }
        out << "\"/>\n";
        const int ly = kTop + 16 + static_cast<int>(si) * 16;
        out << "<line x1=\"" << x1 - 130 << "\" y1=\"" << ly - 4 << "\" x2=\"" << x1 - 110
            << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
            << "<text x=\"" << x1 - 105 << "\" y=\"" << ly
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[si].label
            << "</text>\n";
    }
    out << "</svg>\n";
    write_file(path, out.str());
}

void write_hist_svg(const std::string& path, const std::string& title, const std::string& x_label,
                    const std::vector<long long>& counts, double lo, double hi) {
    if (counts.empty()) throw std::invalid_argument("histogram needs at least one bin");
    long long peak = 1;
    for (const long long c : counts) peak = std::max(peak, c);
    const Axis xa{lo, hi};
    const Axis ya = fit_axis(0.0, static_cast<double>(peak));
    const int x0 = kLeft, x1 = kWidth - kRight, y0 = kHeight - kBottom, y1 = kTop;

    std::ostringstream out;
    open_svg(out, title);
    draw_frame(out, xa, ya, x_label, "count");
    const double bin_w = (hi - lo) / static_cast<double>(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0) continue;
        const double bx0 = xa.scale(lo + bin_w * static_cast<double>(i), x0, x1);
        const double bx1 = xa.scale(lo + bin_w * static_cast<double>(i + 1), x0, x1);
        const double by = ya.scale(static_cast<double>(counts[i]), y0, y1);
        out << "<rect x=\"" << num(bx0) << "\" y=\"" << num(by) << "\" width=\""
            << num(std::max(0.5, bx1 - bx0 - 0.5)) << "\" height=\"" << num(y0 - by)
            << "\" fill=\"#1f77b4\"/>\n";
    }
    out << "</svg>\n";
    write_file(path, out.str());
}

}  // namespace vcpred
