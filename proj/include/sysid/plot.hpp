/*
 Copyright 2026 The sysid Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef SYSID_PLOT_HPP
#define SYSID_PLOT_HPP

#include "sysid/experiment.hpp"
#include "sysid/io.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace sysid::plot {

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;  // (x, y), x increasing
    bool dashed = false;
};

struct Panel {
    std::string title;
    std::string x_label = "N";
    std::string y_label;
    std::vector<Series> series;
};

namespace detail {

inline const char* color(std::size_t i) {
    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
    return palette[i % (sizeof palette / sizeof palette[0])];
}

inline std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '&') out += "&amp;";
        else out += c;
    }
    return out;
}

inline std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace detail

/// Log-log SVG 1.1 rendering. Nonpositive or non-finite points are skipped;
/// a series with one point is drawn as a marker only.
inline std::string render_svg(const Panel& panel) {
    const double W = 640, H = 440, left = 80, right = 170, top = 40, bottom = 60;
    const double pw = W - left - right, ph = H - top - bottom;

    double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
    for (const auto& s : panel.series)
        for (auto [x, y] : s.points)
            if (x > 0 && y > 0 && std::isfinite(x) && std::isfinite(y)) {
                xmin = std::min(xmin, x), xmax = std::max(xmax, x);
                ymin = std::min(ymin, y), ymax = std::max(ymax, y);
            }
    if (!std::isfinite(xmin)) xmin = 1, xmax = 10, ymin = 1, ymax = 10;
    double lx0 = std::floor(std::log10(xmin)), lx1 = std::ceil(std::log10(xmax));
    double ly0 = std::floor(std::log10(ymin)), ly1 = std::ceil(std::log10(ymax));
    if (lx1 <= lx0) lx1 = lx0 + 1;
    if (ly1 <= ly0) ly1 = ly0 + 1;
    auto px = [&](double x) { return left + (std::log10(x) - lx0) / (lx1 - lx0) * pw; };
    auto py = [&](double y) { return top + ph - (std::log10(y) - ly0) / (ly1 - ly0) * ph; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << left + pw / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"15\">"
       << detail::esc(panel.title) << "</text>\n"
       << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
       << "\" fill=\"none\" stroke=\"black\"/>\n";

    for (double e = lx0; e <= lx1; e += 1) {
        const double x = left + (e - lx0) / (lx1 - lx0) * pw;
        os << "<line x1=\"" << x << "\" y1=\"" << top << "\" x2=\"" << x << "\" y2=\"" << top + ph
           << "\" stroke=\"#dddddd\"/>\n"
           << "<text x=\"" << x << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           << "font-size=\"11\">1e" << e << "</text>\n";
    }
    for (double e = ly0; e <= ly1; e += 1) {
        const double y = top + ph - (e - ly0) / (ly1 - ly0) * ph;
        os << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << left + pw << "\" y2=\"" << y
           << "\" stroke=\"#dddddd\"/>\n"
           << "<text x=\"" << left - 6 << "\" y=\"" << y + 4 << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           << "font-size=\"11\">1e" << e << "</text>\n";
    }
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << H - 18
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << detail::esc(panel.x_label)
       << "</text>\n"
       << "<text transform=\"translate(20," << top + ph / 2
       << ") rotate(-90)\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
       << detail::esc(panel.y_label) << "</text>\n";

    for (std::size_t i = 0; i < panel.series.size(); ++i) {
        const auto& s = panel.series[i];
        const char* col = detail::color(i);
        std::vector<std::pair<double, double>> pts;
        for (auto [x, y] : s.points)
            if (x > 0 && y > 0 && std::isfinite(x) && std::isfinite(y)) pts.emplace_back(px(x), py(y));
        if (pts.size() >= 2) {
            os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"2\"";
            if (s.dashed) os << " stroke-dasharray=\"6,4\"";
            os << " points=\"";
            for (auto [x, y] : pts) os << detail::num(x) << "," << detail::num(y) << " ";
            os << "\"/>\n";
        }
        if (!s.dashed)
            for (auto [x, y] : pts)
                os << "<circle cx=\"" << detail::num(x) << "\" cy=\"" << detail::num(y) << "\" r=\"3\" fill=\"" << col
                   << "\"/>\n";
        const double ly = top + 14 + 18 * static_cast<double>(i);
        os << "<line x1=\"" << left + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 36 << "\" y2=\"" << ly
           << "\" stroke=\"" << col << "\" stroke-width=\"2\"" << (s.dashed ? " stroke-dasharray=\"6,4\"" : "")
           << "/>\n"
           << "<text x=\"" << left + pw + 42 << "\" y=\"" << ly + 4 << "\" font-family=\"sans-serif\" font-size=\"11\">"
           << detail::esc(s.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

struct PlotOptions {
    std::string kind = "all";  // fig1 | fig2 | all
    Index T = 0;               // horizon for the fig1 panels, 0 = largest in the table
    bool bounds = true;        // dashed bound overlays on the G panel
};

/// Builds panels from the median rows of a results table:
/// fig1 = errors of D, CB, G, H against N at one T, one curve per noise level;
/// fig2 = normalized Hinf error against N, one panel per noise level, one curve per T.
inline std::vector<std::pair<std::string, Panel>> build_panels(const ResultTable& table, const PlotOptions& opts = {}) {
    std::vector<std::pair<std::string, Panel>> out;
    if (table.rows.empty()) return out;
    const Index c_type = table.column("row_type"), c_T = table.column("T"), c_w = table.column("sigma_w"),
                c_z = table.column("sigma_z"), c_N = table.column("N");
    std::vector<const TableRow*> med;
    for (const auto& r : table.rows)
        if (r.cells[static_cast<std::size_t>(c_type)] == "median") med.push_back(&r);
    if (med.empty()) return out;

    auto cell = [](const TableRow* r, Index c) { return r->cells[static_cast<std::size_t>(c)]; };
    std::vector<Index> Ts;
    std::vector<std::pair<std::string, std::string>> noises;
    for (const auto* r : med) {
        const Index T = static_cast<Index>(io::parse_int(cell(r, c_T)));
        if (std::find(Ts.begin(), Ts.end(), T) == Ts.end()) Ts.push_back(T);
        std::pair<std::string, std::string> nz{cell(r, c_w), cell(r, c_z)};
        if (std::find(noises.begin(), noises.end(), nz) == noises.end()) noises.push_back(nz);
    }
    auto noise_label = [](const std::pair<std::string, std::string>& nz) {
        return nz.first == nz.second ? "sigma_w=sigma_z=" + nz.first : "sigma_w=" + nz.first + " sigma_z=" + nz.second;
    };
    auto series_for = [&](Index T, const std::pair<std::string, std::string>& nz, const std::string& metric) {
        const Index c = table.column(metric);
        std::vector<std::pair<double, double>> pts;
        for (const auto* r : med)
            if (io::parse_int(cell(r, c_T)) == T && cell(r, c_w) == nz.first && cell(r, c_z) == nz.second)
                pts.emplace_back(io::parse_double(cell(r, c_N)), io::parse_double(cell(r, c)));
        std::sort(pts.begin(), pts.end());
        return pts;
    };

    if (opts.kind == "fig1" || opts.kind == "all") {
        const Index T = opts.T > 0 ? opts.T : *std::max_element(Ts.begin(), Ts.end());
        const std::vector<std::pair<std::string, std::string>> quantities{
            {"err_D", "||D - D_hat||"}, {"err_CB", "||CB - (CB)_hat||"}, {"spec_err_G", "||G - G_hat||"},
            {"spec_err_H", "||H - H_hat||"}};
        for (const auto& [metric, label] : quantities) {
            Panel p;
            p.title = label + " (T=" + std::to_string(T) + ", median)";
            p.y_label = label;
            for (const auto& nz : noises) p.series.push_back({noise_label(nz), series_for(T, nz, metric), false});
            if (opts.bounds && metric == "spec_err_G" && table.has_column("bound_full_total"))
                for (const auto& nz : noises)
                    p.series.push_back({"bound " + noise_label(nz), series_for(T, nz, "bound_full_total"), true});
            out.emplace_back("fig1_" + metric + "_T" + std::to_string(T) + ".svg", std::move(p));
        }
    }
    if (opts.kind == "fig2" || opts.kind == "all") {
        for (std::size_t j = 0; j < noises.size(); ++j) {
            Panel p;
            p.title = "Normalized Hinf error, " + noise_label(noises[j]);
            p.y_label = "||S - S_hat||_Hinf / ||S||_Hinf";
            for (Index T : Ts) p.series.push_back({"T=" + std::to_string(T), series_for(T, noises[j], "hinf_rel"), false});
            out.emplace_back("fig2_hinf_noise" + std::to_string(j) + ".svg", std::move(p));
        }
    }
    return out;
}

/// Writes one SVG per panel into out_dir and returns the file paths.
/// An empty table writes nothing.
inline std::vector<std::string> plot_results(const ResultTable& table, const std::string& out_dir,
                                             const PlotOptions& opts = {}) {
    std::vector<std::string> files;
    const auto panels = build_panels(table, opts);
    if (panels.empty()) return files;
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create '" + out_dir + "': " + ec.message());
    for (const auto& [name, panel] : panels) {
        const auto path = (std::filesystem::path(out_dir) / name).string();
        io::write_file(path, render_svg(panel));
        files.push_back(path);
    }
    return files;
}

}  // namespace sysid::plot

#endif  // SYSID_PLOT_HPP
