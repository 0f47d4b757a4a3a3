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

///
/// \file experiment.hpp
///
/// Seeded Monte Carlo sweeps: one random system and one long trajectory per
/// trial, Markov parameters estimated from growing prefixes, Ho-Kalman on each
/// estimate, and error metrics plus theory bounds for every cell.
///
/// Randomness: trial k draws everything from derive_seed(master, k). Its
/// system uses substream 0 of that seed and the trajectory for horizon T uses
/// substream 1000 + T. The trajectory seed does not depend on the noise
/// level, so the noise levels of one trial see the same standard normal draws
/// scaled by their standard deviations.
///
#ifndef SYSID_EXPERIMENT_HPP
#define SYSID_EXPERIMENT_HPP

#include "sysid/bounds.hpp"
#include "sysid/estimate.hpp"
#include "sysid/hankel.hpp"
#include "sysid/io.hpp"
#include "sysid/lti.hpp"
#include "sysid/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <string>
#include <thread>
#include <vector>

namespace sysid {

struct NoiseLevel {
    double sigma_w = 0;
    double sigma_z = 0;
};

struct ExperimentConfig {
    Index m = 2, n = 5, p = 3;
    double rho_max = 0.9;
    std::vector<Index> T_list{6, 12, 18};
    std::vector<NoiseLevel> noise_levels{{0, 0}, {0.25, 0.25}, {0.5, 0.5}, {1, 1}};
    double sigma_u = 1.0;
    std::vector<Index> N_grid{100, 250, 500, 1000, 2000, 4000};
    Index trials = 20;
    std::uint64_t seed = 1;
    double clip_bound = kDefaultClipBound;
    HankelShapePolicy shape_policy = HankelShapePolicy::Default;
    BoundConfig bounds;
    std::string out_dir = "results";
    bool fixed_system = false;
    Index threads = 1;
    Index hinf_grid = kDefaultHinfGrid;

    void validate() const {
        require(m >= 1 && n >= 1 && p >= 1, ErrorKind::InvalidArgument, "config: dimensions must be positive");
        require(rho_max >= 0 && rho_max < 1, ErrorKind::InvalidArgument, "config: rho_max must lie in [0, 1)");
        require(trials >= 1, ErrorKind::InvalidArgument, "config: trials must be >= 1");
        require(!T_list.empty() && !noise_levels.empty() && !N_grid.empty(), ErrorKind::InvalidArgument,
                "config: T_list, noise_levels and N_grid must be nonempty");
        for (Index T : T_list) require(T >= 2, ErrorKind::InvalidArgument, "config: every T must be >= 2");
        require(N_grid.front() >= 1, ErrorKind::InvalidArgument, "config: N values must be >= 1");
        for (std::size_t i = 1; i < N_grid.size(); ++i)
            require(N_grid[i] > N_grid[i - 1], ErrorKind::InvalidArgument, "config: N_grid must be strictly increasing");
        require(sigma_u > 0, ErrorKind::InvalidArgument, "config: sigma_u must be positive");
        for (const auto& nl : noise_levels)
            require(nl.sigma_w >= 0 && nl.sigma_z >= 0, ErrorKind::InvalidArgument,
                    "config: noise levels must be nonnegative");
        require(clip_bound > 0, ErrorKind::InvalidArgument, "config: clip_bound must be positive");
        require(threads >= 1, ErrorKind::InvalidArgument, "config: threads must be >= 1");
        require(hinf_grid >= 2, ErrorKind::InvalidArgument, "config: hinf_grid must be >= 2");
        bounds.validate();
    }
};

/// Reads `key = value` config text; unknown keys are rejected.
inline ExperimentConfig config_from_text(const std::string& text, ExperimentConfig cfg = {}) {
    const auto doc = io::KeyValueDoc::parse(text);
    auto indices = [](const std::string& s) {
        std::vector<Index> out;
        for (const auto& item : io::split(s, ',')) out.push_back(static_cast<Index>(io::parse_int(item)));
        return out;
    };
    for (const auto& key : doc.keys()) {
        const std::string& v = doc.get(key);
        if (key == "m") cfg.m = doc.get_index(key);
        else if (key == "n") cfg.n = doc.get_index(key);
        else if (key == "p") cfg.p = doc.get_index(key);
        else if (key == "rho_max") cfg.rho_max = doc.get_double(key);
        else if (key == "T_list") cfg.T_list = indices(v);
        else if (key == "N_grid") cfg.N_grid = indices(v);
        else if (key == "noise_levels") {
            // "s" means sigma_w = sigma_z = s; "w:z" sets them separately.
            cfg.noise_levels.clear();
            for (const auto& item : io::split(v, ',')) {
                const auto parts = io::split(item, ':');
                if (parts.size() == 1) cfg.noise_levels.push_back({io::parse_double(parts[0]), io::parse_double(parts[0])});
                else if (parts.size() == 2)
                    cfg.noise_levels.push_back({io::parse_double(parts[0]), io::parse_double(parts[1])});
                else throw Error(ErrorKind::Parse, "config: bad noise level '" + item + "'");
            }
        }
        else if (key == "sigma_u") cfg.sigma_u = doc.get_double(key);
        else if (key == "trials") cfg.trials = doc.get_index(key);
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(std::stoull(v));
        else if (key == "clip_bound") cfg.clip_bound = doc.get_double(key);
        else if (key == "hankel_shape") {
            if (v == "default") cfg.shape_policy = HankelShapePolicy::Default;
            else if (v == "balanced") cfg.shape_policy = HankelShapePolicy::Balanced;
            else throw Error(ErrorKind::Parse, "config: hankel_shape must be 'default' or 'balanced'");
        }
        else if (key == "c_abs") cfg.bounds.c_abs = doc.get_double(key);
        else if (key == "C_abs") cfg.bounds.C_abs = doc.get_double(key);
        else if (key == "c0_abs") cfg.bounds.c0_abs = doc.get_double(key);
        else if (key == "out_dir") cfg.out_dir = v;
        else if (key == "fixed_system") {
            if (v == "true" || v == "1") cfg.fixed_system = true;
            else if (v == "false" || v == "0") cfg.fixed_system = false;
            else throw Error(ErrorKind::Parse, "config: fixed_system must be true or false");
        }
        else if (key == "threads") cfg.threads = doc.get_index(key);
        else if (key == "hinf_grid") cfg.hinf_grid = doc.get_index(key);
        else throw Error(ErrorKind::Parse, "config: unknown key '" + key + "'");
    }
    return cfg;
}

/// One (trial, T, noise level, N) cell, or an aggregate over trials.
struct CellResult {
    std::string row_type = "trial";  // trial | median | mean
    Index trial = 0;
    Index T = 0;
    Index noise_index = 0;
    double sigma_w = 0, sigma_z = 0;
    Index N = 0;
    std::uint64_t seed = 0;  // trajectory seed (master seed on aggregate rows)
    std::string status = "ok";

    // Metric columns in CSV order, see metric_names().
    std::vector<double> values;
};

inline const std::vector<std::string>& metric_names() {
    static const std::vector<std::string> names{
        "spec_err_G", "frob_err_G", "spec_err_H", "err_D", "err_CB", "hinf_rel", "h2_rel",
        "align_err_C", "align_err_B", "align_err_A", "sigma_min_L",
        "bound_N0", "bound_Nw", "bound_R_z", "bound_R_w", "bound_R_e",
        "bound_simple_total", "bound_simple_applicable", "bound_full_total", "bound_full_applicable",
        "bound_hankel_H"};
    return names;
}

inline Index metric_index(const std::string& name) {
    const auto& names = metric_names();
    const auto it = std::find(names.begin(), names.end(), name);
    require(it != names.end(), ErrorKind::InvalidArgument, "unknown metric '" + name + "'");
    return static_cast<Index>(it - names.begin());
}

struct ExperimentResult {
    std::vector<CellResult> rows;  // trial rows sorted, then aggregate rows
};

namespace detail {

inline std::uint64_t trial_seed(std::uint64_t master, Index trial) {
    return derive_seed(master, static_cast<std::uint64_t>(trial));
}

inline std::uint64_t system_seed(const ExperimentConfig& cfg, Index trial) {
    // The fixed system is drawn from trial 0's stream.
    return derive_seed(trial_seed(cfg.seed, cfg.fixed_system ? 0 : trial), 0);
}

inline std::uint64_t trajectory_seed(std::uint64_t master, Index trial, Index T) {
    return derive_seed(trial_seed(master, trial), 1000 + static_cast<std::uint64_t>(T));
}

inline std::vector<CellResult> run_trial(const ExperimentConfig& cfg, Index trial) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const std::size_t width = metric_names().size();
    std::vector<CellResult> out;
    const Index max_N = cfg.N_grid.back();

    auto blank = [&](Index T, Index j, Index N, std::uint64_t seed) {
        CellResult c;
        c.trial = trial;
        c.T = T;
        c.noise_index = j;
        c.sigma_w = cfg.noise_levels[static_cast<std::size_t>(j)].sigma_w;
        c.sigma_z = cfg.noise_levels[static_cast<std::size_t>(j)].sigma_z;
        c.N = N;
        c.seed = seed;
        c.values.assign(width, nan);
        return c;
    };
    auto fail_all = [&](Index T, Index j, std::uint64_t seed, const std::string& msg) {
        for (Index N : cfg.N_grid) {
            CellResult c = blank(T, j, N, seed);
            c.status = "error: " + msg;
            out.push_back(std::move(c));
        }
    };

    StateSpace sys;
    double true_hinf = 0, true_h2 = 0;
    std::string sys_error;
    try {
        sys = random_system(cfg.m, cfg.n, cfg.p, cfg.rho_max, system_seed(cfg, trial));
        true_hinf = hinf_norm(sys, cfg.hinf_grid);
        true_h2 = h2_norm(sys);
    } catch (const std::exception& e) {
        sys_error = e.what();
    }

    for (Index T : cfg.T_list) {
        const std::uint64_t seed = trajectory_seed(cfg.seed, trial, T);
        for (Index j = 0; j < static_cast<Index>(cfg.noise_levels.size()); ++j) {
            if (!sys_error.empty()) {
                fail_all(T, j, seed, sys_error);
                continue;
            }
            const NoiseLevel nl = cfg.noise_levels[static_cast<std::size_t>(j)];
            const NoiseModel noise{cfg.sigma_u, nl.sigma_w, nl.sigma_z};
            Trajectory traj;
            MarkovParams G;
            SystemStats stats;
            HankelShape shape;
            BlockHankel H;
            try {
                traj = simulate(sys, noise, max_N + T - 1, seed);
                G = markov_params(sys, T);
                stats = system_stats(sys, noise, T);
                shape = hankel_shape(T, cfg.m, cfg.p, cfg.shape_policy);
                H = build_hankel(G, shape.T1, shape.T2 + 1);
            } catch (const std::exception& e) {
                fail_all(T, j, seed, e.what());
                continue;
            }
            for (Index N : cfg.N_grid) {
                CellResult c = blank(T, j, N, seed);
                try {
                    const Index len = N + T - 1;
                    const RegressionData data =
                        build_regression(traj.inputs.topRows(len), traj.outputs.topRows(len), T);
                    const MarkovParams G_hat = least_squares_markov(data).G_hat;
                    const BlockHankel H_hat = build_hankel(G_hat, shape.T1, shape.T2 + 1);
                    const RealizationResult real = ho_kalman(G_hat, cfg.n, shape);
                    ErrorReportOptions opts;
                    opts.clip_bound = cfg.clip_bound;
                    opts.hinf_grid = cfg.hinf_grid;
                    opts.true_hinf = true_hinf;
                    opts.true_h2 = true_h2;
                    const ErrorReport rep = error_report(sys, G, G_hat, H, H_hat, real, opts);
                    const Dims dims{cfg.m, cfg.n, cfg.p};
                    const double Nd = static_cast<double>(N);
                    const BoundReport bs = bound_simple(stats, noise, dims, T, Nd, cfg.bounds);
                    const BoundReport bf = bound_full(stats, noise, dims, T, Nd, cfg.bounds);
                    const auto hb = hankel_perturbation_bounds(shape.T1, shape.T2, rep.spec_err_G);
                    c.values = {rep.spec_err_G, rep.frob_err_G, rep.spec_err_H, rep.err_D, rep.err_CB,
                                rep.hinf_rel, rep.h2_rel,
                                rep.alignment ? rep.alignment->err_C : nan,
                                rep.alignment ? rep.alignment->err_B : nan,
                                rep.alignment ? rep.alignment->err_A : nan,
                                real.sigma_min_L,
                                bs.N0, bf.Nw, bf.R_z, bf.R_w, bf.R_e,
                                bs.total, bs.applicable ? 1.0 : 0.0, bf.total, bf.applicable ? 1.0 : 0.0,
                                hb.bound_H};
                } catch (const std::exception& e) {
                    c.values.assign(width, nan);
                    c.status = std::string("error: ") + e.what();
                }
                out.push_back(std::move(c));
            }
        }
    }
    return out;
}

inline double median_of(std::vector<double> v) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size() / 2;
    return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

}  // namespace detail

/// Sorted trial rows followed by median and mean rows per (T, noise, N).
/// Output is independent of cfg.threads.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<std::vector<CellResult>> per_trial(static_cast<std::size_t>(cfg.trials));
    std::atomic<Index> next{0};
    auto worker = [&] {
        for (Index k = next++; k < cfg.trials; k = next++) per_trial[static_cast<std::size_t>(k)] = detail::run_trial(cfg, k);
    };
    const Index workers = std::min(cfg.threads, cfg.trials);
    {
        std::vector<std::jthread> pool;
        for (Index i = 1; i < workers; ++i) pool.emplace_back(worker);
        worker();
    }

    ExperimentResult res;
    for (auto& rows : per_trial)
        for (auto& r : rows) res.rows.push_back(std::move(r));
    // Rows within a trial are already in (T, noise, N) order; trials are in index order.

    const std::size_t width = metric_names().size();
    for (Index T : cfg.T_list) {
        for (Index j = 0; j < static_cast<Index>(cfg.noise_levels.size()); ++j) {
            for (Index N : cfg.N_grid) {
                std::vector<std::vector<double>> cols(width);
                Index ok = 0;
                for (const auto& r : res.rows) {
                    if (r.row_type != "trial" || r.T != T || r.noise_index != j || r.N != N || r.status != "ok")
                        continue;
                    ++ok;
                    for (std::size_t c = 0; c < width; ++c)
                        if (!std::isnan(r.values[c])) cols[c].push_back(r.values[c]);
                }
                for (const char* kind : {"median", "mean"}) {
                    CellResult a;
                    a.row_type = kind;
                    a.trial = -1;
                    a.T = T;
                    a.noise_index = j;
                    a.sigma_w = cfg.noise_levels[static_cast<std::size_t>(j)].sigma_w;
                    a.sigma_z = cfg.noise_levels[static_cast<std::size_t>(j)].sigma_z;
                    a.N = N;
                    a.seed = cfg.seed;
                    a.status = "trials=" + std::to_string(ok);
                    a.values.resize(width);
                    for (std::size_t c = 0; c < width; ++c) {
                        if (std::string(kind) == "median") {
                            a.values[c] = detail::median_of(cols[c]);
                        } else {
                            double s = 0;
                            for (double v : cols[c]) s += v;
                            a.values[c] = cols[c].empty() ? std::numeric_limits<double>::quiet_NaN()
                                                          : s / static_cast<double>(cols[c].size());
                        }
                    }
                    res.rows.push_back(std::move(a));
                }
            }
        }
    }
    return res;
}

inline constexpr const char* kResultsSchemaLine = "#schema=1";

inline std::string results_header() {
    std::string h = "row_type,trial,T,sigma_w,sigma_z,N,seed,status";
    for (const auto& name : metric_names()) h += "," + name;
    return h;
}

inline std::string to_csv(const ExperimentResult& res) {
    std::string s = std::string(kResultsSchemaLine) + " columns=" + std::to_string(8 + metric_names().size()) + "\n";
    s += results_header() + "\n";
    for (const auto& r : res.rows) {
        std::string status = r.status;
        std::replace(status.begin(), status.end(), ',', ';');
        std::replace(status.begin(), status.end(), '\n', ' ');
        s += r.row_type + "," + std::to_string(r.trial) + "," + std::to_string(r.T) + "," +
             io::format_double(r.sigma_w) + "," + io::format_double(r.sigma_z) + "," + std::to_string(r.N) + "," +
             std::to_string(r.seed) + "," + status;
        for (double v : r.values) s += "," + (std::isnan(v) ? std::string("nan") : io::format_double(v));
        s += "\n";
    }
    return s;
}

/// Creates out_dir and checks that results.csv can be written there.
inline std::filesystem::path prepare_out_dir(const std::string& out_dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create output directory '" + out_dir + "': " + ec.message());
    const fs::path probe = fs::path(out_dir) / "results.csv";
    io::write_file(probe.string(), "");
    return fs::path(out_dir);
}

/// A parsed results.csv row (string cells keyed by column name).
struct TableRow {
    std::vector<std::string> cells;
};

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<TableRow> rows;

    Index column(const std::string& name) const {
        const auto it = std::find(columns.begin(), columns.end(), name);
        require(it != columns.end(), ErrorKind::Parse, "results: missing column '" + name + "'");
        return static_cast<Index>(it - columns.begin());
    }
    bool has_column(const std::string& name) const {
        return std::find(columns.begin(), columns.end(), name) != columns.end();
    }
};

inline ResultTable parse_results_csv(const std::string& text) {
    ResultTable t;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        auto cells = io::split(line, ',');
        if (t.columns.empty()) {
            t.columns = std::move(cells);
            continue;
        }
        if (cells.size() != t.columns.size())
            throw Error(ErrorKind::Parse, "results: row with " + std::to_string(cells.size()) + " cells, expected " +
                                              std::to_string(t.columns.size()));
        t.rows.push_back({std::move(cells)});
    }
    return t;
}

}  // namespace sysid

#endif  // SYSID_EXPERIMENT_HPP
