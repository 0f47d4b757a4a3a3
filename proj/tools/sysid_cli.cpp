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

// sysid command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 numerical or runtime failure.

#include "sysid/sysid.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace sysid;

struct GlobalOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    std::optional<Index> threads;
    bool quiet = false;
};

struct SystemSource {
    std::string system_file;
    Index m = 2, n = 5, p = 3;
    double rho_max = 0.9;

    void add_options(CLI::App* cmd) {
        cmd->add_option("--system", system_file, "State-space document to use instead of a random system");
        cmd->add_option("--m", m, "Outputs of the random system")->capture_default_str();
        cmd->add_option("--n", n, "States of the random system")->capture_default_str();
        cmd->add_option("--p", p, "Inputs of the random system")->capture_default_str();
        cmd->add_option("--rho-max", rho_max, "Largest pole of the random system")->capture_default_str();
    }

    StateSpace load(std::uint64_t seed) const {
        if (!system_file.empty()) return io::statespace_from_text(io::read_file(system_file));
        return random_system(m, n, p, rho_max, derive_seed(seed, 0));
    }
};

void emit(const GlobalOptions& g, const std::string& path, const std::string& text, const std::string& default_name) {
    std::string target = path;
    if (target.empty() && !g.out_dir.empty()) {
        std::filesystem::create_directories(g.out_dir);
        target = (std::filesystem::path(g.out_dir) / default_name).string();
    }
    if (target.empty() || target == "-") {
        std::cout << text;
    } else {
        io::write_file(target, text);
        if (!g.quiet) std::cerr << "wrote " << target << "\n";
    }
}

Index resolve_threads(const GlobalOptions& g, Index fallback) {
    if (g.threads) return *g.threads;
    if (const char* env = std::getenv("SYSID_THREADS")) {
        try {
            const Index v = static_cast<Index>(io::parse_int(io::trim(env)));
            if (v >= 1) return v;
        } catch (const Error&) {
        }
        throw Error(ErrorKind::InvalidArgument, "SYSID_THREADS must be a positive integer");
    }
    return fallback;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-trajectory LTI system identification: least squares Markov parameters, Ho-Kalman "
                 "realization, finite-sample bounds and Monte Carlo experiments"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    std::uint64_t seed_value = 0;
    Index threads_value = 1;
    app.add_option("--config", g.config, "Experiment config file (key = value)");
    auto* seed_opt = app.add_option("--seed", seed_value, "Master RNG seed");
    app.add_option("--out-dir", g.out_dir, "Output directory");
    auto* threads_opt = app.add_option("--threads", threads_value, "Worker threads (fallback: SYSID_THREADS)")
                            ->check(CLI::PositiveNumber);
    app.add_flag("--quiet", g.quiet, "Suppress progress messages");

    // simulate -------------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "Simulate one trajectory and write it as CSV");
    SystemSource sim_src;
    sim_src.add_options(sim);
    Index sim_length = 1000;
    NoiseModel sim_noise{1.0, 0.0, 0.0};
    std::string sim_out, sim_save_system;
    sim->add_option("--length", sim_length, "Trajectory length N_bar")->capture_default_str()->check(CLI::PositiveNumber);
    sim->add_option("--sigma-u", sim_noise.sigma_u, "Input standard deviation")->capture_default_str();
    sim->add_option("--sigma-w", sim_noise.sigma_w, "Process noise standard deviation")->capture_default_str();
    sim->add_option("--sigma-z", sim_noise.sigma_z, "Measurement noise standard deviation")->capture_default_str();
    sim->add_option("--out", sim_out, "Trajectory CSV path ('-' for stdout)");
    sim->add_option("--save-system", sim_save_system, "Also write the simulated system document here");

    // estimate -------------------------------------------------------------
    auto* est = app.add_subcommand("estimate", "Least-squares Markov parameters from a trajectory CSV");
    std::string est_traj, est_out, est_system;
    Index est_T = 0;
    bool est_exact = false;
    est->add_option("--trajectory", est_traj, "Trajectory CSV");
    est->add_option("--horizon,-T", est_T, "Number of Markov blocks T")->required()->check(CLI::PositiveNumber);
    est->add_option("--out", est_out, "Markov parameter document path ('-' for stdout)");
    est->add_flag("--exact", est_exact, "Write the exact Markov parameters of --system instead of estimating");
    est->add_option("--system", est_system, "State-space document (with --exact)");

    // realize --------------------------------------------------------------
    auto* real = app.add_subcommand("realize", "Ho-Kalman realization from Markov parameters");
    std::string real_in, real_out, real_shape = "default";
    Index real_n = 0, real_T1 = 0, real_T2 = 0;
    double real_suggest_tol = -1;
    real->add_option("--markov", real_in, "Markov parameter document")->required();
    real->add_option("--order,-n", real_n, "System order n")->required()->check(CLI::PositiveNumber);
    real->add_option("--t1", real_T1, "Hankel block rows T1");
    real->add_option("--t2", real_T2, "Hankel block columns T2 (the Hankel matrix has T2 + 1)");
    real->add_option("--shape", real_shape, "Shape policy when --t1/--t2 are absent")
        ->check(CLI::IsMember({"default", "balanced"}))
        ->capture_default_str();
    real->add_option("--suggest-order-tol", real_suggest_tol,
                     "Also report the order suggested by singular value thresholding at this tolerance");
    real->add_option("--out", real_out, "Realization document path ('-' for stdout)");

    // bounds ---------------------------------------------------------------
    auto* bnd = app.add_subcommand("bounds", "Evaluate the theory bounds for a system and noise setting");
    SystemSource bnd_src;
    bnd_src.add_options(bnd);
    NoiseModel bnd_noise{1.0, 0.0, 0.0};
    Index bnd_T = 18, bnd_tau = kDefaultTauMax;
    double bnd_N = 2000, bnd_eps0 = 0.5;
    BoundConfig bnd_cfg;
    bnd->add_option("--sigma-u", bnd_noise.sigma_u)->capture_default_str();
    bnd->add_option("--sigma-w", bnd_noise.sigma_w)->capture_default_str();
    bnd->add_option("--sigma-z", bnd_noise.sigma_z)->capture_default_str();
    bnd->add_option("--horizon,-T", bnd_T)->capture_default_str()->check(CLI::PositiveNumber);
    bnd->add_option("--samples,-N", bnd_N)->capture_default_str()->check(CLI::PositiveNumber);
    bnd->add_option("--eps0", bnd_eps0)->capture_default_str();
    bnd->add_option("--tau-max", bnd_tau)->capture_default_str();
    bnd->add_option("--c-abs", bnd_cfg.c_abs)->capture_default_str();
    bnd->add_option("--C-abs", bnd_cfg.C_abs)->capture_default_str();
    bnd->add_option("--c0-abs", bnd_cfg.c0_abs)->capture_default_str();

    // experiment -----------------------------------------------------------
    auto* xp = app.add_subcommand("experiment", "Run the Monte Carlo sweep and write results.csv plus SVG panels");
    bool xp_fixed = false, xp_no_plot = false;
    Index xp_trials = 0;
    xp->add_flag("--fixed-system", xp_fixed, "Hold one random system across all trials");
    xp->add_option("--trials", xp_trials, "Override the number of trials");
    xp->add_flag("--no-plot", xp_no_plot, "Skip SVG output");

    // plot -----------------------------------------------------------------
    auto* plt = app.add_subcommand("plot", "Render SVG panels from a results.csv");
    std::string plt_in;
    plot::PlotOptions plt_opts;
    bool plt_no_bounds = false;
    plt->add_option("--input", plt_in, "results.csv")->required();
    plt->add_option("--kind", plt_opts.kind)->check(CLI::IsMember({"fig1", "fig2", "all"}))->capture_default_str();
    plt->add_option("--T", plt_opts.T, "Horizon for the fig1 panels (default: largest)");
    plt->add_flag("--no-bounds", plt_no_bounds, "Omit dashed bound overlays");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    if (*seed_opt) g.seed = seed_value;
    if (*threads_opt) g.threads = threads_value;
    const std::uint64_t seed = g.seed.value_or(1);

    try {
        if (*sim) {
            const StateSpace sys = sim_src.load(seed);
            const Trajectory traj = simulate(sys, sim_noise, sim_length, seed);
            emit(g, sim_out, io::trajectory_to_csv(traj), "trajectory.csv");
            if (!sim_save_system.empty()) io::write_file(sim_save_system, io::to_text(sys));
        } else if (*est) {
            MarkovParams G;
            if (est_exact) {
                if (est_system.empty()) throw CLI::ValidationError("--exact requires --system");
                G = markov_params(io::statespace_from_text(io::read_file(est_system)), est_T);
            } else {
                if (est_traj.empty()) throw CLI::ValidationError("--trajectory is required unless --exact is given");
                const Trajectory traj = io::trajectory_from_csv(io::read_file(est_traj));
                const auto res = least_squares_markov(build_regression(traj, est_T));
                G = res.G_hat;
                if (!g.quiet)
                    std::cerr << "sigma_min(U) = " << io::format_double(res.conditioning.sigma_min)
                              << ", sigma_max(U) = " << io::format_double(res.conditioning.sigma_max)
                              << ", rank = " << res.conditioning.rank << "\n";
            }
            emit(g, est_out, io::to_text(G), "markov.txt");
        } else if (*real) {
            const MarkovParams G = io::markov_from_text(io::read_file(real_in));
            HankelShape shape;
            if (real_T1 > 0 || real_T2 > 0) {
                if (real_T1 <= 0 || real_T2 <= 0) throw CLI::ValidationError("--t1 and --t2 must be given together");
                shape = {real_T1, real_T2};
            } else {
                shape = hankel_shape(G.horizon(), G.outputs(), G.inputs(),
                                     real_shape == "balanced" ? HankelShapePolicy::Balanced : HankelShapePolicy::Default);
            }
            if (real_suggest_tol >= 0 && !g.quiet)
                std::cerr << "suggested order = " << suggest_order(G, shape, real_suggest_tol) << "\n";
            emit(g, real_out, io::to_text(ho_kalman(G, real_n, shape)), "realization.txt");
        } else if (*bnd) {
            const StateSpace sys = bnd_src.load(seed);
            const SystemStats st = system_stats(sys, bnd_noise, bnd_T, bnd_tau);
            const Dims dims{sys.outputs(), sys.states(), sys.inputs()};
            const BoundReport bs = bound_simple(st, bnd_noise, dims, bnd_T, bnd_N, bnd_cfg);
            const BoundReport bf = bound_full(st, bnd_noise, dims, bnd_T, bnd_N, bnd_cfg);
            const auto inf = infinite_operator_bounds(bnd_noise, dims, bnd_T, bnd_N, bnd_eps0);
            io::KeyValueDoc d;
            d.set("rho", st.rho);
            d.set("phi", st.phi.value);
            d.set("phi_argmax_tau", st.phi.argmax_tau);
            d.set("gamma_inf_norm", st.gamma_inf_norm);
            d.set("sigma_e", st.sigma_e);
            d.set("norm_F", st.norm_F);
            d.set("simple_N0", bs.N0);
            d.set("simple_total", bs.total);
            d.set("simple_total_frob", bs.total_frob);
            d.set("simple_applicable", std::string(bs.applicable ? "true" : "false"));
            d.set("full_N0", bf.N0);
            d.set("full_Nw", bf.Nw);
            d.set("R_z", bf.R_z);
            d.set("R_w", bf.R_w);
            d.set("R_e", bf.R_e);
            d.set("full_total", bf.total);
            d.set("full_applicable", std::string(bf.applicable ? "true" : "false"));
            d.set("tail_bound", tail_spectral_bound(st, sys, bnd_T));
            d.set("horizon_condition_T", horizon_condition(st, dims, bnd_N, bnd_eps0, bnd_cfg));
            d.set("G_inf_bound", inf.bound_G_inf);
            d.set("H_inf_bound", inf.bound_H_inf);
            d.set("inf_applicable", std::string(inf.applicable ? "true" : "false"));
            d.set("c_abs", bnd_cfg.c_abs);
            d.set("C_abs", bnd_cfg.C_abs);
            d.set("c0_abs", bnd_cfg.c0_abs);
            std::cout << d.str("bounds (absolute constants are configurable surrogates)");
        } else if (*xp) {
            ExperimentConfig cfg;
            if (!g.config.empty()) cfg = config_from_text(io::read_file(g.config));
            if (g.seed) cfg.seed = *g.seed;
            if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
            if (xp_fixed) cfg.fixed_system = true;
            if (xp_trials > 0) cfg.trials = xp_trials;
            cfg.threads = resolve_threads(g, cfg.threads);
            cfg.validate();
            const auto dir = prepare_out_dir(cfg.out_dir);
            if (!g.quiet)
                std::cerr << "running " << cfg.trials << " trials x " << cfg.T_list.size() << " horizons x "
                          << cfg.noise_levels.size() << " noise levels x " << cfg.N_grid.size() << " sample sizes on "
                          << cfg.threads << " thread(s)\n";
            const ExperimentResult res = run_experiment(cfg);
            const std::string csv = to_csv(res);
            io::write_file((dir / "results.csv").string(), csv);
            if (!g.quiet) std::cerr << "wrote " << (dir / "results.csv").string() << "\n";
            if (!xp_no_plot) {
                const auto files = plot::plot_results(parse_results_csv(csv), cfg.out_dir);
                if (!g.quiet) std::cerr << "wrote " << files.size() << " SVG panels\n";
            }
        } else if (*plt) {
            plt_opts.bounds = !plt_no_bounds;
            const ResultTable table = parse_results_csv(io::read_file(plt_in));
            const std::string out = g.out_dir.empty() ? std::filesystem::path(plt_in).parent_path().string() : g.out_dir;
            const auto files = plot::plot_results(table, out.empty() ? "." : out, plt_opts);
            if (files.empty())
                std::cerr << "warning: no median rows in " << plt_in << ", nothing plotted\n";
            else if (!g.quiet)
                std::cerr << "wrote " << files.size() << " SVG panels\n";
        }
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.kind() == ErrorKind::Parse ? 1 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
