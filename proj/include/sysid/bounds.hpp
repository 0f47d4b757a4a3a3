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
#ifndef SYSID_BOUNDS_HPP
#define SYSID_BOUNDS_HPP

#include "sysid/lti.hpp"

#include <algorithm>
#include <cmath>

// Closed-form finite-sample and robustness bounds. The absolute constants in
// the sample-size thresholds are not known numerically; they are carried in
// BoundConfig (default 1) and every report is shape-only under the defaults.

namespace sysid {

struct BoundConfig {
    double c_abs = 1.0;   // sample-size threshold constant
    double C_abs = 1.0;   // multiplier of the truncation term
    double c0_abs = 1.0;  // offset in the horizon condition

    void validate() const {
        require(c_abs > 0 && C_abs > 0 && c0_abs > 0, ErrorKind::InvalidArgument,
                "bounds: absolute constants must be positive");
    }
};

struct Dims {
    Index m = 1;
    Index n = 1;
    Index p = 1;
};

struct BoundReport {
    double N0 = 0;  // sample threshold of the headline bound
    double Nw = 0;  // process-noise sample threshold
    double R_z = 0;
    double R_w = 0;
    double R_e = 0;
    double total = 0;       // spectral-norm bound on ||G - G_hat||
    double total_frob = 0;  // Frobenius companion (simple bound only)
    bool applicable = false;
    BoundConfig config;
};

/// c T q log^2(2 T q) log^2(2 N q).
inline double sample_threshold(double c, Index horizon, Index q, double N) {
    const double Tq = static_cast<double>(horizon * q);
    const double a = std::log(2.0 * Tq);
    const double b = std::log(2.0 * N * static_cast<double>(q));
    return c * Tq * a * a * b * b;
}

/// sigma_w ||F|| max(sqrt(Nw), Nw / sqrt(N)).
inline double process_noise_term(double sigma_w, double norm_F, double Nw, double N) {
    return sigma_w * norm_F * std::max(std::sqrt(Nw), Nw / std::sqrt(N));
}

/// Headline bound: ((sigma_z + sigma_e + sigma_w ||F||) / sigma_u) sqrt(N0 / N), q = p + n + m.
/// Components are reported as sigma * sqrt(N0) so that total = (R_z + R_w + R_e) / (sigma_u sqrt(N)).
inline BoundReport bound_simple(const SystemStats& st, const NoiseModel& noise, Dims dims, Index horizon, double N,
                                const BoundConfig& cfg = {}) {
    cfg.validate();
    require(noise.sigma_u > 0, ErrorKind::InvalidArgument, "bound_simple: sigma_u must be positive");
    require(N >= 1 && horizon >= 1, ErrorKind::InvalidArgument, "bound_simple: N and T must be >= 1");
    BoundReport r;
    r.config = cfg;
    const Index q = dims.p + dims.n + dims.m;
    r.N0 = sample_threshold(cfg.c_abs, horizon, q, N);
    const double root = std::sqrt(r.N0);
    r.R_z = noise.sigma_z * root;
    r.R_e = st.sigma_e * root;
    r.R_w = noise.sigma_w * st.norm_F * root;
    r.total = (r.R_z + r.R_w + r.R_e) / (noise.sigma_u * std::sqrt(N));
    r.total_frob = ((noise.sigma_z + st.sigma_e) * std::sqrt(static_cast<double>(dims.m)) +
                    noise.sigma_w * st.frob_F) /
                   noise.sigma_u * std::sqrt(r.N0 / N);
    r.applicable = std::pow(st.rho, static_cast<double>(horizon)) <= 0.99 && N >= r.N0;
    return r;
}

/// Full bound (R_z + R_w + R_e) / (sigma_u sqrt(N)) with q = p + n for the process-noise threshold.
inline BoundReport bound_full(const SystemStats& st, const NoiseModel& noise, Dims dims, Index horizon, double N,
                              const BoundConfig& cfg = {}) {
    cfg.validate();
    require(noise.sigma_u > 0, ErrorKind::InvalidArgument, "bound_full: sigma_u must be positive");
    require(N >= 1 && horizon >= 1, ErrorKind::InvalidArgument, "bound_full: N and T must be >= 1");
    require(st.rho < 1.0, ErrorKind::Divergent, "bound_full: undefined for spectral radius >= 1");
    BoundReport r;
    r.config = cfg;
    const double T = static_cast<double>(horizon);
    const double Tp_m = static_cast<double>(horizon * dims.p + dims.m);
    r.Nw = sample_threshold(cfg.c_abs, horizon, dims.p + dims.n, N);
    r.N0 = sample_threshold(cfg.c_abs, horizon, dims.p, N);
    r.R_z = 8.0 * noise.sigma_z * std::sqrt(Tp_m);
    r.R_w = process_noise_term(noise.sigma_w, st.norm_F, r.Nw, N);
    const double rhoT = std::pow(st.rho, T);
    r.R_e = cfg.C_abs * st.sigma_e *
            std::sqrt((1.0 + static_cast<double>(dims.m) * T / (N * (1.0 - rhoT))) * Tp_m);
    r.total = (r.R_z + r.R_w + r.R_e) / (noise.sigma_u * std::sqrt(N));
    r.applicable = N >= r.N0;
    return r;
}

/// Upper bound on sum_{tau >= T-1} ||C A^tau B||: Phi ||C|| ||B|| rho^{T-1} / (1 - rho).
inline double tail_spectral_bound(const SystemStats& st, const StateSpace& sys, Index horizon) {
    require(st.rho < 1.0, ErrorKind::Divergent, "tail_spectral_bound: spectral radius must be < 1");
    require(horizon >= 1, ErrorKind::InvalidArgument, "tail_spectral_bound: horizon must be >= 1");
    const double normC = spectral_norm(sys.C), normB = spectral_norm(sys.B);
    if (normC == 0.0 || normB == 0.0) return 0.0;
    return st.phi.value * normC * normB * std::pow(st.rho, static_cast<double>(horizon - 1)) / (1.0 - st.rho);
}

/// Smallest T with T >= (c0 + log(N/T + T(1 + m/p)) - log eps0) / (-log rho).
///
/// Iterates T_{k+1} = max(T_k, ceil(rhs(T_k))) from T_0 = 2 until it repeats. The
/// max keeps the sequence monotone, since the plain map can cycle between two
/// neighbours. The result is then lowered to the smallest T that satisfies the
/// inequality.
inline Index horizon_condition(double rho, Index m, Index p, double N, double eps0, const BoundConfig& cfg = {}) {
    cfg.validate();
    require(eps0 > 0 && eps0 < 1, ErrorKind::InvalidArgument, "horizon_condition: eps0 must lie in (0, 1)");
    require(rho >= 0 && rho < 1, ErrorKind::InvalidArgument, "horizon_condition: spectral radius must lie in [0, 1)");
    require(N > 0 && m >= 1 && p >= 1, ErrorKind::InvalidArgument, "horizon_condition: N, m, p must be positive");
    if (rho == 0.0) return 1;
    const double ratio = 1.0 + static_cast<double>(m) / static_cast<double>(p);
    auto rhs = [&](double T) {
        return (cfg.c0_abs + std::log(N / T + T * ratio) - std::log(eps0)) / (-std::log(rho));
    };
    Index T = 2;
    bool converged = false;
    for (int iter = 0; iter < 100; ++iter) {
        const Index next = std::max<Index>(T, static_cast<Index>(std::ceil(rhs(static_cast<double>(T)))));
        if (next == T) {
            converged = true;
            break;
        }
        T = next;
    }
    require(converged, ErrorKind::Numerical, "horizon_condition: fixed point did not converge in 100 iterations");
    for (Index t = 1; t < T; ++t)
        if (static_cast<double>(t) >= rhs(static_cast<double>(t))) return t;
    return T;
}

inline Index horizon_condition(const SystemStats& st, Dims dims, double N, double eps0, const BoundConfig& cfg = {}) {
    return horizon_condition(st.rho, dims.m, dims.p, N, eps0, cfg);
}

struct HankelPerturbationBounds {
    double bound_H = 0;  // on ||H - H_hat|| for the (T1, T2 + 1) Hankel
    double bound_L = 0;  // on ||L - L_hat||
};

inline HankelPerturbationBounds hankel_perturbation_bounds(Index T1, Index T2, double G_err_spec) {
    require(T1 >= 1 && T2 >= 1 && G_err_spec >= 0, ErrorKind::InvalidArgument,
            "hankel_perturbation_bounds: invalid arguments");
    return {std::sqrt(static_cast<double>(std::min(T1, T2 + 1))) * G_err_spec,
            2.0 * std::sqrt(static_cast<double>(std::min(T1, T2))) * G_err_spec};
}

struct RobustnessBounds {
    double bound_CB = 0;  // aligned Frobenius error of C (and B, O, Q)
    double bound_A = 0;   // aligned Frobenius error of A
    bool applicable = false;
};

/// Realization error bounds under ||L - L_hat|| <= sigma_min(L) / 2.
inline RobustnessBounds hokalman_robustness_bounds(double sigma_min_L, Index n, double norm_Hplus, double err_Hplus,
                                                   double err_L) {
    require(sigma_min_L > 0 && n >= 1 && norm_Hplus >= 0 && err_Hplus >= 0 && err_L >= 0,
            ErrorKind::InvalidArgument, "hokalman_robustness_bounds: invalid arguments");
    RobustnessBounds b;
    const double rn = std::sqrt(static_cast<double>(n));
    b.bound_CB = std::sqrt(5.0 * static_cast<double>(n) * err_L);
    b.bound_A = 14.0 * rn / sigma_min_L * (std::sqrt(err_L / sigma_min_L) * (norm_Hplus + err_Hplus) + err_Hplus);
    b.applicable = err_L <= sigma_min_L / 2.0;
    return b;
}

/// Same bounds expressed through the full Hankel error, valid for ||H - H_hat|| <= sigma_min(L) / 4.
inline RobustnessBounds hokalman_hankel_bounds(double sigma_min_L, Index n, double norm_H, double err_H) {
    require(sigma_min_L > 0 && n >= 1 && norm_H >= 0 && err_H >= 0, ErrorKind::InvalidArgument,
            "hokalman_hankel_bounds: invalid arguments");
    RobustnessBounds b;
    const double nerr = static_cast<double>(n) * err_H;
    b.bound_CB = 5.0 * std::sqrt(nerr);
    b.bound_A = 50.0 * std::sqrt(nerr) * norm_H / std::pow(sigma_min_L, 1.5);
    b.applicable = err_H <= sigma_min_L / 4.0;
    return b;
}

struct InfiniteOperatorBounds {
    double bound_G_inf = 0;
    double bound_H_inf = 0;
    bool applicable = false;
};

/// (8 sigma_z / sigma_u + eps0) sqrt((Tp + m) / N) and T times that for the Hankel operator.
/// Applicable only without process noise (and when T meets horizon_condition, checked by the caller).
inline InfiniteOperatorBounds infinite_operator_bounds(const NoiseModel& noise, Dims dims, Index horizon, double N,
                                                       double eps0) {
    require(noise.sigma_u > 0, ErrorKind::InvalidArgument, "infinite_operator_bounds: sigma_u must be positive");
    require(eps0 >= 0 && eps0 < 1 && N > 0 && horizon >= 1, ErrorKind::InvalidArgument,
            "infinite_operator_bounds: invalid arguments");
    InfiniteOperatorBounds b;
    b.bound_G_inf = (8.0 * noise.sigma_z / noise.sigma_u + eps0) *
                    std::sqrt(static_cast<double>(horizon * dims.p + dims.m) / N);
    b.bound_H_inf = static_cast<double>(horizon) * b.bound_G_inf;
    b.applicable = noise.sigma_w == 0.0;
    return b;
}

}  // namespace sysid

#endif  // SYSID_BOUNDS_HPP
