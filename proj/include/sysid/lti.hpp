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
#ifndef SYSID_LTI_HPP
#define SYSID_LTI_HPP

#include "sysid/core.hpp"
#include "sysid/lyapunov.hpp"
#include "sysid/markov.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace sysid {

/**
 * @brief Discrete-time LTI system
 *
 *   x_{t+1} = A x_t + B u_t + w_t
 *   y_t     = C x_t + D u_t + z_t
 *
 * with n states, p inputs and m outputs.
 */
struct StateSpace {
    Matrix A, B, C, D;

    StateSpace() = default;
    StateSpace(Matrix a, Matrix b, Matrix c, Matrix d)
        : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)) {
        validate();
    }

    Index states() const { return A.rows(); }
    Index inputs() const { return B.cols(); }
    Index outputs() const { return C.rows(); }

    void validate() const {
        const Index n = A.rows();
        require(n >= 1 && A.cols() == n, ErrorKind::InvalidArgument, "statespace: A must be square with n >= 1");
        require(B.rows() == n && B.cols() >= 1, ErrorKind::InvalidArgument, "statespace: B must be n x p with p >= 1");
        require(C.cols() == n && C.rows() >= 1, ErrorKind::InvalidArgument, "statespace: C must be m x n with m >= 1");
        require(D.rows() == C.rows() && D.cols() == B.cols(), ErrorKind::InvalidArgument,
                "statespace: D must be m x p");
    }
};

/// Standard deviations of input, process noise and measurement noise.
/// sigma_u = 0 is accepted for noise-free bookkeeping; the estimators need sigma_u > 0.
struct NoiseModel {
    double sigma_u = 1.0;
    double sigma_w = 0.0;
    double sigma_z = 0.0;

    void validate() const {
        require(std::isfinite(sigma_u) && std::isfinite(sigma_w) && std::isfinite(sigma_z) && sigma_u >= 0 &&
                    sigma_w >= 0 && sigma_z >= 0,
                ErrorKind::InvalidArgument, "noise: standard deviations must be finite and nonnegative");
    }
};

/// Input/output record of one rollout from x_1 = 0. Row t-1 holds time t.
struct Trajectory {
    Matrix inputs;   // N_bar x p
    Matrix outputs;  // N_bar x m
    std::uint64_t seed = 0;
    NoiseModel noise;
    std::optional<Matrix> states;  // N_bar x n, only when requested

    Index length() const { return inputs.rows(); }
};

struct SimulationOptions {
    bool keep_states = false;
};

namespace detail {

inline void step_system(const StateSpace& sys, const NoiseModel& noise, Rng& rng, Index steps,
                        const Matrix* fixed_inputs, const SimulationOptions& opts, Trajectory& traj) {
    const Index n = sys.states(), p = sys.inputs(), m = sys.outputs();
    traj.inputs.resize(steps, p);
    traj.outputs.resize(steps, m);
    if (opts.keep_states) traj.states = Matrix(steps, n);
    Vector x = Vector::Zero(n);
    for (Index t = 0; t < steps; ++t) {
        // Draw order per step: u_t, w_t, z_t.
        Vector u = fixed_inputs ? Vector(fixed_inputs->row(t).transpose()) : rng.normal_vector(p, noise.sigma_u);
        Vector w = rng.normal_vector(n, noise.sigma_w);
        Vector z = rng.normal_vector(m, noise.sigma_z);
        if (!x.allFinite())
            throw OverflowError(t + 1, "simulate: non-finite state at t=" + std::to_string(t + 1));
        traj.inputs.row(t) = u.transpose();
        traj.outputs.row(t) = (sys.C * x + sys.D * u + z).transpose();
        if (opts.keep_states) traj.states->row(t) = x.transpose();
        x = sys.A * x + sys.B * u + w;
    }
}

}  // namespace detail

/// One rollout of length `steps` with Gaussian inputs. Same seed, same bits.
inline Trajectory simulate(const StateSpace& sys, const NoiseModel& noise, Index steps, std::uint64_t seed,
                           const SimulationOptions& opts = {}) {
    sys.validate();
    noise.validate();
    require(steps >= 1, ErrorKind::InvalidArgument, "simulate: horizon must be >= 1");
    Trajectory traj;
    traj.seed = seed;
    traj.noise = noise;
    Rng rng(seed);
    detail::step_system(sys, noise, rng, steps, nullptr, opts, traj);
    return traj;
}

/// Rollout driven by given inputs (rows are u_1..u_N); only w and z are drawn.
inline Trajectory simulate_with_inputs(const StateSpace& sys, const Matrix& inputs, const NoiseModel& noise,
                                       std::uint64_t seed, const SimulationOptions& opts = {}) {
    sys.validate();
    noise.validate();
    require(inputs.rows() >= 1 && inputs.cols() == sys.inputs(), ErrorKind::InvalidArgument,
            "simulate: inputs must be N x p with N >= 1");
    Trajectory traj;
    traj.seed = seed;
    traj.noise = noise;
    Rng rng(seed);
    detail::step_system(sys, noise, rng, inputs.rows(), &inputs, opts, traj);
    return traj;
}

/// [D, CB, CAB, ..., CA^{T-2}B].
inline MarkovParams markov_params(const StateSpace& sys, Index horizon) {
    sys.validate();
    require(horizon >= 1, ErrorKind::InvalidArgument, "markov_params: horizon must be >= 1");
    std::vector<Matrix> blocks;
    blocks.reserve(static_cast<std::size_t>(horizon));
    blocks.push_back(sys.D);
    Matrix AkB = sys.B;
    for (Index k = 1; k < horizon; ++k) {
        blocks.push_back(sys.C * AkB);
        AkB = sys.A * AkB;
    }
    return MarkovParams(sys.outputs(), sys.inputs(), std::move(blocks));
}

/// Benchmark generator: diagonal A with Uniform[0, rho_max] entries,
/// C, D ~ N(0, 1/m) and B ~ N(0, 1/n) entrywise. Draw order: A, B, C, D.
inline StateSpace random_system(Index m, Index n, Index p, double rho_max, std::uint64_t seed) {
    require(m >= 1 && n >= 1 && p >= 1, ErrorKind::InvalidArgument, "random_system: dimensions must be positive");
    require(rho_max >= 0.0 && rho_max < 1.0, ErrorKind::InvalidArgument,
            "random_system: rho_max must lie in [0, 1)");
    Rng rng(seed);
    Matrix A = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) A(i, i) = rng.uniform(0.0, rho_max);
    const double sd_cd = 1.0 / std::sqrt(static_cast<double>(m));
    const double sd_b = 1.0 / std::sqrt(static_cast<double>(n));
    Matrix B = rng.normal_matrix(n, p, sd_b);
    Matrix C = rng.normal_matrix(m, n, sd_cd);
    Matrix D = rng.normal_matrix(m, p, sd_cd);
    return StateSpace(std::move(A), std::move(B), std::move(C), std::move(D));
}

inline double spectral_radius(const Matrix& A) {
    require(A.rows() == A.cols(), ErrorKind::InvalidArgument, "spectral_radius: matrix must be square");
    if (A.size() == 0) return 0.0;
    Eigen::EigenSolver<Matrix> es(A, /*computeEigenvectors=*/false);
    require(es.info() == Eigen::Success, ErrorKind::Numerical, "spectral_radius: eigenvalue solver did not converge");
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

struct PhiResult {
    double value = 1.0;
    Index argmax_tau = 0;     // tau achieving the max; == tau_max signals saturation
    bool degenerate = false;  // rho(A) == 0
};

inline constexpr Index kDefaultTauMax = 200;

/// max_{0 <= tau <= tau_max} ||A^tau|| / rho(A)^tau, a lower approximation of
/// the supremum over all tau. Computed as ||(A/rho)^tau|| to avoid underflow.
///
/// For rho(A) = 0 the ratio is taken as 0 whenever A^tau = 0 and +inf otherwise
/// (tau = 0 contributes 1), and the result is flagged degenerate.
inline PhiResult phi_ratio(const Matrix& A, Index tau_max = kDefaultTauMax) {
    require(tau_max >= 1, ErrorKind::InvalidArgument, "phi_ratio: tau_max must be >= 1");
    const double rho = spectral_radius(A);
    PhiResult out;
    const Index n = A.rows();
    if (rho == 0.0) {
        out.degenerate = true;
        // Nilpotent: any nonzero power gives an unbounded ratio, and A^1 != 0 unless A == 0.
        if (!A.isZero(0.0)) {
            out.value = std::numeric_limits<double>::infinity();
            out.argmax_tau = 1;
        }
        return out;
    }
    const Matrix S = A / rho;
    Matrix P = Matrix::Identity(n, n);
    for (Index tau = 1; tau <= tau_max; ++tau) {
        P = P * S;
        const double r = spectral_norm(P);
        if (r > out.value) {
            out.value = r;
            out.argmax_tau = tau;
        }
    }
    return out;
}

/// Gamma_inf = sum_i A^i (sigma_w^2 I + sigma_u^2 B B^T) (A^T)^i via the discrete Lyapunov equation.
inline Matrix steady_state_cov(const StateSpace& sys, const NoiseModel& noise) {
    sys.validate();
    noise.validate();
    const double rho = spectral_radius(sys.A);
    require(rho < 1.0, ErrorKind::Divergent, "steady_state_cov: spectral radius must be < 1");
    const Index n = sys.states();
    Matrix Q = noise.sigma_w * noise.sigma_w * Matrix::Identity(n, n) +
               noise.sigma_u * noise.sigma_u * sys.B * sys.B.transpose();
    return solve_discrete_lyapunov(sys.A, Q);
}

/// F = [0, C, CA, ..., CA^{T-2}], m x Tn.
inline Matrix process_noise_map(const StateSpace& sys, Index horizon) {
    require(horizon >= 1, ErrorKind::InvalidArgument, "process_noise_map: horizon must be >= 1");
    const Index n = sys.states(), m = sys.outputs();
    Matrix F = Matrix::Zero(m, horizon * n);
    Matrix CAk = sys.C;
    for (Index k = 1; k < horizon; ++k) {
        F.middleCols(k * n, n) = CAk;
        CAk = CAk * sys.A;
    }
    return F;
}

/// C A^k.
inline Matrix observability_row(const StateSpace& sys, Index k) {
    Matrix M = sys.C;
    for (Index i = 0; i < k; ++i) M = M * sys.A;
    return M;
}

/// System constants that enter the finite-sample bounds.
struct SystemStats {
    double rho = 0;
    PhiResult phi;
    Matrix gamma_inf;
    double gamma_inf_norm = 0;
    double gamma_inf_trace = 0;
    double norm_CA_tail = 0;  // ||C A^{T-1}||
    double sigma_e = 0;
    double norm_F = 0;
    double frob_F = 0;
    Index horizon = 0;
};

inline SystemStats system_stats(const StateSpace& sys, const NoiseModel& noise, Index horizon,
                                Index tau_max = kDefaultTauMax) {
    sys.validate();
    noise.validate();
    require(horizon >= 1, ErrorKind::InvalidArgument, "system_stats: horizon must be >= 1");
    SystemStats st;
    st.horizon = horizon;
    st.rho = spectral_radius(sys.A);
    st.phi = phi_ratio(sys.A, tau_max);
    st.gamma_inf = steady_state_cov(sys, noise);
    st.gamma_inf_norm = spectral_norm(st.gamma_inf);
    st.gamma_inf_trace = st.gamma_inf.trace();
    st.norm_CA_tail = spectral_norm(observability_row(sys, horizon - 1));
    if (st.norm_CA_tail == 0.0) {
        st.sigma_e = 0.0;
    } else {
        const double T = static_cast<double>(horizon);
        const double decay = 1.0 - std::pow(st.rho, 2.0 * T);
        st.sigma_e = st.phi.value * st.norm_CA_tail * std::sqrt(T * st.gamma_inf_norm / decay);
    }
    const Matrix F = process_noise_map(sys, horizon);
    st.norm_F = spectral_norm(F);
    st.frob_F = F.norm();
    return st;
}

}  // namespace sysid

#endif  // SYSID_LTI_HPP
