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
#ifndef SYSID_METRICS_HPP
#define SYSID_METRICS_HPP

#include "sysid/hankel.hpp"
#include "sysid/lti.hpp"
#include "sysid/lyapunov.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>

namespace sysid {

// ---------------------------------------------------------------------------
// Alignment of realizations
// ---------------------------------------------------------------------------

struct AlignmentResult {
    Matrix T_unitary;
    double err_C = 0, err_B = 0, err_A = 0;
    double err_O = 0, err_Q = 0;
    bool unique = true;  // false when the cross matrix is rank deficient
};

/// Orthogonal T minimizing ||O - O_hat T||_F^2 + ||Q - T^T Q_hat||_F^2:
/// the polar factor of O_hat^T O + Q_hat Q^T.
inline AlignmentResult procrustes_align(const Matrix& O, const Matrix& O_hat, const Matrix& Q, const Matrix& Q_hat) {
    const Index n = O.cols();
    require(O_hat.rows() == O.rows() && O_hat.cols() == n && Q.rows() == n && Q_hat.rows() == n &&
                Q_hat.cols() == Q.cols(),
            ErrorKind::InvalidArgument, "procrustes_align: shapes do not conform");
    const Matrix M = O_hat.transpose() * O + Q_hat * Q.transpose();
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    AlignmentResult r;
    r.T_unitary = svd.matrixU() * svd.matrixV().transpose();
    const Vector& s = svd.singularValues();
    r.unique = s.size() == 0 || s(s.size() - 1) > 1e-12 * std::max(1.0, s(0));
    r.err_O = (O - O_hat * r.T_unitary).norm();
    r.err_Q = (Q - r.T_unitary.transpose() * Q_hat).norm();
    return r;
}

/// Aligns an estimated realization to a reference one of the same order and
/// fills the aligned C, B and A errors.
inline AlignmentResult procrustes_align(const RealizationResult& truth, const RealizationResult& est) {
    require(truth.order == est.order, ErrorKind::InvalidArgument, "procrustes_align: orders differ");
    AlignmentResult r = procrustes_align(truth.O_hat, est.O_hat, truth.Q_hat, est.Q_hat);
    const Matrix& T = r.T_unitary;
    r.err_C = (truth.C_hat - est.C_hat * T).norm();
    r.err_B = (truth.B_hat - T.transpose() * est.B_hat).norm();
    r.err_A = (truth.A_hat - T.transpose() * est.A_hat * T).norm();
    return r;
}

/// Joint alignment objective at a given orthogonal T.
inline double alignment_objective(const Matrix& O, const Matrix& O_hat, const Matrix& Q, const Matrix& Q_hat,
                                  const Matrix& T) {
    return (O - O_hat * T).squaredNorm() + (Q - T.transpose() * Q_hat).squaredNorm();
}

// ---------------------------------------------------------------------------
// System norms
// ---------------------------------------------------------------------------

/// C (e^{iw} I - A)^{-1} B + D.
inline Eigen::MatrixXcd transfer_function(const StateSpace& sys, double omega) {
    const std::complex<double> z = std::polar(1.0, omega);
    Eigen::MatrixXcd M = -sys.A.cast<std::complex<double>>();
    M.diagonal().array() += z;
    Eigen::MatrixXcd X = M.partialPivLu().solve(sys.B.cast<std::complex<double>>());
    return sys.C.cast<std::complex<double>>() * X + sys.D.cast<std::complex<double>>();
}

inline double transfer_gain(const StateSpace& sys, double omega) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(transfer_function(sys, omega));
    return svd.singularValues()(0);
}

inline constexpr Index kDefaultHinfGrid = 4096;
inline constexpr double kDefaultHinfRefineTol = 1e-6;

/// Peak gain over w in [0, pi]: uniform grid followed by golden-section refinement
/// around the best grid point. The max is reduced sequentially.
inline double hinf_norm(const StateSpace& sys, Index grid_size = kDefaultHinfGrid,
                        double refine_tol = kDefaultHinfRefineTol) {
    sys.validate();
    require(grid_size >= 2 && refine_tol > 0, ErrorKind::InvalidArgument, "hinf_norm: invalid grid settings");
    require(spectral_radius(sys.A) < 1.0, ErrorKind::Divergent, "hinf_norm: system is not stable");
    const double pi = std::numbers::pi;
    const double h = pi / static_cast<double>(grid_size - 1);
    double best = -1.0;
    Index best_k = 0;
    for (Index k = 0; k < grid_size; ++k) {
        const double g = transfer_gain(sys, h * static_cast<double>(k));
        if (g > best) {
            best = g;
            best_k = k;
        }
    }
    double lo = h * static_cast<double>(std::max<Index>(best_k - 1, 0));
    double hi = h * static_cast<double>(std::min<Index>(best_k + 1, grid_size - 1));
    const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
    double f1 = transfer_gain(sys, x1), f2 = transfer_gain(sys, x2);
    for (int iter = 0; iter < 200 && (hi - lo) > refine_tol * pi; ++iter) {
        if (f1 >= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = transfer_gain(sys, x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = transfer_gain(sys, x2);
        }
        best = std::max({best, f1, f2});
    }
    return best;
}

/// sqrt(tr(C P C^T + D D^T)) with P = A P A^T + B B^T.
inline double h2_norm(const StateSpace& sys) {
    sys.validate();
    require(spectral_radius(sys.A) < 1.0, ErrorKind::Divergent, "h2_norm: system is not stable");
    const Matrix P = solve_discrete_lyapunov(sys.A, sys.B * sys.B.transpose());
    const double tr = (sys.C * P * sys.C.transpose()).trace() + (sys.D * sys.D.transpose()).trace();
    return std::sqrt(std::max(tr, 0.0));
}

/// Realization of s1 - s2: block-diagonal A, stacked B, C = [C1, -C2], D = D1 - D2.
inline StateSpace system_difference(const StateSpace& s1, const StateSpace& s2) {
    s1.validate();
    s2.validate();
    require(s1.outputs() == s2.outputs() && s1.inputs() == s2.inputs(), ErrorKind::InvalidArgument,
            "system_difference: input/output dimensions differ");
    const Index n1 = s1.states(), n2 = s2.states();
    Matrix A = Matrix::Zero(n1 + n2, n1 + n2);
    A.topLeftCorner(n1, n1) = s1.A;
    A.bottomRightCorner(n2, n2) = s2.A;
    Matrix B(n1 + n2, s1.inputs());
    B << s1.B, s2.B;
    Matrix C(s1.outputs(), n1 + n2);
    C << s1.C, -s2.C;
    return StateSpace(std::move(A), std::move(B), std::move(C), s1.D - s2.D);
}

// ---------------------------------------------------------------------------
// Error report
// ---------------------------------------------------------------------------

inline constexpr double kDefaultClipBound = 0.99;

struct ErrorReport {
    double spec_err_G = 0, frob_err_G = 0;
    double spec_err_H = 0;
    double err_D = 0, err_CB = 0;
    double hinf_rel = 0, h2_rel = 0;
    std::optional<AlignmentResult> alignment;
};

struct ErrorReportOptions {
    double clip_bound = kDefaultClipBound;
    Index hinf_grid = kDefaultHinfGrid;
    double hinf_refine_tol = kDefaultHinfRefineTol;
    /// Precomputed ||S||_Hinf and ||S||_H2 of the true system (0 = compute).
    double true_hinf = 0;
    double true_h2 = 0;
};

/// Fills every error metric for one estimate. H and H_hat are the (T1, T2 + 1)
/// Hankel matrices. System norms use the estimate with A_hat clipped at
/// `clip_bound`; alignment is against Ho-Kalman on the exact G (omitted if that fails
/// or the orders differ).
inline ErrorReport error_report(const StateSpace& true_sys, const MarkovParams& G, const MarkovParams& G_hat,
                                const BlockHankel& H, const BlockHankel& H_hat, const RealizationResult& realization,
                                const ErrorReportOptions& opts = {}) {
    require(G.horizon() == G_hat.horizon() && G.outputs() == G_hat.outputs() && G.inputs() == G_hat.inputs(),
            ErrorKind::InvalidArgument, "error_report: Markov parameter shapes differ");
    require(H.dense().rows() == H_hat.dense().rows() && H.dense().cols() == H_hat.dense().cols(),
            ErrorKind::InvalidArgument, "error_report: Hankel shapes differ");
    ErrorReport r;
    const Matrix dG = G.concatenated() - G_hat.concatenated();
    r.spec_err_G = spectral_norm(dG);
    r.frob_err_G = dG.norm();
    r.spec_err_H = spectral_norm(H.dense() - H_hat.dense());
    r.err_D = spectral_norm(G.block(0) - G_hat.block(0));
    if (G.horizon() >= 2) r.err_CB = spectral_norm(G.block(1) - G_hat.block(1));

    StateSpace est = realization.system();
    est.A = clip_singular_values(est.A, opts.clip_bound);
    const double true_hinf = opts.true_hinf > 0 ? opts.true_hinf
                                                : hinf_norm(true_sys, opts.hinf_grid, opts.hinf_refine_tol);
    const double true_h2 = opts.true_h2 > 0 ? opts.true_h2 : h2_norm(true_sys);
    const StateSpace diff = system_difference(true_sys, est);
    r.hinf_rel = hinf_norm(diff, opts.hinf_grid, opts.hinf_refine_tol) / true_hinf;
    r.h2_rel = h2_norm(diff) / true_h2;

    if (realization.order == true_sys.states()) {
        try {
            const RealizationResult ref = ho_kalman(G, realization.order, realization.shape);
            r.alignment = procrustes_align(ref, realization);
        } catch (const Error&) {
            r.alignment.reset();
        }
    }
    return r;
}

}  // namespace sysid

#endif  // SYSID_METRICS_HPP
