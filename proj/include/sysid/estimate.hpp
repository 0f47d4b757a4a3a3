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
#ifndef SYSID_ESTIMATE_HPP
#define SYSID_ESTIMATE_HPP

#include "sysid/lti.hpp"
#include "sysid/markov.hpp"

#include <algorithm>
#include <limits>

namespace sysid {

/// Regression problem Y ~ U G^T built from one trajectory.
///
/// Row k (0-based) of Y is y_{T+k}; row k of U is the reversed input window
/// [u_{T+k}^T, u_{T+k-1}^T, ..., u_{k+1}^T].
struct RegressionData {
    Matrix Y;  // N x m
    Matrix U;  // N x Tp
    Index horizon = 0;
    Index inputs = 0;

    Index samples() const { return Y.rows(); }
};

/// Reversed-time window [u_t, u_{t-1}, ..., u_{t-T+1}] for 1-based time t >= T.
inline Vector input_window(const Matrix& inputs, Index t, Index horizon) {
    const Index p = inputs.cols();
    Vector w(horizon * p);
    for (Index k = 0; k < horizon; ++k) w.segment(k * p, p) = inputs.row(t - 1 - k).transpose();
    return w;
}

inline RegressionData build_regression(const Matrix& inputs, const Matrix& outputs, Index horizon) {
    require(horizon >= 1, ErrorKind::InvalidArgument, "build_regression: horizon must be >= 1");
    require(inputs.rows() == outputs.rows(), ErrorKind::InvalidArgument,
            "build_regression: inputs and outputs must have equal length");
    require(inputs.rows() >= horizon, ErrorKind::InsufficientData,
            "build_regression: trajectory shorter than the horizon");
    const Index n_bar = inputs.rows(), p = inputs.cols();
    const Index N = n_bar - horizon + 1;
    RegressionData d;
    d.horizon = horizon;
    d.inputs = p;
    d.Y = outputs.bottomRows(N);
    d.U.resize(N, horizon * p);
    for (Index row = 0; row < N; ++row) {
        const Index t = horizon + row;  // 1-based
        for (Index k = 0; k < horizon; ++k) d.U.block(row, k * p, 1, p) = inputs.row(t - 1 - k);
    }
    return d;
}

inline RegressionData build_regression(const Trajectory& traj, Index horizon) {
    return build_regression(traj.inputs, traj.outputs, horizon);
}

/// Singular-value summary of U returned alongside the estimate.
struct Conditioning {
    double sigma_min = 0;  // smallest of the min(N, Tp) singular values
    double sigma_max = 0;
    Index rank = 0;        // numerical rank under the pseudo-inverse threshold
};

struct LeastSquaresResult {
    MarkovParams G_hat;
    Conditioning conditioning;
};

/// G_hat = (pinv(U) Y)^T, minimum-norm when U is rank deficient.
///
/// pinv(U) is formed from the SVD of the triangular factor of a thin QR of U
/// (same singular values and right vectors as U). Singular values below
/// eps * sigma_max * max(N, Tp) are treated as zero.
inline LeastSquaresResult least_squares_markov(const RegressionData& data) {
    const Index N = data.U.rows(), cols = data.U.cols();
    require(N >= 1 && cols >= 1 && data.Y.rows() == N, ErrorKind::InvalidArgument,
            "least_squares_markov: malformed regression data");
    require(data.inputs >= 1 && cols == data.horizon * data.inputs, ErrorKind::InvalidArgument,
            "least_squares_markov: U width must equal T * p");
    const Index k = std::min(N, cols);

    Eigen::HouseholderQR<Matrix> qr(data.U);
    Matrix R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    Matrix QtY = (qr.householderQ().transpose() * data.Y).topRows(k);

    Eigen::JacobiSVD<Matrix> svd(R, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& s = svd.singularValues();
    const double smax = s.size() ? s(0) : 0.0;
    const double tol = std::numeric_limits<double>::epsilon() * smax * static_cast<double>(std::max(N, cols));

    LeastSquaresResult out;
    out.conditioning.sigma_max = smax;
    out.conditioning.sigma_min = s.size() ? s(s.size() - 1) : 0.0;
    Vector inv = Vector::Zero(s.size());
    for (Index i = 0; i < s.size(); ++i) {
        if (s(i) > tol && s(i) > 0.0) {
            inv(i) = 1.0 / s(i);
            ++out.conditioning.rank;
        }
    }
    // X^T = V S^+ U_R^T Q^T Y, with X the Tp x m solution of U X = Y.
    Matrix Xt = svd.matrixV() * inv.asDiagonal() * (svd.matrixU().transpose() * QtY);
    out.G_hat = MarkovParams::from_concatenated(Xt.transpose(), data.inputs);
    return out;
}

/// y_hat = G_hat * u_window, window in the same reversed layout as rows of U.
inline Vector predict_output(const MarkovParams& G_hat, const Vector& u_window) {
    require(u_window.size() == G_hat.horizon() * G_hat.inputs(), ErrorKind::InvalidArgument,
            "predict_output: window length must equal T * p");
    Vector y = Vector::Zero(G_hat.outputs());
    const Index p = G_hat.inputs();
    for (Index k = 0; k < G_hat.horizon(); ++k) y += G_hat.block(k) * u_window.segment(k * p, p);
    return y;
}

/// Expected squared prediction error bound for y_hat = G_hat u_bar:
/// sigma_w^2 ||F||_F^2 + sigma_u^2 ||G - G_hat||_F^2 + m sigma_z^2 + ||C A^{T-1}||^2 tr(Gamma_inf).
inline double prediction_error_bound(const StateSpace& sys, const NoiseModel& noise, Index horizon,
                                     double G_err_frob) {
    require(G_err_frob >= 0, ErrorKind::InvalidArgument, "prediction_error_bound: error must be nonnegative");
    const SystemStats st = system_stats(sys, noise, horizon);
    const double m = static_cast<double>(sys.outputs());
    return noise.sigma_w * noise.sigma_w * st.frob_F * st.frob_F +
           noise.sigma_u * noise.sigma_u * G_err_frob * G_err_frob + m * noise.sigma_z * noise.sigma_z +
           st.norm_CA_tail * st.norm_CA_tail * st.gamma_inf_trace;
}

}  // namespace sysid

#endif  // SYSID_ESTIMATE_HPP
