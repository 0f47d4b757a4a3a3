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
/// \file hankel.hpp
///
/// Block Hankel matrices built from Markov parameters and the Ho-Kalman
/// realization algorithm.
///
#ifndef SYSID_HANKEL_HPP
#define SYSID_HANKEL_HPP

#include "sysid/lti.hpp"
#include "sysid/markov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace sysid {

/// T1 x T2 grid of m x p blocks stored as one dense (T1 m) x (T2 p) matrix.
class BlockHankel {
public:
    BlockHankel() = default;
    BlockHankel(Index m, Index p, Index block_rows, Index block_cols, Matrix dense)
        : m_(m), p_(p), rows_(block_rows), cols_(block_cols), dense_(std::move(dense)) {
        require(dense_.rows() == m * block_rows && dense_.cols() == p * block_cols, ErrorKind::InvalidArgument,
                "hankel: dense matrix does not match block dimensions");
    }

    Index outputs() const { return m_; }
    Index inputs() const { return p_; }
    Index block_rows() const { return rows_; }
    Index block_cols() const { return cols_; }
    const Matrix& dense() const { return dense_; }

    /// 0-based block (i, j).
    Matrix block(Index i, Index j) const { return dense_.block(i * m_, j * p_, m_, p_); }

    /// Drops trailing block columns, keeping `count`.
    BlockHankel left_columns(Index count) const {
        return BlockHankel(m_, p_, rows_, count, dense_.leftCols(count * p_));
    }
    BlockHankel right_columns(Index count) const {
        return BlockHankel(m_, p_, rows_, count, dense_.rightCols(count * p_));
    }

private:
    Index m_ = 0, p_ = 0, rows_ = 0, cols_ = 0;
    Matrix dense_;
};

/// Clipped (T1, T2) Hankel matrix: 1-based block (i, j) is X_{i+j}, so X_1 = D never appears.
inline BlockHankel build_hankel(const MarkovParams& G, Index T1, Index T2) {
    require(T1 >= 1 && T2 >= 1, ErrorKind::InvalidArgument, "build_hankel: T1 and T2 must be >= 1");
    require(T1 + T2 <= G.horizon(), ErrorKind::InvalidArgument,
            "build_hankel: T1 + T2 = " + std::to_string(T1 + T2) + " exceeds horizon " + std::to_string(G.horizon()));
    const Index m = G.outputs(), p = G.inputs();
    Matrix H(T1 * m, T2 * p);
    for (Index i = 0; i < T1; ++i)
        for (Index j = 0; j < T2; ++j) H.block(i * m, j * p, m, p) = G.block(i + j + 1);
    return BlockHankel(m, p, T1, T2, std::move(H));
}

/// K x K zero-padded Hankel matrix whose 0-based block (i, j) is G_{i+j} (G_0 = D)
/// while i + j < T, and zero beyond.
inline BlockHankel build_padded_hankel(const MarkovParams& G, Index K) {
    require(K >= G.horizon(), ErrorKind::InvalidArgument, "build_padded_hankel: K must be >= T");
    const Index m = G.outputs(), p = G.inputs();
    Matrix H = Matrix::Zero(K * m, K * p);
    for (Index i = 0; i < K; ++i)
        for (Index j = 0; j < K && i + j < G.horizon(); ++j) H.block(i * m, j * p, m, p) = G.block(i + j);
    return BlockHankel(m, p, K, K, std::move(H));
}

/// H^- drops the last block column, H^+ drops the first.
inline std::pair<BlockHankel, BlockHankel> split_hankel(const BlockHankel& H) {
    require(H.block_cols() >= 2, ErrorKind::InvalidArgument, "split_hankel: need at least two block columns");
    return {H.left_columns(H.block_cols() - 1), H.right_columns(H.block_cols() - 1)};
}

/// Thin SVD with the sign of every singular pair fixed so that the first
/// coordinate of each left vector exceeding 1e-12 in magnitude is positive.
struct SignedSvd {
    Matrix U;
    Vector sigma;
    Matrix V;
};

inline SignedSvd signed_svd(const Matrix& M) {
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SignedSvd out{svd.matrixU(), svd.singularValues(), svd.matrixV()};
    for (Index k = 0; k < out.U.cols(); ++k) {
        for (Index i = 0; i < out.U.rows(); ++i) {
            const double v = out.U(i, k);
            if (std::abs(v) > 1e-12) {
                if (v < 0) {
                    out.U.col(k) *= -1.0;
                    out.V.col(k) *= -1.0;
                }
                break;
            }
        }
    }
    return out;
}

/// Best rank-n approximation (spectral and Frobenius) by SVD truncation.
inline Matrix rank_n_approx(const Matrix& M, Index n) {
    require(n >= 1 && n <= std::min(M.rows(), M.cols()), ErrorKind::InvalidArgument,
            "rank_n_approx: n must lie in [1, min(rows, cols)]");
    Eigen::JacobiSVD<Matrix> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU().leftCols(n) * svd.singularValues().head(n).asDiagonal() *
           svd.matrixV().leftCols(n).transpose();
}

/// Shape (T1, T2) for a (T1, T2 + 1) Hankel matrix drawn from T Markov blocks.
struct HankelShape {
    Index T1 = 0;
    Index T2 = 0;
};

enum class HankelShapePolicy {
    Default,   // T1 = T2 + 1 = T/2 for even T, T1 = T2 = (T-1)/2 for odd T
    Balanced,  // m T1 ~ p T2 with T1 + T2 + 1 = T
};

inline HankelShape hankel_shape(Index horizon, Index m, Index p, HankelShapePolicy policy = HankelShapePolicy::Default) {
    require(horizon >= 3, ErrorKind::InvalidArgument, "hankel_shape: horizon must be >= 3");
    const Index budget = horizon - 1;  // T1 + T2
    if (policy == HankelShapePolicy::Balanced) {
        Index T1 = static_cast<Index>(std::llround(static_cast<double>(p * budget) / static_cast<double>(m + p)));
        T1 = std::clamp<Index>(T1, 1, budget - 1);
        return {T1, budget - T1};
    }
    if (horizon % 2 == 0) return {horizon / 2, horizon / 2 - 1};
    return {budget / 2, budget / 2};
}

/// Output of Ho-Kalman: a balanced realization plus the factors that produced it.
struct RealizationResult {
    Matrix A_hat, B_hat, C_hat, D_hat;
    Matrix O_hat;  // (T1 m) x n
    Matrix Q_hat;  // n x (T2 p)
    Vector sigma;  // top n singular values of H^-, descending
    double sigma_min_L = 0;
    Index order = 0;
    HankelShape shape;

    StateSpace system() const { return StateSpace(A_hat, B_hat, C_hat, D_hat); }
    /// O_hat * Q_hat.
    Matrix low_rank() const { return O_hat * Q_hat; }
};

/**
 * Ho-Kalman minimum realization.
 *
 * Builds the (T1, T2+1) Hankel matrix from G_hat, truncates its first T2 block
 * columns to rank n, factors L = U S V^T into O = U S^{1/2} and Q = S^{1/2} V^T,
 * reads C and B off the first block row/column and sets
 * A = O^+ H^+ Q^+ with O^+ = S^{-1/2} U^T and Q^+ = V S^{-1/2}.
 *
 * Requires T1 + T2 + 1 <= T (only the first T1 + T2 + 1 blocks are used) and
 * n <= min(m T1, p T2). Throws RankDeficient if the n-th singular value is
 * numerically zero. No stability projection is applied here.
 */
inline RealizationResult ho_kalman(const MarkovParams& G_hat, Index n, Index T1, Index T2) {
    const Index m = G_hat.outputs(), p = G_hat.inputs();
    require(T1 >= 1 && T2 >= 1, ErrorKind::InvalidArgument, "ho_kalman: T1 and T2 must be >= 1");
    require(T1 + T2 + 1 <= G_hat.horizon(), ErrorKind::InvalidArgument,
            "ho_kalman: T1 + T2 + 1 must not exceed the horizon");
    require(n >= 1 && n <= std::min(m * T1, p * T2), ErrorKind::InvalidArgument,
            "ho_kalman: order must lie in [1, min(m T1, p T2)]");

    const BlockHankel H = build_hankel(G_hat, T1, T2 + 1);
    const auto [H_minus, H_plus] = split_hankel(H);
    const SignedSvd svd = signed_svd(H_minus.dense());

    const Vector& s = svd.sigma;
    const double tol = std::numeric_limits<double>::epsilon() * static_cast<double>(std::max(m * T1, p * T2)) *
                       (s.size() ? s(0) : 0.0);
    if (!(s(n - 1) > tol)) {
        Index achieved = 0;
        for (Index i = 0; i < s.size(); ++i)
            if (s(i) > tol) ++achieved;
        throw Error(ErrorKind::RankDeficient, "ho_kalman: Hankel matrix has numerical rank " + std::to_string(achieved) +
                                                  " < requested order " + std::to_string(n));
    }

    RealizationResult r;
    r.order = n;
    r.shape = {T1, T2};
    r.sigma = s.head(n);
    r.sigma_min_L = s(n - 1);
    const Vector root = r.sigma.cwiseSqrt();
    const Vector inv_root = root.cwiseInverse();
    const Matrix Un = svd.U.leftCols(n);
    const Matrix Vn = svd.V.leftCols(n);
    r.O_hat = Un * root.asDiagonal();
    r.Q_hat = root.asDiagonal() * Vn.transpose();
    r.C_hat = r.O_hat.topRows(m);
    r.B_hat = r.Q_hat.leftCols(p);
    r.A_hat = inv_root.asDiagonal() * Un.transpose() * H_plus.dense() * Vn * inv_root.asDiagonal();
    r.D_hat = G_hat.block(0);
    return r;
}

inline RealizationResult ho_kalman(const MarkovParams& G_hat, Index n, HankelShape shape) {
    return ho_kalman(G_hat, n, shape.T1, shape.T2);
}

/// Keeps singular vectors and replaces each singular value s by min(s, bound).
inline Matrix clip_singular_values(const Matrix& A, double bound) {
    require(bound > 0, ErrorKind::InvalidArgument, "clip_singular_values: bound must be positive");
    Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& s = svd.singularValues();
    if (s.size() == 0 || s(0) <= bound) return A;
    return svd.matrixU() * s.cwiseMin(bound).asDiagonal() * svd.matrixV().transpose();
}

/// Suggested order: number of singular values of H^- above `tolerance`.
/// Advisory only; ho_kalman always uses the caller's order.
inline Index suggest_order(const MarkovParams& G_hat, HankelShape shape, double tolerance) {
    require(tolerance >= 0, ErrorKind::InvalidArgument, "suggest_order: tolerance must be nonnegative");
    const BlockHankel H = build_hankel(G_hat, shape.T1, shape.T2);
    Eigen::JacobiSVD<Matrix> svd(H.dense());
    Index count = 0;
    for (Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > tolerance) ++count;
    return count;
}

}  // namespace sysid

#endif  // SYSID_HANKEL_HPP
