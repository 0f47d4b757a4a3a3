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
#ifndef SYSID_LYAPUNOV_HPP
#define SYSID_LYAPUNOV_HPP

#include "sysid/core.hpp"

namespace sysid {

/// Orders up to this size are solved through the Kronecker-vectorized system;
/// larger ones use the doubling iteration.
inline constexpr Index kKroneckerLyapunovMaxOrder = 50;

/// Solves X = A X A^T + Q for stable A (spectral radius < 1). Caller checks stability.
inline Matrix solve_discrete_lyapunov(const Matrix& A, const Matrix& Q) {
    const Index n = A.rows();
    require(A.cols() == n && Q.rows() == n && Q.cols() == n, ErrorKind::InvalidArgument,
            "lyapunov: A and Q must be square and conforming");
    Matrix X;
    if (n <= kKroneckerLyapunovMaxOrder) {
        // vec(A X A^T) = (A kron A) vec(X) for column-major vec.
        const Index nn = n * n;
        Matrix K = Matrix::Identity(nn, nn);
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                if (A(i, j) != 0.0) K.block(i * n, j * n, n, n) -= A(i, j) * A;
        Vector q = Eigen::Map<const Vector>(Q.data(), nn);
        Eigen::PartialPivLU<Matrix> lu(K);
        Vector x = lu.solve(q);
        require(x.allFinite(), ErrorKind::Numerical, "lyapunov: singular Kronecker system");
        X = Eigen::Map<Matrix>(x.data(), n, n);
    } else {
        // Smith doubling: X_{k+1} = X_k + A_k X_k A_k^T, A_{k+1} = A_k^2.
        Matrix Ak = A;
        X = Q;
        for (int iter = 0; iter < 100; ++iter) {
            Matrix step = Ak * X * Ak.transpose();
            X += step;
            Ak = Ak * Ak;
            if (step.norm() <= 1e-16 * X.norm()) break;
        }
        require(X.allFinite(), ErrorKind::Numerical, "lyapunov: doubling iteration diverged");
    }
    return 0.5 * (X + X.transpose());
}

}  // namespace sysid

#endif  // SYSID_LYAPUNOV_HPP
