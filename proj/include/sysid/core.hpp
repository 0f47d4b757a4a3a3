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
#ifndef SYSID_CORE_HPP
#define SYSID_CORE_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace sysid {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class ErrorKind {
    InvalidArgument,
    InsufficientData,
    Numerical,
    RankDeficient,
    Overflow,
    Divergent,
    Io,
    Parse,
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument: return "invalid-argument";
        case ErrorKind::InsufficientData: return "insufficient-data";
        case ErrorKind::Numerical: return "numerical";
        case ErrorKind::RankDeficient: return "rank-deficient";
        case ErrorKind::Overflow: return "overflow";
        case ErrorKind::Divergent: return "divergent";
        case ErrorKind::Io: return "io";
        case ErrorKind::Parse: return "parse";
    }
    return "unknown";
}

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Thrown by simulate() when the state leaves the representable range.
class OverflowError : public Error {
public:
    OverflowError(Index step, const std::string& what) : Error(ErrorKind::Overflow, what), step_(step) {}

    /// 1-based time index of the first non-finite state.
    Index step() const noexcept { return step_; }

private:
    Index step_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
    if (!cond) throw Error(kind, what);
}

/// Spectral norm (largest singular value). Zero for empty matrices.
inline double spectral_norm(const Matrix& M) {
    if (M.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(M);
    return svd.singularValues()(0);
}

// ---------------------------------------------------------------------------
// Random streams
//
// Every random draw in the library comes from an Rng constructed from an
// explicit 64-bit seed. Substreams are derived by hashing (parent, index)
// with splitmix64, so stream k depends only on the parent seed and k.
// ---------------------------------------------------------------------------

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of substream `index` under `parent`.
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
    return splitmix64(splitmix64(parent) ^ splitmix64(index + 0xD1B54A32D192ED03ULL));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal() { return normal_(engine_); }
    double normal(double stddev) { return stddev * normal_(engine_); }

    double uniform(double lo, double hi) {
        if (!(hi > lo)) return lo;
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }

    Vector normal_vector(Index size, double stddev) {
        Vector v(size);
        for (Index i = 0; i < size; ++i) v(i) = normal(stddev);
        return v;
    }

    Matrix normal_matrix(Index rows, Index cols, double stddev) {
        // Row-major fill order so the draw sequence does not depend on storage.
        Matrix M(rows, cols);
        for (Index i = 0; i < rows; ++i)
            for (Index j = 0; j < cols; ++j) M(i, j) = normal(stddev);
        return M;
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Uniformly distributed orthogonal matrix (QR of a Gaussian matrix with sign fix).
inline Matrix random_orthogonal(Index n, Rng& rng) {
    Matrix G = rng.normal_matrix(n, n, 1.0);
    Eigen::HouseholderQR<Matrix> qr(G);
    Matrix Q = qr.householderQ() * Matrix::Identity(n, n);
    Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index j = 0; j < n; ++j)
        if (R(j, j) < 0) Q.col(j) *= -1.0;
    return Q;
}

}  // namespace sysid

#endif  // SYSID_CORE_HPP
