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
#ifndef SYSID_MARKOV_HPP
#define SYSID_MARKOV_HPP

#include "sysid/core.hpp"

#include <utility>
#include <vector>

namespace sysid {

/// Impulse-response blocks [D, CB, CAB, ..., CA^{T-2}B], each m x p.
///
/// Kept block-wise; the concatenated m x Tp view is produced on demand by
/// concatenated() and parsed back by from_concatenated().
class MarkovParams {
public:
    MarkovParams() = default;

    MarkovParams(Index m, Index p, std::vector<Matrix> blocks) : m_(m), p_(p), blocks_(std::move(blocks)) {
        require(m >= 1 && p >= 1, ErrorKind::InvalidArgument, "markov: m and p must be positive");
        require(!blocks_.empty(), ErrorKind::InvalidArgument, "markov: at least one block is required");
        for (const auto& b : blocks_)
            require(b.rows() == m && b.cols() == p, ErrorKind::InvalidArgument, "markov: every block must be m x p");
    }

    static MarkovParams from_concatenated(const Matrix& G, Index p) {
        require(p >= 1 && G.cols() % p == 0 && G.cols() > 0, ErrorKind::InvalidArgument,
                "markov: concatenated width must be a positive multiple of p");
        const Index horizon = G.cols() / p;
        std::vector<Matrix> blocks;
        blocks.reserve(static_cast<std::size_t>(horizon));
        for (Index k = 0; k < horizon; ++k) blocks.emplace_back(G.middleCols(k * p, p));
        return MarkovParams(G.rows(), p, std::move(blocks));
    }

    Index outputs() const { return m_; }
    Index inputs() const { return p_; }
    Index horizon() const { return static_cast<Index>(blocks_.size()); }

    /// 0-based: block(0) is D, block(k) for k >= 1 is C A^{k-1} B.
    const Matrix& block(Index k) const { return blocks_.at(static_cast<std::size_t>(k)); }
    const std::vector<Matrix>& blocks() const { return blocks_; }

    /// The m x Tp matrix G.
    Matrix concatenated() const {
        Matrix G(m_, p_ * horizon());
        for (Index k = 0; k < horizon(); ++k) G.middleCols(k * p_, p_) = blocks_[static_cast<std::size_t>(k)];
        return G;
    }

    /// First `count` blocks.
    MarkovParams prefix(Index count) const {
        require(count >= 1 && count <= horizon(), ErrorKind::InvalidArgument, "markov: prefix length out of range");
        return MarkovParams(m_, p_, std::vector<Matrix>(blocks_.begin(), blocks_.begin() + count));
    }

private:
    Index m_ = 0;
    Index p_ = 0;
    std::vector<Matrix> blocks_;
};

}  // namespace sysid

#endif  // SYSID_MARKOV_HPP
