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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "sysid/metrics.hpp"

#include <cmath>
#include <complex>
#include <numbers>

using namespace sysid;

namespace {

StateSpace scalar(double a, double b, double c, double d) {
    return StateSpace(Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, b), Matrix::Constant(1, 1, c),
                      Matrix::Constant(1, 1, d));
}

// Direct evaluation of C (zI - A)^{-1} B + D via a dense inverse.
Eigen::MatrixXcd transfer_oracle(const StateSpace& s, double w) {
    using C = std::complex<double>;
    const C z = std::polar(1.0, w);
    Eigen::MatrixXcd M = z * Eigen::MatrixXcd::Identity(s.states(), s.states()) - s.A.cast<C>();
    return s.C.cast<C>() * M.inverse() * s.B.cast<C>() + s.D.cast<C>();
}

}  // namespace

TEST_CASE("procrustes_align") {
    Rng rng(3);
    const Matrix O = rng.normal_matrix(10, 4, 1.0), Q = rng.normal_matrix(4, 9, 1.0);
    SUBCASE("identical factors") {
        const AlignmentResult r = procrustes_align(O, O, Q, Q);
        CHECK((r.T_unitary - Matrix::Identity(4, 4)).norm() <= 1e-12);
        CHECK(r.err_O <= 1e-12);
        CHECK(r.err_Q <= 1e-12);
        CHECK(r.unique);
    }
    SUBCASE("rotated pair is recovered") {
        const Matrix R = random_orthogonal(4, rng);
        const AlignmentResult r = procrustes_align(O, O * R, Q, R.transpose() * Q);
        CHECK((r.T_unitary - R.transpose()).norm() <= 1e-10);
        CHECK(r.err_O <= 1e-10);
        CHECK(r.err_Q <= 1e-10);
    }
    SUBCASE("beats random orthogonal search") {
        const Matrix Oh = O * random_orthogonal(4, rng) + 0.3 * rng.normal_matrix(10, 4, 1.0);
        const Matrix Qh = random_orthogonal(4, rng) * Q + 0.3 * rng.normal_matrix(4, 9, 1.0);
        const AlignmentResult r = procrustes_align(O, Oh, Q, Qh);
        CHECK((r.T_unitary.transpose() * r.T_unitary - Matrix::Identity(4, 4)).norm() <= 1e-12);
        const double best = alignment_objective(O, Oh, Q, Qh, r.T_unitary);
        for (int k = 0; k < 10000; ++k) {
            const double v = alignment_objective(O, Oh, Q, Qh, random_orthogonal(4, rng));
            if (v < best - 1e-9) {
                FAIL("random orthogonal sample beats the Procrustes solution");
                break;
            }
        }
    }
    SUBCASE("rank-deficient cross matrix is flagged") {
        const AlignmentResult r = procrustes_align(O, Matrix::Zero(10, 4), Q, Matrix::Zero(4, 9));
        CHECK_FALSE(r.unique);
        CHECK((r.T_unitary.transpose() * r.T_unitary - Matrix::Identity(4, 4)).norm() <= 1e-12);
    }
    SUBCASE("shape mismatch") { CHECK_THROWS_AS(procrustes_align(O, O, Q, Matrix::Zero(3, 9)), Error); }
}

TEST_CASE("random_orthogonal") {
    Rng rng(9);
    for (int k = 0; k < 10; ++k) {
        const Matrix R = random_orthogonal(5, rng);
        CHECK((R.transpose() * R - Matrix::Identity(5, 5)).norm() <= 1e-12);
    }
}

TEST_CASE("transfer_function") {
    const StateSpace sys = oracle::random_dense_system(2, 4, 3, 0.8, 1);
    for (double w : {0.0, 0.3, 1.0, std::numbers::pi / 2, std::numbers::pi})
        CHECK((transfer_function(sys, w) - transfer_oracle(sys, w)).norm() <= 1e-10);
}

TEST_CASE("hinf_norm") {
    SUBCASE("constant transfer function") {
        const StateSpace sys(Matrix::Zero(2, 2), Matrix::Zero(2, 3), Matrix::Random(2, 2), Matrix::Random(2, 3));
        CHECK(hinf_norm(sys) == doctest::Approx(oracle::norm2(sys.D)).epsilon(1e-12));
    }
    SUBCASE("scalar peak at zero frequency") {
        CHECK(hinf_norm(scalar(0.5, 1, 1, 0)) == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("scalar peak at pi") { CHECK(hinf_norm(scalar(-0.5, 1, 1, 0)) == doctest::Approx(2.0).epsilon(1e-12)); }
    SUBCASE("grid refinement is self-consistent") {
        for (std::uint64_t s = 0; s < 5; ++s) {
            const StateSpace sys = oracle::random_dense_system(2, 5, 3, 0.9, s + 10);
            const double a = hinf_norm(sys, 4096), b = hinf_norm(sys, 16384);
            CHECK(std::abs(a - b) <= 1e-4 * b);
        }
    }
    SUBCASE("dominates every sampled frequency") {
        const StateSpace sys = oracle::random_dense_system(1, 4, 2, 0.95, 4);
        const double h = hinf_norm(sys);
        for (int k = 0; k <= 1000; ++k) CHECK(transfer_gain(sys, std::numbers::pi * k / 1000.0) <= h * (1 + 1e-12));
    }
    SUBCASE("unstable rejected") { CHECK_THROWS_AS(hinf_norm(scalar(1.0, 1, 1, 0)), Error); }
}

TEST_CASE("h2_norm") {
    CHECK(h2_norm(StateSpace(Matrix::Constant(1, 1, 0.3), Matrix::Ones(1, 1), Matrix::Zero(1, 1), Matrix::Zero(1, 1))) ==
          0.0);
    CHECK(h2_norm(scalar(0, 1, 1, 0)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(h2_norm(scalar(0.5, 1, 1, 0)) == doctest::Approx(std::sqrt(4.0 / 3.0)).epsilon(1e-14));
    SUBCASE("equals the l2 norm of the impulse response") {
        const StateSpace sys = oracle::random_dense_system(2, 4, 3, 0.8, 2);
        double sum = sys.D.squaredNorm();
        for (Index k = 0; k < 400; ++k) sum += oracle::markov_block(sys, k).squaredNorm();
        CHECK(h2_norm(sys) == doctest::Approx(std::sqrt(sum)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(h2_norm(scalar(1.2, 1, 1, 0)), Error);
}

TEST_CASE("system_difference") {
    const StateSpace s1 = oracle::random_dense_system(2, 4, 3, 0.8, 5);
    const StateSpace s2 = oracle::random_dense_system(2, 3, 3, 0.7, 6);
    SUBCASE("self difference vanishes") {
        const StateSpace d = system_difference(s1, s1);
        for (double w : {0.0, std::numbers::pi / 2, std::numbers::pi}) CHECK(transfer_function(d, w).norm() <= 1e-10);
    }
    SUBCASE("zero system leaves the transfer unchanged") {
        const StateSpace zero(Matrix::Zero(1, 1), Matrix::Zero(1, 3), Matrix::Zero(2, 1), Matrix::Zero(2, 3));
        const StateSpace d = system_difference(s1, zero);
        for (double w : {0.0, std::numbers::pi / 2, std::numbers::pi})
            CHECK((transfer_function(d, w) - transfer_oracle(s1, w)).norm() <= 1e-10);
    }
    SUBCASE("pointwise difference of transfers") {
        const StateSpace d = system_difference(s1, s2);
        CHECK(d.states() == 7);
        for (double w : {0.0, 1.0, std::numbers::pi / 2, std::numbers::pi})
            CHECK((transfer_function(d, w) - (transfer_oracle(s1, w) - transfer_oracle(s2, w))).norm() <= 1e-10);
    }
    SUBCASE("dimension mismatch") {
        const StateSpace s3 = oracle::random_dense_system(1, 3, 3, 0.7, 6);
        CHECK_THROWS_AS(system_difference(s1, s3), Error);
    }
}

TEST_CASE("error_report on the exact pipeline") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const StateSpace sys = random_system(2, 5, 3, 0.9, s);
        const Index T = 18;
        const HankelShape shape = hankel_shape(T, 2, 3);
        const MarkovParams G = markov_params(sys, T);
        const BlockHankel H = build_hankel(G, shape.T1, shape.T2 + 1);
        const RealizationResult r = ho_kalman(G, 5, shape);
        ErrorReportOptions no_clip;
        no_clip.clip_bound = INFINITY;
        const ErrorReport e = error_report(sys, G, G, H, H, r, no_clip);
        CHECK(e.spec_err_G == 0.0);
        CHECK(e.spec_err_H == 0.0);
        CHECK(e.err_D == 0.0);
        CHECK(e.err_CB == 0.0);
        CHECK(e.hinf_rel <= 1e-6);
        CHECK(e.h2_rel <= 1e-6);
        REQUIRE(e.alignment.has_value());
        CHECK(e.alignment->err_C <= 1e-8);
        CHECK(e.alignment->err_B <= 1e-8);
        CHECK(e.alignment->err_A <= 1e-8);

        // With the default clip the estimate only changes when the balanced A_hat is too large.
        const ErrorReport clipped = error_report(sys, G, G, H, H, r);
        if (oracle::norm2(r.A_hat) <= kDefaultClipBound) CHECK(clipped.hinf_rel == doctest::Approx(e.hinf_rel));
        else CHECK(clipped.hinf_rel > e.hinf_rel);
    }
}

TEST_CASE("error_report on a perturbed estimate") {
    const StateSpace sys = random_system(2, 5, 3, 0.9, 21);
    const Index T = 12;
    const HankelShape shape = hankel_shape(T, 2, 3);
    const MarkovParams G = markov_params(sys, T);
    Rng rng(4);
    const MarkovParams Gh = MarkovParams::from_concatenated(G.concatenated() + 0.01 * rng.normal_matrix(2, 36, 1.0), 3);
    const BlockHankel H = build_hankel(G, shape.T1, shape.T2 + 1), Hh = build_hankel(Gh, shape.T1, shape.T2 + 1);
    const ErrorReport e = error_report(sys, G, Gh, H, Hh, ho_kalman(Gh, 5, shape));
    CHECK(e.spec_err_G == doctest::Approx(oracle::norm2(G.concatenated() - Gh.concatenated())));
    CHECK(e.frob_err_G == doctest::Approx((G.concatenated() - Gh.concatenated()).norm()));
    CHECK(e.err_D == doctest::Approx(oracle::norm2(G.block(0) - Gh.block(0))));
    CHECK(e.err_CB == doctest::Approx(oracle::norm2(G.block(1) - Gh.block(1))));
    CHECK(e.spec_err_H <= std::sqrt(double(std::min(shape.T1, shape.T2 + 1))) * e.spec_err_G * (1 + 1e-12));
    CHECK(e.hinf_rel > 0);
    CHECK(e.hinf_rel < 1);
    CHECK(e.alignment.has_value());
}
