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
#include "sysid/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace sysid;

namespace {

StateSpace scalar(double a, double b, double c, double d) {
    return StateSpace(Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, b), Matrix::Constant(1, 1, c),
                      Matrix::Constant(1, 1, d));
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size() / 2;
    return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

}  // namespace

TEST_CASE("build_regression layout") {
    SUBCASE("p = 1, T = 2") {
        Matrix u(3, 1), y(3, 1);
        u << 1, 2, 3;
        y << 10, 20, 30;
        const RegressionData d = build_regression(u, y, 2);
        Matrix expected(2, 2);
        expected << 2, 1, 3, 2;
        CHECK(d.U == expected);
        CHECK(d.Y(0, 0) == 20);
        CHECK(d.Y(1, 0) == 30);
    }
    SUBCASE("N_bar = T gives a single row") {
        const Matrix u = Matrix::Random(4, 2), y = Matrix::Random(4, 3);
        const RegressionData d = build_regression(u, y, 4);
        CHECK(d.samples() == 1);
        CHECK(d.U.cols() == 8);
        CHECK(d.U.row(0).transpose() == input_window(u, 4, 4));
    }
    SUBCASE("rows agree with input_window") {
        const Matrix u = Matrix::Random(30, 3), y = Matrix::Random(30, 2);
        const RegressionData d = build_regression(u, y, 5);
        CHECK(d.samples() == 26);
        for (Index r = 0; r < d.samples(); ++r) CHECK(d.U.row(r).transpose() == input_window(u, 5 + r, 5));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(build_regression(Matrix::Zero(3, 1), Matrix::Zero(3, 1), 4), Error);
        try {
            build_regression(Matrix::Zero(3, 1), Matrix::Zero(3, 1), 4);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::InsufficientData);
        }
        CHECK_THROWS_AS(build_regression(Matrix::Zero(3, 1), Matrix::Zero(4, 1), 2), Error);
        CHECK_THROWS_AS(build_regression(Matrix::Zero(3, 1), Matrix::Zero(3, 1), 0), Error);
    }
}

TEST_CASE("least_squares_markov") {
    SUBCASE("Y = 0 gives G_hat = 0") {
        RegressionData d = build_regression(Matrix::Random(40, 2), Matrix::Zero(40, 3), 4);
        CHECK(least_squares_markov(d).G_hat.concatenated().isZero(0.0));
    }
    SUBCASE("nilpotent system is recovered exactly from noise-free data") {
        const StateSpace sys(Matrix::Zero(4, 4), Matrix::Random(4, 3), Matrix::Random(2, 4), Matrix::Random(2, 3));
        const Index T = 3;
        const Trajectory tr = simulate(sys, NoiseModel{1, 0, 0}, 10 * T * 3 + T - 1, 17);
        const auto r = least_squares_markov(build_regression(tr, T));
        const Matrix G = markov_params(sys, T).concatenated();
        CHECK((r.G_hat.concatenated() - G).norm() <= 1e-10);
        CHECK(r.conditioning.rank == T * 3);
    }
    SUBCASE("stable system within the truncation floor") {
        const StateSpace sys = random_system(2, 5, 3, 0.9, 5);
        const Index T = 18, N = 10 * T * 3;
        const Trajectory tr = simulate(sys, NoiseModel{1, 0, 0}, N + T - 1, 6);
        const auto r = least_squares_markov(build_regression(tr, T));
        const double err = oracle::norm2(r.G_hat.concatenated() - markov_params(sys, T).concatenated());
        const SystemStats st = system_stats(sys, NoiseModel{1, 0, 0}, T);
        // The residual is e_t only; its size relative to the inputs is ~ sigma_e.
        CHECK(err <= 1e-6 + 10.0 * st.sigma_e);
    }
    SUBCASE("residual is orthogonal to the regressors") {
        const StateSpace sys = random_system(2, 4, 2, 0.8, 8);
        const Trajectory tr = simulate(sys, NoiseModel{1, 0.3, 0.3}, 300, 9);
        const RegressionData d = build_regression(tr, 6);
        const auto r = least_squares_markov(d);
        const Matrix resid = d.Y - d.U * r.G_hat.concatenated().transpose();
        CHECK((d.U.transpose() * resid).norm() <= 1e-9 * d.U.norm() * d.Y.norm());
    }
    SUBCASE("underdetermined data returns the minimum-norm solution") {
        const Matrix u = Matrix::Random(6, 2), y = Matrix::Random(6, 1);
        const RegressionData d = build_regression(u, y, 4);  // N = 3 < Tp = 8
        const auto r = least_squares_markov(d);
        const Matrix X = r.G_hat.concatenated().transpose();
        const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(d.U);
        CHECK((X - cod.solve(d.Y)).norm() <= 1e-10);
        CHECK(r.conditioning.rank == 3);
    }
    SUBCASE("conditioning reports U's singular values") {
        const RegressionData d = build_regression(Matrix::Random(50, 2), Matrix::Random(50, 1), 3);
        const auto r = least_squares_markov(d);
        Eigen::JacobiSVD<Matrix> svd(d.U);
        CHECK(r.conditioning.sigma_max == doctest::Approx(svd.singularValues()(0)).epsilon(1e-10));
        CHECK(r.conditioning.sigma_min == doctest::Approx(svd.singularValues()(5)).epsilon(1e-10));
    }
}

TEST_CASE("error decreases with more data") {
    const StateSpace sys = scalar(0.5, 1, 1, 0.3);
    const NoiseModel noise{1, 0, 0.5};
    const Index T = 4;
    auto median_err = [&](Index N) {
        std::vector<double> errs;
        for (std::uint64_t s = 0; s < 20; ++s) {
            const Trajectory tr = simulate(sys, noise, N + T - 1, derive_seed(77, s));
            const auto r = least_squares_markov(build_regression(tr, T));
            errs.push_back(oracle::norm2(r.G_hat.concatenated() - markov_params(sys, T).concatenated()));
        }
        return median(errs);
    };
    const double ratio = median_err(4000) / median_err(1000);
    CHECK(ratio >= 0.3);
    CHECK(ratio <= 0.8);
}

TEST_CASE("predict_output") {
    SUBCASE("zero estimate predicts zero") {
        const MarkovParams G(2, 3, std::vector<Matrix>(4, Matrix::Zero(2, 3)));
        CHECK(predict_output(G, Vector::Random(12)).isZero(0.0));
    }
    SUBCASE("nilpotent system with exact G predicts exactly") {
        Matrix A = Matrix::Zero(3, 3);
        A(0, 1) = 1;
        A(1, 2) = 1;  // index 3
        const StateSpace sys(A, Matrix::Random(3, 2), Matrix::Random(2, 3), Matrix::Random(2, 2));
        const Index T = 5;
        const Trajectory tr = simulate(sys, NoiseModel{1, 0, 0}, 40, 3);
        const MarkovParams G = markov_params(sys, T);
        for (Index t = T; t <= 40; ++t) {
            const Vector y_hat = predict_output(G, input_window(tr.inputs, t, T));
            CHECK((y_hat - tr.outputs.row(t - 1).transpose()).norm() <= 1e-12);
        }
    }
    SUBCASE("layout matches the regression matrix") {
        const RegressionData d = build_regression(Matrix::Random(20, 2), Matrix::Random(20, 3), 4);
        const MarkovParams G = MarkovParams::from_concatenated(Matrix::Random(3, 8), 2);
        for (Index r = 0; r < d.samples(); ++r)
            CHECK((predict_output(G, d.U.row(r).transpose()) - G.concatenated() * d.U.row(r).transpose()).norm() <=
                  1e-12);
    }
    SUBCASE("dimension mismatch") {
        const MarkovParams G(1, 1, std::vector<Matrix>(3, Matrix::Zero(1, 1)));
        CHECK_THROWS_AS(predict_output(G, Vector::Zero(2)), Error);
    }
}

TEST_CASE("prediction_error_bound") {
    SUBCASE("all zero") {
        StateSpace sys = scalar(0.5, 1, 0, 0);
        CHECK(prediction_error_bound(sys, NoiseModel{0, 0, 0}, 3, 0.0) == 0.0);
    }
    SUBCASE("only the output-noise term survives") {
        const StateSpace sys(Matrix::Zero(2, 2), Matrix::Zero(2, 1), Matrix::Zero(2, 2), Matrix::Zero(2, 1));
        CHECK(prediction_error_bound(sys, NoiseModel{0, 0, 1}, 3, 0.0) == doctest::Approx(2.0));
    }
    SUBCASE("scalar example") {
        const double v = prediction_error_bound(scalar(0.5, 1, 1, 0), NoiseModel{1, 0, 1}, 3, 0.1);
        CHECK(v == doctest::Approx(0.01 + 1.0 + 0.0625 * 4.0 / 3.0).epsilon(1e-12));
    }
    SUBCASE("negative error rejected") {
        CHECK_THROWS_AS(prediction_error_bound(scalar(0.5, 1, 1, 0), NoiseModel{}, 3, -1.0), Error);
    }
}
