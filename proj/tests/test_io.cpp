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

#include "sysid/hankel.hpp"
#include "sysid/io.hpp"

#include <cmath>
#include <filesystem>
#include <limits>

using namespace sysid;

TEST_CASE("format_double round-trips bit-exactly") {
    Rng rng(1);
    for (int k = 0; k < 2000; ++k) {
        const double v = rng.normal() * std::pow(10.0, rng.uniform(-300, 300));
        CHECK(io::parse_double(io::format_double(v)) == v);
    }
    CHECK(io::parse_double(io::format_double(0.1)) == 0.1);
    CHECK(io::parse_double(io::format_double(-0.0)) == 0.0);
    CHECK(std::isinf(io::parse_double(io::format_double(std::numeric_limits<double>::infinity()))));
}

TEST_CASE("parsing helpers") {
    CHECK(io::trim("  a b \t") == "a b");
    CHECK(io::split("1, 2,3", ',') == std::vector<std::string>{"1", "2", "3"});
    CHECK(io::parse_int("42") == 42);
    CHECK_THROWS_AS(io::parse_double("abc"), Error);
    CHECK_THROWS_AS(io::parse_double("1.5x"), Error);
    CHECK_THROWS_AS(io::parse_int("1.5"), Error);
    CHECK(io::parse_doubles("1, 2.5, -3") == std::vector<double>{1, 2.5, -3});
}

TEST_CASE("KeyValueDoc") {
    const auto doc = io::KeyValueDoc::parse("# comment\n\n a = 1 \nb=hello world\n");
    CHECK(doc.get("a") == "1");
    CHECK(doc.get("b") == "hello world");
    CHECK(doc.keys() == std::vector<std::string>{"a", "b"});
    CHECK_THROWS_AS(doc.get("missing"), Error);
    CHECK_THROWS_AS(io::KeyValueDoc::parse("no equals sign\n"), Error);
    CHECK_THROWS_AS(io::KeyValueDoc::parse(" = 3\n"), Error);

    io::KeyValueDoc d;
    const Matrix M = Matrix::Random(3, 2);
    d.set_matrix("M", M);
    CHECK(io::KeyValueDoc::parse(d.str()).get_matrix("M", 3, 2) == M);
    CHECK_THROWS_AS(io::KeyValueDoc::parse(d.str()).get_matrix("M", 2, 2), Error);
}

TEST_CASE("StateSpace document round-trip") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const StateSpace sys = random_system(1 + s % 3, 2 + s % 4, 1 + s % 2, 0.9, s);
        const StateSpace back = io::statespace_from_text(io::to_text(sys));
        CHECK(back.A == sys.A);
        CHECK(back.B == sys.B);
        CHECK(back.C == sys.C);
        CHECK(back.D == sys.D);
        CHECK(io::to_text(back) == io::to_text(sys));
    }
    CHECK_THROWS_AS(io::statespace_from_text("type = markov\n"), Error);
    CHECK_THROWS_AS(io::statespace_from_text("type = statespace\nn = 1\nm = 1\np = 1\nA = 1\nB = 1\nC = 1\n"), Error);
}

TEST_CASE("Markov document round-trip") {
    const MarkovParams G = markov_params(random_system(2, 4, 3, 0.8, 3), 7);
    const MarkovParams back = io::markov_from_text(io::to_text(G));
    CHECK(back.concatenated() == G.concatenated());
    CHECK(back.horizon() == 7);
}

TEST_CASE("realization document round-trip") {
    const RealizationResult r = ho_kalman(markov_params(random_system(2, 3, 2, 0.8, 5), 10), 3, hankel_shape(10, 2, 2));
    const RealizationResult back = io::realization_from_text(io::to_text(r));
    CHECK(back.A_hat == r.A_hat);
    CHECK(back.B_hat == r.B_hat);
    CHECK(back.C_hat == r.C_hat);
    CHECK(back.D_hat == r.D_hat);
    CHECK(back.O_hat == r.O_hat);
    CHECK(back.Q_hat == r.Q_hat);
    CHECK(back.sigma == r.sigma);
    CHECK(back.sigma_min_L == r.sigma_min_L);
    CHECK(back.shape.T1 == r.shape.T1);
    CHECK(back.shape.T2 == r.shape.T2);
}

TEST_CASE("trajectory CSV round-trip") {
    const Trajectory tr = simulate(random_system(2, 3, 3, 0.9, 1), NoiseModel{1, 0.2, 0.1}, 50, 4);
    const std::string csv = io::trajectory_to_csv(tr);
    CHECK(csv.rfind("t,u_1,u_2,u_3,y_1,y_2\n", 0) == 0);
    const Trajectory back = io::trajectory_from_csv(csv);
    CHECK(back.inputs == tr.inputs);
    CHECK(back.outputs == tr.outputs);
    CHECK_THROWS_AS(io::trajectory_from_csv(""), Error);
    CHECK_THROWS_AS(io::trajectory_from_csv("t,u_1,y_1\n1,2\n"), Error);
    CHECK_THROWS_AS(io::trajectory_from_csv("t,x_1\n"), Error);
}

TEST_CASE("file helpers") {
    const auto path = (std::filesystem::temp_directory_path() / "sysid_test_io.txt").string();
    io::write_file(path, "hello\n");
    CHECK(io::read_file(path) == "hello\n");
    std::filesystem::remove(path);
    CHECK_THROWS_AS(io::read_file(path), Error);
}
