// Copyright 2026 The qstress Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"

using namespace qstress;
using Catch::Matchers::WithinAbs;

TEST_CASE("new_statevector prepares |0...0>", "[simulator]") {
    const auto s1 = new_statevector(1);
    REQUIRE(s1.amplitudes().size() == 2);
    CHECK(s1.amplitudes()[0] == std::complex<double>(1, 0));
    CHECK(s1.amplitudes()[1] == std::complex<double>(0, 0));

    const auto s3 = new_statevector(3);
    REQUIRE(s3.amplitudes().size() == 8);
    CHECK(s3.amplitudes()[0] == std::complex<double>(1, 0));
    for (std::size_t k = 1; k < 8; ++k) {
        CHECK(s3.amplitudes()[k] == std::complex<double>(0, 0));
    }
    CHECK_THROWS_AS(new_statevector(21), CapacityError);
    CHECK_THROWS_AS(new_statevector(0), CapacityError);
    CHECK_NOTHROW(new_statevector(20));
}

TEST_CASE("single gates on basis states", "[simulator]") {
    auto s = new_statevector(1);
    s = apply_gate(s, Gate::ry(0, std::numbers::pi));
    CHECK_THAT(std::abs(s.amplitudes()[0]), WithinAbs(0.0, 1e-15));
    CHECK_THAT(s.amplitudes()[1].real(), WithinAbs(1.0, 1e-15));

    auto h = new_statevector(1);
    h = apply_gate(h, Gate::h(0));
    CHECK_THAT(h.amplitudes()[0].real(), WithinAbs(1 / std::sqrt(2.0), 1e-15));
    CHECK_THAT(h.amplitudes()[1].real(), WithinAbs(1 / std::sqrt(2.0), 1e-15));

    auto z = new_statevector(1);
    z = apply_gate(z, Gate::rz(0, 0.8));
    CHECK_THAT(z.amplitudes()[0].real(), WithinAbs(std::cos(0.4), 1e-15));
    CHECK_THAT(z.amplitudes()[0].imag(), WithinAbs(-std::sin(0.4), 1e-15));
}

TEST_CASE("gate indices are validated", "[simulator]") {
    auto s = new_statevector(2);
    CHECK_THROWS_AS((void)apply_gate(s, Gate::h(2)), IndexError);
    CHECK_THROWS_AS((void)apply_gate(s, Gate::cnot(0, 0)), IndexError);
    CHECK_THROWS_AS((void)apply_gate(s, Gate::cnot(5, 1)), IndexError);
    Circuit c(2);
    CHECK_THROWS_AS(c.add(Gate::ry(3, 0.1)), IndexError);
    CHECK_THROWS_AS((void)expectation_z(s, 2), IndexError);
}

TEST_CASE("random 5-qubit 30-gate circuit matches the dense oracle", "[simulator][oracle]") {
    std::mt19937_64 rng(11);
    const auto c = oracle::random_circuit(5, 30, rng);
    const auto s = run_circuit(c, new_statevector(5));
    CHECK(oracle::max_abs_diff(s, oracle::run(c)) <= 1e-10);
}

TEST_CASE("run_circuit edge cases", "[simulator]") {
    std::mt19937_64 rng(3);
    const auto prep = oracle::random_circuit(3, 12, rng);
    const auto psi = run_circuit(prep, new_statevector(3));
    CHECK(run_circuit(Circuit(3), psi) == psi);

    Circuit hh(1);
    hh.add(Gate::h(0));
    hh.add(Gate::h(0));
    const auto back = run_circuit(hh, new_statevector(1));
    CHECK_THAT(back.amplitudes()[0].real(), WithinAbs(1.0, 1e-12));
    CHECK_THAT(std::abs(back.amplitudes()[1]), WithinAbs(0.0, 1e-12));

    CHECK_THROWS_AS((void)run_circuit(Circuit(2), new_statevector(3)), ShapeError);
}

TEST_CASE("4-qubit ZZ block with disjoint pairs matches the oracle", "[simulator][oracle]") {
    const std::vector<double> x{0.5, 1.0};
    FeatureMapSpec spec;
    spec.n_qubits = 4;
    spec.pattern = EntanglementPattern::DisjointPairs;
    const auto c = zz_feature_map(x, spec);
    const auto s = run_circuit(c, new_statevector(4));
    const auto ref = oracle::zz_reference(x, 4, {{0, 1}, {2, 3}}, 0.7);
    CHECK(oracle::max_abs_diff(s, oracle::run(ref)) <= 1e-10);
}

TEST_CASE("inner products", "[simulator]") {
    std::mt19937_64 rng(5);
    const auto a = run_circuit(oracle::random_circuit(4, 25, rng), new_statevector(4));
    const auto b = run_circuit(oracle::random_circuit(4, 25, rng), new_statevector(4));
    const auto aa = inner_product(a, a);
    CHECK_THAT(aa.real(), WithinAbs(1.0, 1e-12));
    CHECK_THAT(aa.imag(), WithinAbs(0.0, 1e-12));

    auto one = new_statevector(1);
    one = apply_gate(one, Gate::ry(0, std::numbers::pi));
    CHECK(std::abs(inner_product(new_statevector(1), one)) <= 1e-15);

    const std::complex<double> ref = oracle::to_dense(a).dot(oracle::to_dense(b));
    CHECK(std::abs(inner_product(a, b) - ref) <= 1e-10);
    CHECK_THROWS_AS((void)inner_product(a, new_statevector(3)), ShapeError);
}

TEST_CASE("Pauli-Z expectation", "[simulator]") {
    CHECK(expectation_z(new_statevector(1), 0) == 1.0);
    auto one = new_statevector(1);
    one = apply_gate(one, Gate::ry(0, std::numbers::pi));
    CHECK_THAT(expectation_z(one, 0), WithinAbs(-1.0, 1e-15));
    auto plus = new_statevector(1);
    plus = apply_gate(plus, Gate::h(0));
    CHECK_THAT(expectation_z(plus, 0), WithinAbs(0.0, 1e-12));

    std::mt19937_64 rng(8);
    const auto c = oracle::random_circuit(6, 40, rng);
    const auto s = run_circuit(c, new_statevector(6));
    const auto d = oracle::run(c);
    for (std::size_t q = 0; q < 6; ++q) {
        CHECK_THAT(expectation_z(s, q), WithinAbs(oracle::expect_z(d, q, 6), 1e-10));
    }
}

TEST_CASE("norm preservation and inverses", "[simulator][property]") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + trial % 6;
        const auto c = oracle::random_circuit(n, 50, rng);
        auto s = run_circuit(c, new_statevector(n));
        CHECK(std::abs(s.norm() - 1.0) <= 1e-10);
        const auto before = s;
        for (const auto &g : c.gates()) {
            auto t = s;
            t.apply(g);
            t.apply(g.inverse());
            double diff = 0;
            for (std::size_t k = 0; k < t.amplitudes().size(); ++k) {
                diff = std::max(diff, std::abs(t.amplitudes()[k] - s.amplitudes()[k]));
            }
            CHECK(diff <= 1e-12);
        }
        CHECK(s == before);
    }
}

TEST_CASE("CNOT fixes |+>|+>", "[simulator]") {
    auto s = new_statevector(2);
    s = apply_gate(s, Gate::h(0));
    s = apply_gate(s, Gate::h(1));
    const auto before = s;
    s = apply_gate(s, Gate::cnot(0, 1));
    for (std::size_t k = 0; k < 4; ++k) {
        CHECK(std::abs(s.amplitudes()[k] - before.amplitudes()[k]) <= 1e-15);
    }
}

TEST_CASE("randomized oracle equivalence up to 6 qubits", "[simulator][oracle][property]") {
    std::mt19937_64 rng(2026);
    std::uniform_int_distribution<std::size_t> nq(1, 6);
    std::uniform_int_distribution<std::size_t> ng(0, 50);
    for (int trial = 0; trial < 100; ++trial) {
        const auto c = oracle::random_circuit(nq(rng), ng(rng), rng);
        const auto s = run_circuit(c, new_statevector(c.n_qubits()));
        REQUIRE(oracle::max_abs_diff(s, oracle::run(c)) <= 1e-10);
    }
}

TEST_CASE("circuit JSON dump", "[simulator]") {
    Circuit c(2);
    c.add(Gate::h(0));
    c.add(Gate::cnot(0, 1));
    c.add(Gate::ry(1, 0.25));
    const auto j = circuit_to_json(c);
    REQUIRE(j.size() == 3);
    CHECK(j[0]["kind"] == "H");
    CHECK_FALSE(j[0].contains("control"));
    CHECK(j[1]["control"] == 0);
    CHECK(j[2]["angle"] == 0.25);
}

TEST_CASE("single-precision statevector agrees with double", "[simulator]") {
    std::mt19937_64 rng(4);
    const auto c = oracle::random_circuit(4, 30, rng);
    BasicStatevector<float> f(4);
    f.apply(c);
    const auto d = run_circuit(c, new_statevector(4));
    for (std::size_t k = 0; k < 16; ++k) {
        CHECK(std::abs(std::complex<double>(f.amplitudes()[k]) - d.amplitudes()[k]) <= 1e-5);
    }
}
