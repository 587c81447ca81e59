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

namespace {

FeatureMapSpec zz_spec(std::size_t n, EntanglementPattern p = EntanglementPattern::Full,
                       double alpha = 0.7, std::size_t reps = 1) {
    FeatureMapSpec s;
    s.n_qubits = n;
    s.pattern = p;
    s.alpha = alpha;
    s.repetitions = reps;
    return s;
}

double p0(const Statevector &s, std::size_t q) {
    double p = 0;
    for (std::size_t k = 0; k < s.amplitudes().size(); ++k) {
        if (((k >> q) & 1) == 0) {
            p += std::norm(s.amplitudes()[k]);
        }
    }
    return p;
}

} // namespace

TEST_CASE("angle encoding", "[encodings]") {
    const std::vector<double> zero{0, 0, 0};
    const auto s0 = run_circuit(angle_encode(zero), new_statevector(3));
    CHECK(s0.amplitudes()[0] == std::complex<double>(1, 0));

    const std::vector<double> pi{std::numbers::pi};
    const auto s1 = run_circuit(angle_encode(pi), new_statevector(1));
    CHECK_THAT(s1.amplitudes()[1].real(), WithinAbs(1.0, 1e-15));

    const std::vector<double> x{0.3, 1.1, 2.0, 0.7};
    const auto c = angle_encode(x);
    CHECK(c.size() == 4);
    CHECK(c.count(GateKind::Ry) == 4);
    const auto s = run_circuit(c, new_statevector(4));
    const auto dense = oracle::run(c);
    for (std::size_t q = 0; q < 4; ++q) {
        CHECK_THAT(p0(s, q), WithinAbs(std::pow(std::cos(x[q] / 2), 2), 1e-10));
        CHECK_THAT(p0(s, q) + (1 - p0(s, q)), WithinAbs(1.0, 1e-12));
        CHECK_THAT(0.5 * (1 + oracle::expect_z(dense, q, 4)), WithinAbs(p0(s, q), 1e-10));
    }
    CHECK_THROWS_AS(angle_encode(std::vector<double>{}), ShapeError);
    CHECK_THROWS_AS(angle_encode(std::vector<double>{0.1, NAN}), ValidationError);
}

TEST_CASE("amplitude encoding", "[encodings]") {
    const auto a = amplitude_encode(std::vector<double>{1, 0, 0, 0});
    CHECK(a.amplitudes()[0] == std::complex<double>(1, 0));
    const auto b = amplitude_encode(std::vector<double>{1, 1, 1, 1});
    for (auto v : b.amplitudes()) {
        CHECK_THAT(v.real(), WithinAbs(0.5, 1e-15));
    }
    const auto c = amplitude_encode(std::vector<double>{3, 4, 0, 0});
    CHECK_THAT(c.amplitudes()[0].real(), WithinAbs(0.6, 1e-15));
    CHECK_THAT(c.amplitudes()[1].real(), WithinAbs(0.8, 1e-15));
    CHECK(c.n_qubits() == 2);
    CHECK_THROWS_AS(amplitude_encode(std::vector<double>{0, 0, 0, 0}), NormalizationError);
    CHECK_THROWS_AS(amplitude_encode(std::vector<double>{1, 2, 3}), ShapeError);
}

TEST_CASE("amplitude encoding is unit norm", "[encodings][property]") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    for (int t = 0; t < 100; ++t) {
        std::vector<double> x(std::size_t{1} << (1 + t % 6));
        for (auto &v : x) {
            v = g(rng);
        }
        const auto s = amplitude_encode(x);
        double norm = 0;
        for (double v : x) {
            norm += v * v;
        }
        norm = std::sqrt(norm);
        for (std::size_t k = 0; k < x.size(); ++k) {
            CHECK_THAT(s.amplitudes()[k].real(), WithinAbs(x[k] / norm, 1e-15));
        }
        CHECK(std::abs(s.norm() - 1.0) <= 1e-12);
    }
}

TEST_CASE("ZZ map of zero input is the uniform state", "[encodings]") {
    for (std::size_t n = 1; n <= 8; ++n) {
        const std::vector<double> x(n, 0.0);
        const auto s = encode_state(x, zz_spec(n));
        const double u = std::pow(2.0, -0.5 * static_cast<double>(n));
        for (auto v : s.amplitudes()) {
            CHECK_THAT(v.real(), WithinAbs(u, 1e-12));
            CHECK_THAT(v.imag(), WithinAbs(0.0, 1e-12));
        }
    }
    const std::vector<double> x4(4, 0.0);
    const auto s8 = encode_state(x4, zz_spec(8));
    for (auto v : s8.amplitudes()) {
        CHECK_THAT(v.real(), WithinAbs(1.0 / 16, 1e-12));
    }
}

TEST_CASE("ZZ map matches the closed-form state", "[encodings][oracle]") {
    const std::vector<double> x{0.5, 1.0};
    const auto spec = zz_spec(4, EntanglementPattern::DisjointPairs);
    const auto s = encode_state(x, spec);
    const auto ref = oracle::zz_closed_form({0.5, 0.5, 1.0, 1.0}, {{0, 1}, {2, 3}}, 0.7);
    CHECK(oracle::max_abs_diff(s, ref) <= 1e-10);

    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0, std::numbers::pi / 2);
    for (auto pat : {EntanglementPattern::Full, EntanglementPattern::Linear,
                     EntanglementPattern::DisjointPairs}) {
        std::vector<double> f(4);
        for (auto &v : f) {
            v = u(rng);
        }
        std::vector<double> per_qubit(8);
        for (std::size_t q = 0; q < 8; ++q) {
            per_qubit[q] = f[q / 2];
        }
        const auto st = encode_state(f, zz_spec(8, pat));
        CHECK(oracle::max_abs_diff(st, oracle::zz_closed_form(per_qubit, entangling_pairs(8, pat),
                                                              0.7)) <= 1e-10);
    }
}

TEST_CASE("ZZ map with repetitions matches the dense oracle", "[encodings][oracle]") {
    const std::vector<double> x{0.3, 0.9, 0.2};
    const auto spec = zz_spec(6, EntanglementPattern::Linear, 0.5, 2);
    const auto s = encode_state(x, spec);
    const auto ref =
        oracle::zz_reference(x, 6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}}, 0.5, 2);
    CHECK(oracle::max_abs_diff(s, oracle::run(ref)) <= 1e-10);
}

TEST_CASE("alpha enters only the two-qubit angles", "[encodings]") {
    const std::vector<double> x{0.5, 1.0};
    const auto spec_a = zz_spec(4, EntanglementPattern::DisjointPairs, 0.7);
    const auto spec_b = zz_spec(4, EntanglementPattern::DisjointPairs, 1.0);
    const auto a = encode_state(x, spec_a);
    const auto b = encode_state(x, spec_b);
    CHECK(oracle::max_abs_diff(a, oracle::to_dense(b)) > 1e-3);

    const std::vector<double> x0{0.0, 1.0};
    const auto ca = zz_feature_map(x0, spec_a);
    const auto cb = zz_feature_map(x0, spec_b);
    // qubits 0,1 carry feature 0 = 0, but qubits 2,3 carry 1.0: product 1 on pair (2,3)
    CHECK_FALSE(ca == cb);
    const std::vector<double> xz{0.0, 0.0};
    CHECK(oracle::max_abs_diff(encode_state(xz, spec_a), oracle::to_dense(encode_state(xz, spec_b))) <=
          1e-15);
    // single-qubit Rz angles are alpha independent
    for (std::size_t g = 0; g < ca.size(); ++g) {
        const auto &ga = ca.gates()[g];
        if (g >= 4 && g < 8) {
            CHECK(ga == cb.gates()[g]);
        }
    }
}

TEST_CASE("gate counts have closed forms", "[encodings][property]") {
    for (std::size_t n : {2u, 4u, 8u}) {
        for (auto pat : {EntanglementPattern::Full, EntanglementPattern::Linear,
                         EntanglementPattern::DisjointPairs}) {
            for (std::size_t reps : {1u, 2u, 3u}) {
                const std::vector<double> x(n / 2, 0.4);
                const auto c = zz_feature_map(x, zz_spec(n, pat, 0.7, reps));
                const std::size_t pairs = entangling_pairs(n, pat).size();
                CHECK(c.size() == reps * (n + n + 3 * pairs));
                CHECK(c.count(GateKind::CNOT) == reps * 2 * pairs);
            }
        }
    }
    CHECK(entangling_pairs(8, EntanglementPattern::Full).size() == 28);
    CHECK(entangling_pairs(8, EntanglementPattern::Linear).size() == 7);
    CHECK(entangling_pairs(8, EntanglementPattern::DisjointPairs).size() == 4);
}

TEST_CASE("ZZ circuits are equal iff inputs are equal", "[encodings][property]") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0, 1.5);
    const auto spec = zz_spec(8);
    for (int t = 0; t < 30; ++t) {
        std::vector<double> x(4);
        for (auto &v : x) {
            v = u(rng);
        }
        auto y = x;
        CHECK(zz_feature_map(x, spec) == zz_feature_map(y, spec));
        y[t % 4] += 1e-9;
        CHECK_FALSE(zz_feature_map(x, spec) == zz_feature_map(y, spec));
    }
}

TEST_CASE("all encodings produce unit-norm states", "[encodings][property]") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0, std::numbers::pi / 2);
    for (int t = 0; t < 20; ++t) {
        std::vector<double> x(4);
        for (auto &v : x) {
            v = u(rng);
        }
        FeatureMapSpec angle;
        angle.kind = EncodingKind::Angle;
        angle.n_qubits = 4;
        FeatureMapSpec amp;
        amp.kind = EncodingKind::Amplitude;
        amp.n_qubits = 2;
        CHECK(std::abs(encode_state(x, angle).norm() - 1) <= 1e-10);
        CHECK(std::abs(encode_state(x, amp).norm() - 1) <= 1e-10);
        CHECK(std::abs(encode_state(x, zz_spec(8)).norm() - 1) <= 1e-10);
        const auto per = run_circuit(angle_encode(x), new_statevector(4));
        for (std::size_t q = 0; q < 4; ++q) {
            CHECK_THAT(p0(per, q) + (1.0 - p0(per, q)), WithinAbs(1.0, 1e-12));
        }
    }
}

TEST_CASE("feature map spec validation", "[encodings]") {
    const std::vector<double> x3{0.1, 0.2, 0.3};
    CHECK_THROWS_AS(zz_feature_map(x3, zz_spec(8)), ShapeError);
    auto bad = zz_spec(8);
    bad.alpha = 0.0;
    CHECK_THROWS_AS(bad.validate(4), ValidationError);
    bad.alpha = 1.5;
    CHECK_THROWS_AS(bad.validate(4), ValidationError);
    FeatureMapSpec angle;
    angle.kind = EncodingKind::Angle;
    angle.n_qubits = 8;
    CHECK_THROWS_AS(angle.validate(4), ShapeError);

    const auto j = nlohmann::json(zz_spec(8, EntanglementPattern::DisjointPairs));
    CHECK(j["pattern"] == "disjoint_pairs");
    CHECK(j["kind"] == "zz");
    CHECK(j.get<FeatureMapSpec>() == zz_spec(8, EntanglementPattern::DisjointPairs));
    auto broken = j;
    broken["pattern"] = "ring";
    CHECK_THROWS_AS(broken.get<FeatureMapSpec>(), ValidationError);
}
