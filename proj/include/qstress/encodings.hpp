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
/**
 * @file
 * Data-encoding circuits: angle, amplitude and ZZ feature maps.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "simulator.hpp"

namespace qstress {

enum class EncodingKind { Angle, Amplitude, ZZ };
enum class EntanglementPattern { Full, Linear, DisjointPairs };

inline void to_json(nlohmann::json &j, EncodingKind k) {
    j = k == EncodingKind::Angle ? "angle" : k == EncodingKind::Amplitude ? "amplitude" : "zz";
}

inline void from_json(const nlohmann::json &j, EncodingKind &k) {
    const auto s = j.get<std::string>();
    if (s == "angle") {
        k = EncodingKind::Angle;
    } else if (s == "amplitude") {
        k = EncodingKind::Amplitude;
    } else if (s == "zz") {
        k = EncodingKind::ZZ;
    } else {
        throw ValidationError("unknown feature map kind '" + s + "' (angle|amplitude|zz)");
    }
}

inline void to_json(nlohmann::json &j, EntanglementPattern p) {
    j = p == EntanglementPattern::Full     ? "full"
        : p == EntanglementPattern::Linear ? "linear"
                                           : "disjoint_pairs";
}

inline void from_json(const nlohmann::json &j, EntanglementPattern &p) {
    const auto s = j.get<std::string>();
    if (s == "full") {
        p = EntanglementPattern::Full;
    } else if (s == "linear") {
        p = EntanglementPattern::Linear;
    } else if (s == "disjoint_pairs") {
        p = EntanglementPattern::DisjointPairs;
    } else {
        throw ValidationError("unknown entanglement pattern '" + s +
                              "' (full|linear|disjoint_pairs)");
    }
}

struct FeatureMapSpec {
    EncodingKind kind{EncodingKind::ZZ};
    std::size_t n_qubits{8};
    /// Scales the two-qubit Rz angles only.
    double alpha{0.7};
    std::size_t repetitions{1};
    EntanglementPattern pattern{EntanglementPattern::Full};

    /// Checks the spec against a feature vector length; throws ShapeError/ValidationError.
    void validate(std::size_t n_features) const {
        if (n_features == 0) {
            throw ShapeError("empty feature vector");
        }
        if (!(alpha > 0.0 && alpha <= 1.0)) {
            throw ValidationError("entanglement scale alpha must lie in (0, 1], got " +
                                  std::to_string(alpha));
        }
        if (repetitions == 0) {
            throw ValidationError("feature map repetitions must be positive");
        }
        switch (kind) {
        case EncodingKind::Angle:
            if (n_qubits != n_features) {
                throw ShapeError("angle encoding needs one qubit per feature (" +
                                 std::to_string(n_features) + " features, " +
                                 std::to_string(n_qubits) + " qubits)");
            }
            break;
        case EncodingKind::Amplitude:
            if (n_qubits >= 64 || (std::size_t{1} << n_qubits) != n_features) {
                throw ShapeError("amplitude encoding needs 2^n features (" +
                                 std::to_string(n_features) + " features, " +
                                 std::to_string(n_qubits) + " qubits)");
            }
            break;
        case EncodingKind::ZZ:
            if (n_qubits % n_features != 0) {
                throw ShapeError("ZZ map qubit count " + std::to_string(n_qubits) +
                                 " is not a multiple of feature count " +
                                 std::to_string(n_features));
            }
            break;
        }
    }

    friend bool operator==(const FeatureMapSpec &, const FeatureMapSpec &) = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(FeatureMapSpec, kind, n_qubits, alpha,
                                                repetitions, pattern)

namespace detail {
inline void require_finite(std::span<const double> x) {
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (!std::isfinite(x[j])) {
            throw ValidationError("feature " + std::to_string(j) + " is not finite");
        }
    }
}
} // namespace detail

/// One Ry(x_j) on qubit j.
inline Circuit angle_encode(std::span<const double> x) {
    if (x.empty()) {
        throw ShapeError("angle encoding of an empty feature vector");
    }
    detail::require_finite(x);
    Circuit c(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) {
        c.add(Gate::ry(j, x[j]));
    }
    return c;
}

/// |phi(x)> = sum_k x_k |k> / ||x||_2.
inline Statevector amplitude_encode(std::span<const double> x) {
    const std::size_t len = x.size();
    if (len < 2 || (len & (len - 1)) != 0) {
        throw ShapeError("amplitude encoding needs a power-of-two length >= 2, got " +
                         std::to_string(len));
    }
    detail::require_finite(x);
    double ss = 0.0;
    for (double v : x) {
        ss += v * v;
    }
    if (ss == 0.0) {
        throw NormalizationError("amplitude encoding of the zero vector");
    }
    const double inv = 1.0 / std::sqrt(ss);
    std::vector<Statevector::value_type> amps(len);
    for (std::size_t k = 0; k < len; ++k) {
        amps[k] = {x[k] * inv, 0.0};
    }
    return Statevector::from_amplitudes(std::move(amps));
}

/// Qubit pairs (control, target) entangled by one ZZ layer.
inline std::vector<std::pair<std::size_t, std::size_t>>
entangling_pairs(std::size_t n_qubits, EntanglementPattern pattern) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    switch (pattern) {
    case EntanglementPattern::Full:
        for (std::size_t j = 0; j < n_qubits; ++j) {
            for (std::size_t k = j + 1; k < n_qubits; ++k) {
                pairs.emplace_back(j, k);
            }
        }
        break;
    case EntanglementPattern::Linear:
        for (std::size_t j = 0; j + 1 < n_qubits; ++j) {
            pairs.emplace_back(j, j + 1);
        }
        break;
    case EntanglementPattern::DisjointPairs:
        for (std::size_t j = 0; j + 1 < n_qubits; j += 2) {
            pairs.emplace_back(j, j + 1);
        }
        break;
    }
    return pairs;
}

/**
 * ZZ feature map.
 *
 * Feature j is replicated onto qubits j*r .. j*r+r-1 with
 * r = n_qubits / x.size(). Each repetition applies H on every qubit, Rz of the
 * qubit's feature on every qubit, then CNOT(j,k) Rz(alpha*x_j*x_k on k) CNOT(j,k)
 * for every pair of the pattern.
 */
inline Circuit zz_feature_map(std::span<const double> x, const FeatureMapSpec &spec) {
    if (spec.kind != EncodingKind::ZZ) {
        throw ValidationError("zz_feature_map called with a non-ZZ spec");
    }
    spec.validate(x.size());
    detail::require_finite(x);
    const std::size_t n = spec.n_qubits;
    const std::size_t r = n / x.size();
    std::vector<double> per_qubit(n);
    for (std::size_t q = 0; q < n; ++q) {
        per_qubit[q] = x[q / r];
    }
    const auto pairs = entangling_pairs(n, spec.pattern);

    Circuit c(n);
    for (std::size_t rep = 0; rep < spec.repetitions; ++rep) {
        for (std::size_t q = 0; q < n; ++q) {
            c.add(Gate::h(q));
        }
        for (std::size_t q = 0; q < n; ++q) {
            c.add(Gate::rz(q, per_qubit[q]));
        }
        for (const auto &[j, k] : pairs) {
            c.add(Gate::cnot(j, k));
            c.add(Gate::rz(k, spec.alpha * per_qubit[j] * per_qubit[k]));
            c.add(Gate::cnot(j, k));
        }
    }
    return c;
}

/// |phi(x)> for any encoding kind.
inline Statevector encode_state(std::span<const double> x, const FeatureMapSpec &spec) {
    spec.validate(x.size());
    switch (spec.kind) {
    case EncodingKind::Angle:
        return run_circuit(angle_encode(x), new_statevector(spec.n_qubits));
    case EncodingKind::Amplitude:
        return amplitude_encode(x);
    case EncodingKind::ZZ:
        return run_circuit(zz_feature_map(x, spec), new_statevector(spec.n_qubits));
    }
    throw ValidationError("unknown encoding kind");
}

} // namespace qstress
