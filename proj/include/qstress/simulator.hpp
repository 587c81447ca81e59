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
 * Dense statevector simulator for the gate set {H, Ry, Rz, CNOT}.
 *
 * Qubit q addresses bit q of the basis-state index, so qubit 0 is the least
 * significant bit. Gate matrices:
 *
 *     H     = 1/sqrt(2) [[1, 1], [1, -1]]
 *     Ry(t) = [[cos t/2, -sin t/2], [sin t/2, cos t/2]]
 *     Rz(t) = diag(exp(-i t/2), exp(i t/2))
 *
 * Global phase is kept, so amplitudes can be compared directly.
 */
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "error.hpp"

namespace qstress {

inline constexpr std::size_t kMaxQubits = 20;

enum class GateKind { H, Ry, Rz, CNOT };

inline const char *gate_name(GateKind k) {
    switch (k) {
    case GateKind::H:
        return "H";
    case GateKind::Ry:
        return "Ry";
    case GateKind::Rz:
        return "Rz";
    case GateKind::CNOT:
        return "CNOT";
    }
    return "?";
}

struct Gate {
    GateKind kind{GateKind::H};
    std::size_t target{0};
    std::optional<std::size_t> control{};
    double angle{0.0};

    static Gate h(std::size_t q) { return {GateKind::H, q, std::nullopt, 0.0}; }
    static Gate ry(std::size_t q, double theta) { return {GateKind::Ry, q, std::nullopt, theta}; }
    static Gate rz(std::size_t q, double theta) { return {GateKind::Rz, q, std::nullopt, theta}; }
    static Gate cnot(std::size_t c, std::size_t t) { return {GateKind::CNOT, t, c, 0.0}; }

    /// Gate that undoes this one.
    [[nodiscard]] Gate inverse() const {
        Gate g = *this;
        if (kind == GateKind::Ry || kind == GateKind::Rz) {
            g.angle = -angle;
        }
        return g;
    }

    /// Throws IndexError unless every index is valid for an n-qubit register.
    void validate(std::size_t n_qubits) const {
        if (target >= n_qubits) {
            throw IndexError("gate target " + std::to_string(target) + " out of range for " +
                             std::to_string(n_qubits) + " qubits");
        }
        if (kind == GateKind::CNOT) {
            if (!control) {
                throw IndexError("CNOT without control qubit");
            }
            if (*control >= n_qubits) {
                throw IndexError("gate control " + std::to_string(*control) +
                                 " out of range for " + std::to_string(n_qubits) + " qubits");
            }
            if (*control == target) {
                throw IndexError("CNOT control equals target (" + std::to_string(target) + ")");
            }
        } else if (control) {
            throw IndexError(std::string(gate_name(kind)) + " does not take a control qubit");
        }
    }

    friend bool operator==(const Gate &, const Gate &) = default;
};

/// Ordered gate list over a fixed register size. Indices are checked on insertion.
class Circuit {
  public:
    explicit Circuit(std::size_t n_qubits) : n_qubits_(n_qubits) {
        if (n_qubits == 0 || n_qubits > kMaxQubits) {
            throw CapacityError("circuit size " + std::to_string(n_qubits) +
                                " outside 1.." + std::to_string(kMaxQubits));
        }
    }

    Circuit &add(const Gate &g) {
        g.validate(n_qubits_);
        gates_.push_back(g);
        return *this;
    }

    Circuit &append(const Circuit &other) {
        if (other.n_qubits_ != n_qubits_) {
            throw ShapeError("cannot append a " + std::to_string(other.n_qubits_) +
                             "-qubit circuit to a " + std::to_string(n_qubits_) + "-qubit one");
        }
        gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
        return *this;
    }

    [[nodiscard]] std::size_t n_qubits() const { return n_qubits_; }
    [[nodiscard]] const std::vector<Gate> &gates() const { return gates_; }
    [[nodiscard]] std::size_t size() const { return gates_.size(); }
    [[nodiscard]] bool empty() const { return gates_.empty(); }

    [[nodiscard]] std::size_t count(GateKind kind) const {
        std::size_t c = 0;
        for (const auto &g : gates_) {
            c += g.kind == kind ? 1 : 0;
        }
        return c;
    }

    friend bool operator==(const Circuit &, const Circuit &) = default;

  private:
    std::size_t n_qubits_;
    std::vector<Gate> gates_;
};

/**
 * Pure n-qubit state as 2^n complex amplitudes.
 *
 * @tparam Real floating-point type of each amplitude component.
 */
template <typename Real = double> class BasicStatevector {
  public:
    using value_type = std::complex<Real>;

    /// |0...0> on n qubits.
    explicit BasicStatevector(std::size_t n_qubits) : n_qubits_(n_qubits) {
        check_capacity(n_qubits);
        amps_.assign(std::size_t{1} << n_qubits, value_type{0, 0});
        amps_[0] = value_type{1, 0};
    }

    /// Wraps raw amplitudes; length must be a power of two. No normalisation.
    static BasicStatevector from_amplitudes(std::vector<value_type> amps) {
        const std::size_t len = amps.size();
        if (len < 2 || (len & (len - 1)) != 0) {
            throw ShapeError("amplitude count " + std::to_string(len) +
                             " is not a power of two >= 2");
        }
        std::size_t n = 0;
        while ((std::size_t{1} << n) < len) {
            ++n;
        }
        BasicStatevector s(n);
        s.amps_ = std::move(amps);
        return s;
    }

    [[nodiscard]] std::size_t n_qubits() const { return n_qubits_; }
    [[nodiscard]] std::size_t size() const { return amps_.size(); }
    [[nodiscard]] std::span<const value_type> amplitudes() const { return amps_; }
    [[nodiscard]] const value_type &operator[](std::size_t i) const { return amps_[i]; }

    [[nodiscard]] Real norm() const {
        Real s = 0;
        for (const auto &a : amps_) {
            s += std::norm(a);
        }
        return std::sqrt(s);
    }

    /// Applies g in place.
    void apply(const Gate &g) {
        g.validate(n_qubits_);
        switch (g.kind) {
        case GateKind::H: {
            const Real r = Real{1} / std::sqrt(Real{2});
            apply_real_2x2(g.target, r, r, r, -r);
            break;
        }
        case GateKind::Ry: {
            const Real c = std::cos(static_cast<Real>(g.angle) / 2);
            const Real s = std::sin(static_cast<Real>(g.angle) / 2);
            apply_real_2x2(g.target, c, -s, s, c);
            break;
        }
        case GateKind::Rz: {
            const Real half = static_cast<Real>(g.angle) / 2;
            apply_diagonal(g.target, std::polar(Real{1}, -half), std::polar(Real{1}, half));
            break;
        }
        case GateKind::CNOT:
            apply_cnot(*g.control, g.target);
            break;
        }
    }

    void apply(const Circuit &c) {
        if (c.n_qubits() != n_qubits_) {
            throw ShapeError("circuit has " + std::to_string(c.n_qubits()) +
                             " qubits, state has " + std::to_string(n_qubits_));
        }
        for (const auto &g : c.gates()) {
            apply(g);
        }
    }

    friend bool operator==(const BasicStatevector &, const BasicStatevector &) = default;

  private:
    static void check_capacity(std::size_t n) {
        if (n == 0 || n > kMaxQubits) {
            throw CapacityError("qubit count " + std::to_string(n) + " outside 1.." +
                                std::to_string(kMaxQubits));
        }
    }

    // Pairs (i, i + stride) with bit q clear in i; O(2^n) per gate.
    void apply_real_2x2(std::size_t q, Real m00, Real m01, Real m10, Real m11) {
        const std::size_t stride = std::size_t{1} << q;
        const std::size_t dim = amps_.size();
        for (std::size_t base = 0; base < dim; base += 2 * stride) {
            for (std::size_t i = base; i < base + stride; ++i) {
                const value_type a0 = amps_[i];
                const value_type a1 = amps_[i + stride];
                amps_[i] = m00 * a0 + m01 * a1;
                amps_[i + stride] = m10 * a0 + m11 * a1;
            }
        }
    }

    void apply_diagonal(std::size_t q, value_type d0, value_type d1) {
        const std::size_t stride = std::size_t{1} << q;
        const std::size_t dim = amps_.size();
        for (std::size_t base = 0; base < dim; base += 2 * stride) {
            for (std::size_t i = base; i < base + stride; ++i) {
                amps_[i] *= d0;
                amps_[i + stride] *= d1;
            }
        }
    }

    void apply_cnot(std::size_t control, std::size_t target) {
        const std::size_t cbit = std::size_t{1} << control;
        const std::size_t tbit = std::size_t{1} << target;
        const std::size_t dim = amps_.size();
        for (std::size_t i = 0; i < dim; ++i) {
            if ((i & cbit) != 0 && (i & tbit) == 0) {
                std::swap(amps_[i], amps_[i | tbit]);
            }
        }
    }

    std::size_t n_qubits_;
    std::vector<value_type> amps_;
};

using Statevector = BasicStatevector<double>;

/// |0...0> on n qubits; CapacityError unless 1 <= n <= 20.
inline Statevector new_statevector(std::size_t n_qubits) { return Statevector(n_qubits); }

template <typename Real>
[[nodiscard]] BasicStatevector<Real> apply_gate(BasicStatevector<Real> state, const Gate &g) {
    state.apply(g);
    return state;
}

template <typename Real>
[[nodiscard]] BasicStatevector<Real> run_circuit(const Circuit &circuit,
                                                 BasicStatevector<Real> state) {
    state.apply(circuit);
    return state;
}

/// <a|b> = sum_k conj(a_k) b_k.
template <typename Real>
[[nodiscard]] std::complex<Real> inner_product(const BasicStatevector<Real> &a,
                                               const BasicStatevector<Real> &b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw ShapeError("inner product of " + std::to_string(a.n_qubits()) + "- and " +
                         std::to_string(b.n_qubits()) + "-qubit states");
    }
    std::complex<Real> acc{0, 0};
    const auto ea = a.amplitudes();
    const auto eb = b.amplitudes();
    for (std::size_t k = 0; k < ea.size(); ++k) {
        acc += std::conj(ea[k]) * eb[k];
    }
    return acc;
}

/// <psi|Z_q|psi>.
template <typename Real>
[[nodiscard]] Real expectation_z(const BasicStatevector<Real> &state, std::size_t qubit) {
    if (qubit >= state.n_qubits()) {
        throw IndexError("Z expectation on qubit " + std::to_string(qubit) + " of a " +
                         std::to_string(state.n_qubits()) + "-qubit state");
    }
    const std::size_t bit = std::size_t{1} << qubit;
    Real acc = 0;
    const auto amps = state.amplitudes();
    for (std::size_t k = 0; k < amps.size(); ++k) {
        const Real p = std::norm(amps[k]);
        acc += (k & bit) == 0 ? p : -p;
    }
    return acc;
}

/// Debug dump: [{kind, target, control?, angle?}, ...].
inline nlohmann::json circuit_to_json(const Circuit &c) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto &g : c.gates()) {
        nlohmann::json j;
        j["kind"] = gate_name(g.kind);
        j["target"] = g.target;
        if (g.control) {
            j["control"] = *g.control;
        }
        if (g.kind == GateKind::Ry || g.kind == GateKind::Rz) {
            j["angle"] = g.angle;
        }
        out.push_back(std::move(j));
    }
    return out;
}

} // namespace qstress
