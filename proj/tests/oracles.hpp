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
// Independent reference implementations used by the tests.
#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qstress/qstress.hpp"

namespace oracle {

using cplx = std::complex<double>;
using DenseOp = Eigen::MatrixXcd;
using DenseState = Eigen::VectorXcd;

inline Eigen::Matrix2cd hadamard() {
    Eigen::Matrix2cd m;
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
}

inline Eigen::Matrix2cd ry(double t) {
    Eigen::Matrix2cd m;
    m << std::cos(t / 2), -std::sin(t / 2), std::sin(t / 2), std::cos(t / 2);
    return m;
}

inline Eigen::Matrix2cd rz(double t) {
    Eigen::Matrix2cd m;
    m << std::exp(cplx(0, -t / 2)), 0, 0, std::exp(cplx(0, t / 2));
    return m;
}

inline DenseOp kron(const DenseOp &a, const DenseOp &b) {
    DenseOp out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// I (x) ... (x) op_q (x) ... (x) I with qubit 0 as the rightmost factor.
inline DenseOp embed(const DenseOp &op, std::size_t q, std::size_t n) {
    DenseOp out = DenseOp::Identity(1, 1);
    for (std::size_t k = n; k-- > 0;) {
        out = kron(out, k == q ? op : DenseOp(DenseOp::Identity(2, 2)));
    }
    return out;
}

inline DenseOp gate_matrix(const qstress::Gate &g, std::size_t n) {
    using qstress::GateKind;
    switch (g.kind) {
    case GateKind::H:
        return embed(hadamard(), g.target, n);
    case GateKind::Ry:
        return embed(ry(g.angle), g.target, n);
    case GateKind::Rz:
        return embed(rz(g.angle), g.target, n);
    case GateKind::CNOT: {
        DenseOp p0 = DenseOp::Zero(2, 2);
        DenseOp p1 = DenseOp::Zero(2, 2);
        DenseOp x = DenseOp::Zero(2, 2);
        p0(0, 0) = 1;
        p1(1, 1) = 1;
        x(0, 1) = 1;
        x(1, 0) = 1;
        return embed(p0, *g.control, n) + embed(p1, *g.control, n) * embed(x, g.target, n);
    }
    }
    return {};
}

inline DenseOp circuit_matrix(const qstress::Circuit &c) {
    const auto dim = Eigen::Index{1} << c.n_qubits();
    DenseOp u = DenseOp::Identity(dim, dim);
    for (const auto &g : c.gates()) {
        u = gate_matrix(g, c.n_qubits()) * u;
    }
    return u;
}

inline DenseState zero_state(std::size_t n) {
    DenseState s = DenseState::Zero(Eigen::Index{1} << n);
    s(0) = 1;
    return s;
}

/// Applies each dense gate matrix in turn to |0...0>.
inline DenseState run(const qstress::Circuit &c) {
    DenseState s = zero_state(c.n_qubits());
    for (const auto &g : c.gates()) {
        s = gate_matrix(g, c.n_qubits()) * s;
    }
    return s;
}

inline DenseState to_dense(const qstress::Statevector &s) {
    DenseState d(static_cast<Eigen::Index>(s.amplitudes().size()));
    for (std::size_t k = 0; k < s.amplitudes().size(); ++k) {
        d(static_cast<Eigen::Index>(k)) = s.amplitudes()[k];
    }
    return d;
}

inline double max_abs_diff(const qstress::Statevector &s, const DenseState &d) {
    double m = 0.0;
    for (std::size_t k = 0; k < s.amplitudes().size(); ++k) {
        m = std::max(m, std::abs(s.amplitudes()[k] - d(static_cast<Eigen::Index>(k))));
    }
    return m;
}

/// <psi| Z_q |psi> via the dense Z operator.
inline double expect_z(const DenseState &psi, std::size_t q, std::size_t n) {
    DenseOp z = DenseOp::Zero(2, 2);
    z(0, 0) = 1;
    z(1, 1) = -1;
    return (psi.adjoint() * embed(z, q, n) * psi)(0, 0).real();
}

/// Gate-by-gate ZZ feature map described directly from its definition.
inline qstress::Circuit zz_reference(const std::vector<double> &x, std::size_t n,
                                     const std::vector<std::pair<std::size_t, std::size_t>> &pairs,
                                     double alpha, std::size_t reps = 1) {
    const std::size_t r = n / x.size();
    auto feat = [&](std::size_t q) { return x[q / r]; };
    qstress::Circuit c(n);
    for (std::size_t rep = 0; rep < reps; ++rep) {
        for (std::size_t q = 0; q < n; ++q) {
            c.add(qstress::Gate::h(q));
        }
        for (std::size_t q = 0; q < n; ++q) {
            c.add(qstress::Gate::rz(q, feat(q)));
        }
        for (auto [j, k] : pairs) {
            c.add(qstress::Gate::cnot(j, k));
            c.add(qstress::Gate::rz(k, alpha * feat(j) * feat(k)));
            c.add(qstress::Gate::cnot(j, k));
        }
    }
    return c;
}

inline qstress::Circuit random_circuit(std::size_t n, std::size_t n_gates, std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> kind(0, 3);
    std::uniform_int_distribution<std::size_t> qubit(0, n - 1);
    std::uniform_real_distribution<double> angle(-2 * std::numbers::pi, 2 * std::numbers::pi);
    qstress::Circuit c(n);
    while (c.size() < n_gates) {
        const int k = kind(rng);
        const std::size_t t = qubit(rng);
        if (k == 0) {
            c.add(qstress::Gate::h(t));
        } else if (k == 1) {
            c.add(qstress::Gate::ry(t, angle(rng)));
        } else if (k == 2) {
            c.add(qstress::Gate::rz(t, angle(rng)));
        } else if (n > 1) {
            std::size_t ctl = qubit(rng);
            while (ctl == t) {
                ctl = qubit(rng);
            }
            c.add(qstress::Gate::cnot(ctl, t));
        }
    }
    return c;
}

inline double smallest_eigenvalue(const qstress::Matrix &K) {
    Eigen::MatrixXd m(K.rows(), K.cols());
    for (std::size_t i = 0; i < K.rows(); ++i) {
        for (std::size_t j = 0; j < K.cols(); ++j) {
            m(i, j) = K(i, j);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

/// Result of the brute-force dual solve.
struct DualSolution {
    std::vector<double> alpha;
    double bias{0.0};
    double objective{0.0};
};

/**
 * Exhaustive active-set solve of the soft-margin SVM dual
 *   max sum(a) - 1/2 a^T Q a,  0 <= a_i <= C_i,  sum a_i y_i = 0.
 *
 * Every assignment of each a_i to {0, C_i, free} is tried; the free block is
 * solved from the stationarity system and the first assignment meeting all
 * KKT conditions is returned. Exponential in n; for tiny instances only.
 */
inline std::optional<DualSolution> solve_dual(const qstress::Matrix &K, const std::vector<int> &y,
                                              const std::vector<double> &C) {
    const std::size_t n = y.size();
    Eigen::MatrixXd Q(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Q(i, j) = y[i] * y[j] * K(i, j);
        }
    }
    constexpr double eps = 1e-9;
    std::size_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        total *= 3;
    }
    std::vector<int> state(n);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        std::vector<std::size_t> free;
        Eigen::VectorXd a = Eigen::VectorXd::Zero(n);
        for (std::size_t i = 0; i < n; ++i) {
            state[i] = static_cast<int>(c % 3);
            c /= 3;
            if (state[i] == 1) {
                a(i) = C[i];
            } else if (state[i] == 2) {
                free.push_back(i);
            }
        }
        double b = 0.0;
        if (!free.empty()) {
            const std::size_t f = free.size();
            Eigen::MatrixXd A = Eigen::MatrixXd::Zero(f + 1, f + 1);
            Eigen::VectorXd rhs(f + 1);
            double ysum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                ysum += y[i] * a(i);
            }
            for (std::size_t r = 0; r < f; ++r) {
                const std::size_t i = free[r];
                double fixed = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    fixed += Q(i, j) * a(j);
                }
                for (std::size_t s = 0; s < f; ++s) {
                    A(r, s) = Q(i, free[s]);
                }
                A(r, f) = y[i];
                A(f, r) = y[i];
                rhs(r) = 1.0 - fixed;
            }
            rhs(f) = -ysum;
            Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
            if (!lu.isInvertible()) {
                continue;
            }
            const Eigen::VectorXd sol = lu.solve(rhs);
            bool inside = true;
            for (std::size_t r = 0; r < f; ++r) {
                // strictly interior; values on a bound are covered by the bound states
                if (sol(r) <= eps || sol(r) >= C[free[r]] - eps) {
                    inside = false;
                }
                a(free[r]) = sol(r);
            }
            if (!inside) {
                continue;
            }
            b = sol(f);
        } else {
            double ysum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                ysum += y[i] * a(i);
            }
            if (std::abs(ysum) > eps) {
                continue;
            }
            // Bias interval from the bound constraints; take its midpoint.
            double lo = -std::numeric_limits<double>::infinity();
            double hi = std::numeric_limits<double>::infinity();
            const Eigen::VectorXd qa = Q * a;
            for (std::size_t i = 0; i < n; ++i) {
                // y_i f(x_i) = qa_i + y_i b; need >= 1 at 0 and <= 1 at C.
                const double lim = (1.0 - qa(i)) * y[i];
                const bool at_zero = state[i] == 0;
                if ((at_zero && y[i] > 0) || (!at_zero && y[i] < 0)) {
                    lo = std::max(lo, lim);
                } else {
                    hi = std::min(hi, lim);
                }
            }
            if (lo > hi + eps) {
                continue;
            }
            b = std::isfinite(lo) && std::isfinite(hi) ? 0.5 * (lo + hi) : (std::isfinite(lo) ? lo : hi);
        }
        const Eigen::VectorXd qa = Q * a;
        bool kkt = true;
        for (std::size_t i = 0; i < n && kkt; ++i) {
            const double m = qa(i) + y[i] * b;
            if (state[i] == 0 && m < 1.0 - 1e-7) {
                kkt = false;
            } else if (state[i] == 1 && m > 1.0 + 1e-7) {
                kkt = false;
            }
        }
        if (!kkt) {
            continue;
        }
        DualSolution s;
        s.alpha.assign(a.data(), a.data() + n);
        s.bias = b;
        s.objective = a.sum() - 0.5 * a.dot(Q * a);
        return s;
    }
    return std::nullopt;
}

/// sum_i a_i y_i K(x, x_i) + b for each row of the cross-kernel.
inline std::vector<double> dual_decisions(const DualSolution &s, const std::vector<int> &y,
                                          const qstress::Matrix &K_cross) {
    std::vector<double> out(K_cross.rows());
    for (std::size_t r = 0; r < K_cross.rows(); ++r) {
        double f = s.bias;
        for (std::size_t i = 0; i < y.size(); ++i) {
            f += s.alpha[i] * y[i] * K_cross(r, i);
        }
        out[r] = f;
    }
    return out;
}

} // namespace oracle

namespace oracle {

/**
 * One-repetition ZZ state in closed form. After the Hadamard layer every
 * gate is diagonal, so amplitude b is
 *   2^{-n/2} exp(-i/2 [sum_q v_q z_q + sum_(j,k) alpha v_j v_k z_j z_k])
 * with z_q = +1 for bit q clear and -1 for bit q set.
 */
inline DenseState zz_closed_form(const std::vector<double> &per_qubit,
                                 const std::vector<std::pair<std::size_t, std::size_t>> &pairs,
                                 double alpha) {
    const std::size_t n = per_qubit.size();
    const auto dim = Eigen::Index{1} << n;
    DenseState s(dim);
    const double amp = std::pow(2.0, -0.5 * static_cast<double>(n));
    for (Eigen::Index b = 0; b < dim; ++b) {
        auto z = [&](std::size_t q) { return ((b >> q) & 1) ? -1.0 : 1.0; };
        double phase = 0.0;
        for (std::size_t q = 0; q < n; ++q) {
            phase += per_qubit[q] * z(q);
        }
        for (auto [j, k] : pairs) {
            phase += alpha * per_qubit[j] * per_qubit[k] * z(j) * z(k);
        }
        s(b) = amp * std::exp(cplx(0, -0.5 * phase));
    }
    return s;
}

} // namespace oracle
