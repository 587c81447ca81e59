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
 * Kernel functions (linear, RBF, quantum state overlap) and Gram-matrix
 * assembly.
 *
 * The quantum kernel is the exact fidelity |<phi(x)|phi(y)>|^2 of two encoded
 * states. Gram matrices prepare each sample's state once and evaluate the
 * upper triangle in parallel; the result does not depend on thread count.
 */
#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "encodings.hpp"
#include "error.hpp"
#include "matrix.hpp"
#include "parallel.hpp"
#include "simulator.hpp"

namespace qstress {

enum class KernelKind { Linear, Rbf, Quantum };

inline const char *kernel_name(KernelKind k) {
    switch (k) {
    case KernelKind::Linear:
        return "linear";
    case KernelKind::Rbf:
        return "rbf";
    case KernelKind::Quantum:
        return "quantum";
    }
    return "?";
}

struct RbfKernelSpec {
    double gamma{2.0};
};

struct KernelSpec {
    KernelKind kind{KernelKind::Rbf};
    RbfKernelSpec rbf{};
    FeatureMapSpec feature_map{};

    static KernelSpec linear() { return {KernelKind::Linear, {}, {}}; }
    static KernelSpec gaussian(double gamma) { return {KernelKind::Rbf, {gamma}, {}}; }
    static KernelSpec quantum(FeatureMapSpec fm) { return {KernelKind::Quantum, {}, fm}; }
};

/// Symmetric Gram matrix with sample identifiers.
struct KernelMatrix {
    std::vector<std::string> row_ids;
    Matrix entries;

    [[nodiscard]] std::size_t size() const { return entries.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return entries(i, j); }
};

namespace detail {
inline void require_same_dim(std::span<const double> x, std::span<const double> y,
                             const char *what) {
    if (x.size() != y.size()) {
        throw ShapeError(std::string(what) + ": dimension mismatch (" +
                         std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
    }
}
} // namespace detail

inline double linear_kernel(std::span<const double> x, std::span<const double> y) {
    detail::require_same_dim(x, y, "linear kernel");
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += x[i] * y[i];
    }
    return acc;
}

/// exp(-gamma ||x - y||^2)
inline double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma) {
    detail::require_same_dim(x, y, "rbf kernel");
    if (!(gamma > 0.0)) {
        throw ValidationError("rbf gamma must be positive");
    }
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        d2 += d * d;
    }
    return std::exp(-gamma * d2);
}

/// Fidelity of two already-prepared states.
inline double state_fidelity(const Statevector &a, const Statevector &b) {
    return std::norm(inner_product(a, b));
}

/// |<phi(x)|phi(y)>|^2 with both states prepared by the given feature map.
inline double quantum_kernel(std::span<const double> x, std::span<const double> y,
                             const FeatureMapSpec &spec) {
    detail::require_same_dim(x, y, "quantum kernel");
    return state_fidelity(encode_state(x, spec), encode_state(y, spec));
}

inline double evaluate_kernel(std::span<const double> x, std::span<const double> y,
                              const KernelSpec &spec) {
    switch (spec.kind) {
    case KernelKind::Linear:
        return linear_kernel(x, y);
    case KernelKind::Rbf:
        return rbf_kernel(x, y, spec.rbf.gamma);
    case KernelKind::Quantum:
        return quantum_kernel(x, y, spec.feature_map);
    }
    throw ValidationError("unknown kernel kind");
}

/// Encodes every row of X in parallel.
inline std::vector<Statevector> encode_all(const FeatureMatrix &X, const FeatureMapSpec &spec) {
    std::vector<Statevector> states(X.size(), Statevector(1));
    parallel_for(X.size(), [&](std::size_t i) { states[i] = encode_state(X[i], spec); });
    return states;
}

/**
 * K[i][j] = kernel(X[i], X[j]) for all rows.
 *
 * Only the upper triangle is evaluated and mirrored. Row ids default to the
 * row index.
 */
inline KernelMatrix kernel_matrix(const FeatureMatrix &X, const KernelSpec &spec,
                                  std::vector<std::string> row_ids = {}) {
    check_rectangular(X, "kernel_matrix");
    const std::size_t n = X.size();
    if (row_ids.empty()) {
        row_ids.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            row_ids.push_back(std::to_string(i));
        }
    } else if (row_ids.size() != n) {
        throw ShapeError("kernel_matrix: " + std::to_string(row_ids.size()) + " ids for " +
                         std::to_string(n) + " rows");
    }
    if (spec.kind == KernelKind::Rbf && !(spec.rbf.gamma > 0.0)) {
        throw ValidationError("rbf gamma must be positive");
    }

    KernelMatrix K{std::move(row_ids), Matrix(n, n)};
    if (spec.kind == KernelKind::Quantum) {
        const auto states = encode_all(X, spec.feature_map);
        parallel_for(n, [&](std::size_t i) {
            for (std::size_t j = i; j < n; ++j) {
                K.entries(i, j) = state_fidelity(states[i], states[j]);
            }
        });
    } else {
        parallel_for(n, [&](std::size_t i) {
            for (std::size_t j = i; j < n; ++j) {
                K.entries(i, j) = evaluate_kernel(X[i], X[j], spec);
            }
        });
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            K.entries(i, j) = K.entries(j, i);
        }
    }
    return K;
}

/// rows x cols matrix K[i][j] = kernel(rows[i], cols[j]); used for test-vs-train.
inline Matrix cross_kernel(const FeatureMatrix &rows, const FeatureMatrix &cols,
                           const KernelSpec &spec) {
    const std::size_t dr = check_rectangular(rows, "cross_kernel rows");
    const std::size_t dc = check_rectangular(cols, "cross_kernel columns");
    if (dr != dc) {
        throw ShapeError("cross_kernel: feature dimension mismatch");
    }
    Matrix out(rows.size(), cols.size());
    if (spec.kind == KernelKind::Quantum) {
        const auto rs = encode_all(rows, spec.feature_map);
        const auto cs = encode_all(cols, spec.feature_map);
        parallel_for(rows.size(), [&](std::size_t i) {
            for (std::size_t j = 0; j < cols.size(); ++j) {
                out(i, j) = state_fidelity(rs[i], cs[j]);
            }
        });
    } else {
        parallel_for(rows.size(), [&](std::size_t i) {
            for (std::size_t j = 0; j < cols.size(); ++j) {
                out(i, j) = evaluate_kernel(rows[i], cols[j], spec);
            }
        });
    }
    return out;
}

/// Largest |K[i][j] - K[j][i]|.
inline double symmetry_error(const Matrix &K) {
    double worst = 0.0;
    for (std::size_t i = 0; i < K.rows(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            worst = std::max(worst, std::abs(K(i, j) - K(j, i)));
        }
    }
    return worst;
}

// CSV layout: first line holds the comma-separated row ids, then one line of
// %.17g values per row, LF endings.

inline std::string kernel_matrix_to_csv(const KernelMatrix &K) {
    std::string out;
    for (std::size_t i = 0; i < K.row_ids.size(); ++i) {
        if (i != 0) {
            out += ',';
        }
        out += K.row_ids[i];
    }
    out += '\n';
    char buf[32];
    for (std::size_t i = 0; i < K.size(); ++i) {
        for (std::size_t j = 0; j < K.size(); ++j) {
            if (j != 0) {
                out += ',';
            }
            std::snprintf(buf, sizeof buf, "%.17g", K(i, j));
            out += buf;
        }
        out += '\n';
    }
    return out;
}

inline KernelMatrix kernel_matrix_from_csv(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    KernelMatrix K;
    if (!std::getline(in, line)) {
        throw ParseError("kernel CSV: missing header");
    }
    {
        std::istringstream hs(line);
        std::string id;
        while (std::getline(hs, id, ',')) {
            K.row_ids.push_back(id);
        }
    }
    const std::size_t n = K.row_ids.size();
    K.entries = Matrix(n, n);
    std::size_t r = 0;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        if (r >= n) {
            throw ShapeError("kernel CSV: more rows than ids");
        }
        std::istringstream rs(line);
        std::string cell;
        std::size_t c = 0;
        while (std::getline(rs, cell, ',')) {
            if (c >= n) {
                throw ShapeError("kernel CSV: row " + std::to_string(r + 1) + " too long");
            }
            double v = 0.0;
            const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
            if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) {
                throw ParseError("kernel CSV: bad number '" + cell + "' on row " +
                                 std::to_string(r + 1));
            }
            K.entries(r, c++) = v;
        }
        if (c != n) {
            throw ShapeError("kernel CSV: row " + std::to_string(r + 1) + " too short");
        }
        ++r;
    }
    if (r != n) {
        throw ShapeError("kernel CSV: " + std::to_string(r) + " rows for " + std::to_string(n) +
                         " ids");
    }
    return K;
}

} // namespace qstress
