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
 * Variational classifier: ZZ-encoded input followed by a Tree Tensor Network
 * ansatz, read out as the Pauli-Z expectation of the tree root.
 *
 * Ansatz layout for n qubits (n even), 3n parameters:
 *
 *   layer 1   Ry(theta[2q]) Ry(theta[2q+1]) on each qubit q
 *   tree      CNOT child -> parent, pairing the active qubits level by level:
 *             n=8: (0,1)(2,3)(4,5)(6,7), then (1,3)(5,7), then (3,7)
 *   layer 2   Ry(theta[2n+q]) on each qubit q
 *
 * The probability of the high class is p = (1 - <Z>)/2, or sigmoid(kappa <Z>)
 * when the sigmoid readout is selected. Gradients use the parameter-shift
 * rule for Ry generators.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "encodings.hpp"
#include "error.hpp"
#include "matrix.hpp"
#include "parallel.hpp"
#include "simulator.hpp"

namespace qstress {

struct TtnAnsatzSpec {
    std::size_t n_qubits{8};
    /// Defaults to the tree root (n_qubits - 1).
    std::optional<std::size_t> output_qubit{};

    [[nodiscard]] std::size_t layer1_params() const { return 2 * n_qubits; }
    [[nodiscard]] std::size_t layer2_params() const { return n_qubits; }
    [[nodiscard]] std::size_t param_count() const { return layer1_params() + layer2_params(); }
    [[nodiscard]] std::size_t readout_qubit() const {
        return output_qubit.value_or(n_qubits - 1);
    }

    void validate() const {
        if (n_qubits < 2 || n_qubits % 2 != 0) {
            throw ShapeError("TTN ansatz needs a positive even qubit count, got " +
                             std::to_string(n_qubits));
        }
        if (n_qubits > kMaxQubits) {
            throw CapacityError("TTN ansatz qubit count above " + std::to_string(kMaxQubits));
        }
        if (readout_qubit() >= n_qubits) {
            throw IndexError("TTN output qubit " + std::to_string(readout_qubit()) +
                             " out of range");
        }
    }
};

inline void to_json(nlohmann::json &j, const TtnAnsatzSpec &s) {
    j = nlohmann::json{{"n_qubits", s.n_qubits}, {"output_qubit", s.readout_qubit()}};
}

inline void from_json(const nlohmann::json &j, TtnAnsatzSpec &s) {
    s.n_qubits = j.value("n_qubits", std::size_t{8});
    if (j.contains("output_qubit") && !j.at("output_qubit").is_null()) {
        s.output_qubit = j.at("output_qubit").get<std::size_t>();
    } else {
        s.output_qubit.reset();
    }
}

using ParamVector = std::vector<double>;

enum class QnnReadout { Affine, Sigmoid };

inline void to_json(nlohmann::json &j, QnnReadout r) {
    j = r == QnnReadout::Affine ? "affine" : "sigmoid";
}

inline void from_json(const nlohmann::json &j, QnnReadout &r) {
    const auto s = j.get<std::string>();
    if (s == "affine") {
        r = QnnReadout::Affine;
    } else if (s == "sigmoid") {
        r = QnnReadout::Sigmoid;
    } else {
        throw ValidationError("unknown QNN readout '" + s + "' (affine|sigmoid)");
    }
}

struct QnnModel {
    TtnAnsatzSpec spec{};
    FeatureMapSpec feature_map{};
    ParamVector theta{};
    double threshold{0.5};
    QnnReadout readout{QnnReadout::Affine};
    double kappa{1.0};
    std::vector<double> loss_history{};

    void validate() const {
        spec.validate();
        if (feature_map.kind != EncodingKind::ZZ) {
            throw ValidationError("QNN input encoding must be the ZZ feature map");
        }
        if (feature_map.n_qubits != spec.n_qubits) {
            throw ShapeError("QNN feature map and ansatz disagree on qubit count");
        }
        if (!(threshold > 0.0 && threshold < 1.0)) {
            throw ValidationError("QNN threshold must lie in (0, 1)");
        }
    }
};

inline void to_json(nlohmann::json &j, const QnnModel &m) {
    j = nlohmann::json{{"spec", m.spec},         {"feature_map", m.feature_map},
                       {"theta", m.theta},       {"threshold", m.threshold},
                       {"readout", m.readout},   {"kappa", m.kappa},
                       {"loss_history", m.loss_history}};
}

inline void from_json(const nlohmann::json &j, QnnModel &m) {
    m.spec = j.value("spec", TtnAnsatzSpec{});
    m.feature_map = j.value("feature_map", FeatureMapSpec{});
    m.theta = j.value("theta", ParamVector{});
    m.threshold = j.value("threshold", 0.5);
    m.readout = j.value("readout", QnnReadout::Affine);
    m.kappa = j.value("kappa", 1.0);
    m.loss_history = j.value("loss_history", std::vector<double>{});
}

/// Child -> parent CNOT pairs of the binary tree, level by level.
inline std::vector<std::pair<std::size_t, std::size_t>> ttn_cnot_tree(std::size_t n_qubits) {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::size_t> active(n_qubits);
    for (std::size_t q = 0; q < n_qubits; ++q) {
        active[q] = q;
    }
    while (active.size() > 1) {
        std::vector<std::size_t> next;
        std::size_t i = 0;
        for (; i + 1 < active.size(); i += 2) {
            pairs.emplace_back(active[i], active[i + 1]);
            next.push_back(active[i + 1]);
        }
        if (i < active.size()) {
            next.push_back(active[i]);
        }
        active = std::move(next);
    }
    return pairs;
}

inline Circuit build_ttn_ansatz(const TtnAnsatzSpec &spec, std::span<const double> theta) {
    spec.validate();
    if (theta.size() != spec.param_count()) {
        throw ShapeError("TTN ansatz on " + std::to_string(spec.n_qubits) + " qubits needs " +
                         std::to_string(spec.param_count()) + " parameters, got " +
                         std::to_string(theta.size()));
    }
    const std::size_t n = spec.n_qubits;
    Circuit c(n);
    for (std::size_t q = 0; q < n; ++q) {
        c.add(Gate::ry(q, theta[2 * q]));
        c.add(Gate::ry(q, theta[2 * q + 1]));
    }
    for (const auto &[child, parent] : ttn_cnot_tree(n)) {
        c.add(Gate::cnot(child, parent));
    }
    for (std::size_t q = 0; q < n; ++q) {
        c.add(Gate::ry(q, theta[2 * n + q]));
    }
    return c;
}

/// <Z_out> after the ansatz acts on an already-encoded input state.
inline double ansatz_expectation(const Statevector &encoded, const TtnAnsatzSpec &spec,
                                 std::span<const double> theta) {
    auto s = run_circuit(build_ttn_ansatz(spec, theta), encoded);
    return expectation_z(s, spec.readout_qubit());
}

/// Maps <Z> to the high-class probability.
inline double readout_probability(double z, const QnnModel &m) {
    if (m.readout == QnnReadout::Affine) {
        return 0.5 * (1.0 - z);
    }
    return 1.0 / (1.0 + std::exp(-m.kappa * z));
}

/// dp/d<Z> at the given <Z>.
inline double readout_derivative(double z, const QnnModel &m) {
    if (m.readout == QnnReadout::Affine) {
        return -0.5;
    }
    const double p = readout_probability(z, m);
    return m.kappa * p * (1.0 - p);
}

inline Statevector qnn_encode(std::span<const double> x, const QnnModel &m) {
    return run_circuit(zz_feature_map(x, m.feature_map), new_statevector(m.feature_map.n_qubits));
}

inline double qnn_expectation(std::span<const double> x, const QnnModel &m) {
    m.validate();
    return ansatz_expectation(qnn_encode(x, m), m.spec, m.theta);
}

/// High-class probability in [0, 1].
inline double qnn_forward(std::span<const double> x, const QnnModel &m) {
    return readout_probability(qnn_expectation(x, m), m);
}

/// Label 1 iff p > threshold.
inline int qnn_predict(std::span<const double> x, const QnnModel &m) {
    return qnn_forward(x, m) > m.threshold ? 1 : 0;
}

/// d<Z>/dtheta_i = (<Z>(theta_i + pi/2) - <Z>(theta_i - pi/2)) / 2.
inline std::vector<double> expectation_gradient(const Statevector &encoded,
                                                const TtnAnsatzSpec &spec,
                                                std::span<const double> theta) {
    constexpr double kShift = 1.5707963267948966;
    std::vector<double> shifted(theta.begin(), theta.end());
    std::vector<double> grad(theta.size());
    for (std::size_t i = 0; i < theta.size(); ++i) {
        const double t = shifted[i];
        shifted[i] = t + kShift;
        const double plus = ansatz_expectation(encoded, spec, shifted);
        shifted[i] = t - kShift;
        const double minus = ansatz_expectation(encoded, spec, shifted);
        shifted[i] = t;
        grad[i] = 0.5 * (plus - minus);
    }
    return grad;
}

inline constexpr double kProbClamp = 1e-9;

/// -[y ln p + (1-y) ln(1-p)] with p clamped to [1e-9, 1 - 1e-9].
inline double bce_loss(double p, int y) {
    const double pc = std::clamp(p, kProbClamp, 1.0 - kProbClamp);
    return y == 1 ? -std::log(pc) : -std::log(1.0 - pc);
}

/// dL/dp, zero where the clamp is active.
inline double bce_derivative(double p, int y) {
    if (p < kProbClamp || p > 1.0 - kProbClamp) {
        return 0.0;
    }
    return y == 1 ? -1.0 / p : 1.0 / (1.0 - p);
}

/// dL/dtheta for one labelled sample.
inline std::vector<double> parameter_shift_gradient(std::span<const double> x, int label,
                                                    const QnnModel &m) {
    m.validate();
    const auto encoded = qnn_encode(x, m);
    const double z = ansatz_expectation(encoded, m.spec, m.theta);
    const double p = readout_probability(z, m);
    const double chain = bce_derivative(p, label) * readout_derivative(z, m);
    auto g = expectation_gradient(encoded, m.spec, m.theta);
    for (auto &v : g) {
        v *= chain;
    }
    return g;
}

struct QnnLoss {
    double loss{0.0};
    std::vector<double> gradient;
};

/// Mean BCE loss and its gradient over pre-encoded samples.
inline QnnLoss batch_loss_and_gradient(std::span<const Statevector> encoded,
                                       std::span<const int> labels, const QnnModel &m) {
    const std::size_t n = encoded.size();
    std::vector<double> losses(n);
    std::vector<std::vector<double>> grads(n);
    parallel_for(n, [&](std::size_t i) {
        const double z = ansatz_expectation(encoded[i], m.spec, m.theta);
        const double p = readout_probability(z, m);
        losses[i] = bce_loss(p, labels[i]);
        const double chain = bce_derivative(p, labels[i]) * readout_derivative(z, m);
        grads[i] = expectation_gradient(encoded[i], m.spec, m.theta);
        for (auto &v : grads[i]) {
            v *= chain;
        }
    });
    QnnLoss out;
    out.gradient.assign(m.theta.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        out.loss += losses[i];
        for (std::size_t k = 0; k < out.gradient.size(); ++k) {
            out.gradient[k] += grads[i][k];
        }
    }
    const double inv = 1.0 / static_cast<double>(n);
    out.loss *= inv;
    for (auto &v : out.gradient) {
        v *= inv;
    }
    return out;
}

struct QnnTrainConfig {
    double learning_rate{0.05};
    std::size_t max_epochs{200};
    std::uint64_t seed{0};
    /// Early exit once |dL| stays below this for `plateau_epochs` epochs.
    double plateau_delta{1e-6};
    std::size_t plateau_epochs{10};
    /// Half-width of the uniform initialisation range.
    double init_range{0.1};
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(QnnTrainConfig, learning_rate, max_epochs, seed,
                                                plateau_delta, plateau_epochs, init_range)

/// theta ~ U(-range, range) from a seeded generator.
inline ParamVector init_theta(const TtnAnsatzSpec &spec, std::uint64_t seed, double range = 0.1) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(-range, range);
    ParamVector theta(spec.param_count());
    for (auto &t : theta) {
        t = dist(rng);
    }
    return theta;
}

/**
 * Full-batch gradient descent on the mean BCE loss.
 *
 * If model.theta is empty it is initialised from config.seed. loss_history
 * holds the loss at the start of every epoch.
 */
inline QnnModel train_qnn(const FeatureMatrix &X, std::span<const int> labels, QnnModel model,
                          const QnnTrainConfig &config = {}) {
    if (X.empty()) {
        throw ShapeError("train_qnn: empty training set");
    }
    if (labels.size() != X.size()) {
        throw ShapeError("train_qnn: label count differs from sample count");
    }
    bool has0 = false;
    bool has1 = false;
    for (int l : labels) {
        if (l == 0) {
            has0 = true;
        } else if (l == 1) {
            has1 = true;
        } else {
            throw ValidationError("train_qnn: labels must be 0 or 1");
        }
    }
    if (!has0 || !has1) {
        throw DegenerateProblemError("train_qnn: training set contains a single class");
    }
    if (model.theta.empty()) {
        model.theta = init_theta(model.spec, config.seed, config.init_range);
    }
    model.validate();
    if (model.theta.size() != model.spec.param_count()) {
        throw ShapeError("train_qnn: theta has the wrong length");
    }

    std::vector<Statevector> encoded(X.size(), Statevector(1));
    parallel_for(X.size(), [&](std::size_t i) { encoded[i] = qnn_encode(X[i], model); });

    model.loss_history.clear();
    std::size_t flat = 0;
    for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
        const auto step = batch_loss_and_gradient(encoded, labels, model);
        if (!model.loss_history.empty() &&
            std::abs(step.loss - model.loss_history.back()) < config.plateau_delta) {
            ++flat;
        } else {
            flat = 0;
        }
        model.loss_history.push_back(step.loss);
        if (flat >= config.plateau_epochs) {
            break;
        }
        for (std::size_t k = 0; k < model.theta.size(); ++k) {
            model.theta[k] -= config.learning_rate * step.gradient[k];
        }
    }
    return model;
}

} // namespace qstress
