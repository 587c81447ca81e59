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
 * Soft-margin C-SVM on a precomputed kernel matrix.
 *
 * The dual
 *
 *     min_a  1/2 a^T Q a - e^T a,   Q_ij = y_i y_j K_ij
 *     s.t.   0 <= a_i <= C_i,  y^T a = 0
 *
 * is solved by pairwise coordinate descent (SMO). Each step picks the
 * maximal violating pair; ties are broken by a seeded permutation of the
 * sample indices so training is deterministic for a given seed. C_i is the
 * global C scaled by the class weight of sample i.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "matrix.hpp"
#include "qkernel.hpp"

namespace qstress {

enum class ClassWeighting { None, Balanced };

inline void to_json(nlohmann::json &j, ClassWeighting w) {
    j = w == ClassWeighting::None ? "none" : "balanced";
}

inline void from_json(const nlohmann::json &j, ClassWeighting &w) {
    const auto s = j.get<std::string>();
    if (s == "none") {
        w = ClassWeighting::None;
    } else if (s == "balanced") {
        w = ClassWeighting::Balanced;
    } else {
        throw ValidationError("unknown class weighting '" + s + "' (none|balanced)");
    }
}

struct SvmConfig {
    double C{0.5};
    ClassWeighting class_weighting{ClassWeighting::Balanced};
    /// Stopping threshold on the maximal KKT violation.
    double tolerance{1e-3};
    /// Pair updates are capped at max_passes * n; 0 means 10 * n passes.
    std::size_t max_passes{0};
    std::uint64_t seed{0};

    void validate() const {
        if (!(C > 0.0)) {
            throw ValidationError("SVM C must be positive");
        }
        if (!(tolerance > 0.0)) {
            throw ValidationError("SVM tolerance must be positive");
        }
    }
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SvmConfig, C, class_weighting, tolerance,
                                                max_passes, seed)

struct SvmModel {
    /// a_i * y_i for every training sample (zero for non-support vectors).
    std::vector<double> dual_coef;
    /// a_i
    std::vector<double> alpha;
    /// Per-sample upper bound C_i.
    std::vector<double> upper_bound;
    /// Training labels in {-1, +1}.
    std::vector<int> labels;
    double bias{0.0};
    std::vector<std::size_t> support;
    std::size_t iterations{0};
    bool converged{false};
    std::vector<std::string> warnings;
    SvmConfig config{};

    [[nodiscard]] std::size_t n_train() const { return dual_coef.size(); }
};

inline void to_json(nlohmann::json &j, const SvmModel &m) {
    j = nlohmann::json{{"dual_coef", m.dual_coef},
                       {"bias", m.bias},
                       {"support_indices", m.support},
                       {"labels", m.labels},
                       {"upper_bound", m.upper_bound},
                       {"iterations", m.iterations},
                       {"converged", m.converged},
                       {"warnings", m.warnings},
                       {"config", m.config}};
}

inline void from_json(const nlohmann::json &j, SvmModel &m) {
    j.at("dual_coef").get_to(m.dual_coef);
    j.at("bias").get_to(m.bias);
    j.at("support_indices").get_to(m.support);
    j.at("labels").get_to(m.labels);
    j.at("upper_bound").get_to(m.upper_bound);
    m.iterations = j.value("iterations", std::size_t{0});
    m.converged = j.value("converged", false);
    m.warnings = j.value("warnings", std::vector<std::string>{});
    m.config = j.value("config", SvmConfig{});
    if (m.labels.size() != m.dual_coef.size()) {
        throw ShapeError("SVM model: labels and dual coefficients differ in length");
    }
    m.alpha.resize(m.dual_coef.size());
    for (std::size_t i = 0; i < m.dual_coef.size(); ++i) {
        m.alpha[i] = m.dual_coef[i] * m.labels[i];
    }
}

/// weight(c) = n_total / (n_classes * n_c) over the classes present.
inline std::map<int, double> balanced_class_weights(std::span<const int> labels) {
    if (labels.empty()) {
        throw ShapeError("balanced_class_weights: no labels");
    }
    std::map<int, std::size_t> counts;
    for (int l : labels) {
        ++counts[l];
    }
    std::map<int, double> weights;
    const double n = static_cast<double>(labels.size());
    const double k = static_cast<double>(counts.size());
    for (const auto &[c, nc] : counts) {
        weights[c] = n / (k * static_cast<double>(nc));
    }
    return weights;
}

/// Trains a binary SVM; labels must be +1/-1 with both present.
inline SvmModel train_svm(const Matrix &K, std::span<const int> labels,
                          const SvmConfig &config = {}) {
    config.validate();
    const std::size_t n = K.rows();
    if (K.cols() != n) {
        throw ShapeError("train_svm: kernel matrix is not square");
    }
    if (labels.size() != n) {
        throw ShapeError("train_svm: " + std::to_string(labels.size()) + " labels for a " +
                         std::to_string(n) + "x" + std::to_string(n) + " kernel");
    }
    bool has_pos = false;
    bool has_neg = false;
    for (int l : labels) {
        if (l == 1) {
            has_pos = true;
        } else if (l == -1) {
            has_neg = true;
        } else {
            throw ValidationError("train_svm: labels must be +1 or -1, got " + std::to_string(l));
        }
    }
    if (!has_pos || !has_neg) {
        throw DegenerateProblemError("train_svm: both classes must be present");
    }

    SvmModel m;
    m.config = config;
    m.labels.assign(labels.begin(), labels.end());
    m.upper_bound.assign(n, config.C);
    if (config.class_weighting == ClassWeighting::Balanced) {
        const auto w = balanced_class_weights(labels);
        for (std::size_t i = 0; i < n; ++i) {
            m.upper_bound[i] = config.C * w.at(labels[i]);
        }
    }
    const auto &C = m.upper_bound;
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = labels[i];
    }
    auto Q = [&](std::size_t i, std::size_t j) { return y[i] * y[j] * K(i, j); };

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(config.seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<double> alpha(n, 0.0);
    std::vector<double> G(n, -1.0);
    constexpr double kTau = 1e-12;
    constexpr double kSnap = 1e-12;
    const std::size_t passes = config.max_passes == 0 ? 10 * n : config.max_passes;
    const std::size_t max_iter = passes * n;
    bool indefinite = false;

    auto in_up = [&](std::size_t t) {
        return (y[t] > 0 && alpha[t] < C[t]) || (y[t] < 0 && alpha[t] > 0);
    };
    auto in_low = [&](std::size_t t) {
        return (y[t] > 0 && alpha[t] > 0) || (y[t] < 0 && alpha[t] < C[t]);
    };

    std::size_t iter = 0;
    for (; iter < max_iter; ++iter) {
        double gmax = -std::numeric_limits<double>::infinity();
        double gmin = std::numeric_limits<double>::infinity();
        std::size_t i = n;
        std::size_t j = n;
        for (std::size_t t : order) {
            const double v = -y[t] * G[t];
            if (in_up(t) && v > gmax) {
                gmax = v;
                i = t;
            }
            if (in_low(t) && v < gmin) {
                gmin = v;
                j = t;
            }
        }
        if (i == n || j == n || gmax - gmin < config.tolerance) {
            m.converged = true;
            break;
        }

        const double Ci = C[i];
        const double Cj = C[j];
        const double old_ai = alpha[i];
        const double old_aj = alpha[j];
        if (y[i] != y[j]) {
            double quad = Q(i, i) + Q(j, j) + 2 * Q(i, j);
            if (quad <= 0) {
                indefinite = indefinite || quad < -1e-8;
                quad = kTau;
            }
            const double delta = (-G[i] - G[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0) {
                if (alpha[j] < 0) {
                    alpha[j] = 0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0) {
                alpha[i] = 0;
                alpha[j] = -diff;
            }
            if (diff > Ci - Cj) {
                if (alpha[i] > Ci) {
                    alpha[i] = Ci;
                    alpha[j] = Ci - diff;
                }
            } else if (alpha[j] > Cj) {
                alpha[j] = Cj;
                alpha[i] = Cj + diff;
            }
        } else {
            double quad = Q(i, i) + Q(j, j) - 2 * Q(i, j);
            if (quad <= 0) {
                indefinite = indefinite || quad < -1e-8;
                quad = kTau;
            }
            const double delta = (G[i] - G[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > Ci) {
                if (alpha[i] > Ci) {
                    alpha[i] = Ci;
                    alpha[j] = sum - Ci;
                }
            } else if (alpha[j] < 0) {
                alpha[j] = 0;
                alpha[i] = sum;
            }
            if (sum > Cj) {
                if (alpha[j] > Cj) {
                    alpha[j] = Cj;
                    alpha[i] = sum - Cj;
                }
            } else if (alpha[i] < 0) {
                alpha[i] = 0;
                alpha[j] = sum;
            }
        }

        // Clipping arithmetic can leave a variable one ulp inside its box.
        for (std::size_t t : {i, j}) {
            if (alpha[t] < kSnap * C[t]) {
                alpha[t] = 0.0;
            } else if (alpha[t] > C[t] * (1.0 - kSnap)) {
                alpha[t] = C[t];
            }
        }

        const double dai = alpha[i] - old_ai;
        const double daj = alpha[j] - old_aj;
        for (std::size_t t = 0; t < n; ++t) {
            G[t] += Q(i, t) * dai + Q(j, t) * daj;
        }
    }
    m.iterations = iter;
    if (indefinite) {
        m.warnings.emplace_back("kernel matrix is not positive semidefinite; training continued");
    }
    if (!m.converged) {
        m.warnings.emplace_back("iteration cap reached before the KKT tolerance");
    }

    // b: mean over free support vectors, else the midpoint of the feasible interval.
    double sum_free = 0.0;
    std::size_t n_free = 0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n; ++t) {
        const double v = -y[t] * G[t];
        if (alpha[t] > 0 && alpha[t] < C[t]) {
            sum_free += v;
            ++n_free;
        }
        if (in_up(t)) {
            lo = std::max(lo, v);
        }
        if (in_low(t)) {
            hi = std::min(hi, v);
        }
    }
    if (n_free > 0) {
        m.bias = sum_free / static_cast<double>(n_free);
    } else if (std::isfinite(lo) && std::isfinite(hi)) {
        m.bias = 0.5 * (lo + hi);
    } else {
        m.bias = std::isfinite(lo) ? lo : (std::isfinite(hi) ? hi : 0.0);
    }

    m.alpha = alpha;
    m.dual_coef.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        m.dual_coef[t] = alpha[t] * y[t];
        if (alpha[t] > 0) {
            m.support.push_back(t);
        }
    }
    return m;
}

/// sum_i a_i y_i K(x, x_i) + b for each row of K_cross (test x train).
inline std::vector<double> decision_values(const SvmModel &model, const Matrix &K_cross) {
    if (K_cross.cols() != model.n_train()) {
        throw ShapeError("decision_values: kernel has " + std::to_string(K_cross.cols()) +
                         " columns, model was trained on " + std::to_string(model.n_train()));
    }
    std::vector<double> out(K_cross.rows());
    for (std::size_t r = 0; r < K_cross.rows(); ++r) {
        double acc = model.bias;
        for (std::size_t i : model.support) {
            acc += model.dual_coef[i] * K_cross(r, i);
        }
        out[r] = acc;
    }
    return out;
}

/// +1 where the decision value is positive, -1 otherwise.
inline std::vector<int> predict(const SvmModel &model, const Matrix &K_cross) {
    const auto d = decision_values(model, K_cross);
    std::vector<int> out(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        out[i] = d[i] > 0 ? 1 : -1;
    }
    return out;
}

/// One-vs-rest ensemble; two classes collapse to a single binary model.
struct MulticlassSvm {
    std::size_t n_classes{0};
    /// n_classes models, or one model (class 1 positive) when n_classes == 2.
    std::vector<SvmModel> models;
};

inline void to_json(nlohmann::json &j, const MulticlassSvm &m) {
    j = nlohmann::json{{"n_classes", m.n_classes}, {"models", m.models}};
}

inline void from_json(const nlohmann::json &j, MulticlassSvm &m) {
    j.at("n_classes").get_to(m.n_classes);
    j.at("models").get_to(m.models);
}

/// Labels in 0..k-1; every class must occur.
inline MulticlassSvm train_multiclass(const Matrix &K, std::span<const int> labels,
                                      const SvmConfig &config = {}) {
    if (labels.empty()) {
        throw ShapeError("train_multiclass: no labels");
    }
    int max_label = 0;
    for (int l : labels) {
        if (l < 0) {
            throw ValidationError("train_multiclass: negative class label");
        }
        max_label = std::max(max_label, l);
    }
    const auto k = static_cast<std::size_t>(max_label) + 1;
    if (k < 2) {
        throw DegenerateProblemError("train_multiclass: at least two classes are required");
    }
    MulticlassSvm out;
    out.n_classes = k;
    const std::size_t n_models = k == 2 ? 1 : k;
    for (std::size_t c = 0; c < n_models; ++c) {
        const int positive = k == 2 ? 1 : static_cast<int>(c);
        std::vector<int> y(labels.size());
        for (std::size_t i = 0; i < labels.size(); ++i) {
            y[i] = labels[i] == positive ? 1 : -1;
        }
        out.models.push_back(train_svm(K, y, config));
    }
    return out;
}

/// Per-class decision values, row-major [row][class]. Binary models yield one column.
inline std::vector<std::vector<double>> multiclass_decisions(const MulticlassSvm &m,
                                                             const Matrix &K_cross) {
    std::vector<std::vector<double>> out(K_cross.rows());
    for (const auto &model : m.models) {
        const auto d = decision_values(model, K_cross);
        for (std::size_t r = 0; r < d.size(); ++r) {
            out[r].push_back(d[r]);
        }
    }
    return out;
}

/// Argmax rule over class scores; ties go to the lowest class index.
inline int argmax_class(std::span<const double> scores) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < scores.size(); ++c) {
        if (scores[c] > scores[best]) {
            best = c;
        }
    }
    return static_cast<int>(best);
}

inline std::vector<int> predict_multiclass(const MulticlassSvm &m, const Matrix &K_cross) {
    const auto d = multiclass_decisions(m, K_cross);
    std::vector<int> out(d.size());
    for (std::size_t r = 0; r < d.size(); ++r) {
        out[r] = m.n_classes == 2 ? (d[r][0] > 0 ? 1 : 0) : argmax_class(d[r]);
    }
    return out;
}

} // namespace qstress
