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
 * Classical baseline: 4 -> 12 (ReLU) -> 6 (ReLU) -> 1 (sigmoid) network with
 * inverted dropout after each hidden layer, trained by Adam on binary
 * cross-entropy plus L2 weight decay, with early stopping and
 * reduce-on-plateau learning-rate scheduling.
 */
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "error.hpp"
#include "matrix.hpp"

namespace qstress {

inline constexpr std::array<std::size_t, 4> kMlpWidths{4, 12, 6, 1};

struct DenseLayer {
    std::size_t n_in{0};
    std::size_t n_out{0};
    /// n_out x n_in, row-major.
    std::vector<double> weights;
    std::vector<double> bias;

    [[nodiscard]] double w(std::size_t o, std::size_t i) const { return weights[o * n_in + i]; }
    [[nodiscard]] std::size_t param_count() const { return weights.size() + bias.size(); }

    friend bool operator==(const DenseLayer &, const DenseLayer &) = default;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DenseLayer, n_in, n_out, weights, bias)

struct MlpTrainConfig {
    double learning_rate{1e-3};
    double beta1{0.9};
    double beta2{0.999};
    double epsilon{1e-8};
    double l2_lambda{1e-4};
    std::size_t early_stop_patience{20};
    double lr_reduce_factor{0.5};
    std::size_t lr_patience{10};
    std::size_t max_epochs{500};
    std::uint64_t seed{0};

    void validate() const {
        if (!(learning_rate > 0 && beta1 > 0 && beta1 < 1 && beta2 > 0 && beta2 < 1 &&
              epsilon > 0 && l2_lambda >= 0)) {
            throw ValidationError("MLP optimiser settings out of range");
        }
        if (!(lr_reduce_factor > 0 && lr_reduce_factor < 1)) {
            throw ValidationError("lr_reduce_factor must lie in (0, 1)");
        }
        if (early_stop_patience == 0 || lr_patience == 0 || max_epochs == 0) {
            throw ValidationError("MLP patience and epoch counts must be positive");
        }
    }
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(MlpTrainConfig, learning_rate, beta1, beta2,
                                                epsilon, l2_lambda, early_stop_patience,
                                                lr_reduce_factor, lr_patience, max_epochs, seed)

struct MlpModel {
    std::array<DenseLayer, 3> layers;
    double dropout_rate{0.3};
    MlpTrainConfig config{};

    [[nodiscard]] std::size_t param_count() const {
        std::size_t c = 0;
        for (const auto &l : layers) {
            c += l.param_count();
        }
        return c;
    }
};

inline void to_json(nlohmann::json &j, const MlpModel &m) {
    j = nlohmann::json{{"layers", m.layers}, {"dropout_rate", m.dropout_rate}, {"config", m.config}};
}

inline void from_json(const nlohmann::json &j, MlpModel &m) {
    j.at("layers").get_to(m.layers);
    m.dropout_rate = j.value("dropout_rate", 0.3);
    m.config = j.value("config", MlpTrainConfig{});
    for (std::size_t l = 0; l < 3; ++l) {
        const auto &L = m.layers[l];
        if (L.n_in != kMlpWidths[l] || L.n_out != kMlpWidths[l + 1] ||
            L.weights.size() != L.n_in * L.n_out || L.bias.size() != L.n_out) {
            throw ShapeError("MLP model: layer " + std::to_string(l) + " has the wrong shape");
        }
    }
}

/// Uniform He-style init, limit sqrt(6 / fan_in); zero biases.
inline MlpModel build_mlp(std::uint64_t seed, double dropout_rate = 0.3) {
    if (!(dropout_rate >= 0.0 && dropout_rate < 1.0)) {
        throw ValidationError("dropout rate must lie in [0, 1)");
    }
    MlpModel m;
    m.dropout_rate = dropout_rate;
    std::mt19937_64 rng(seed);
    for (std::size_t l = 0; l < 3; ++l) {
        auto &L = m.layers[l];
        L.n_in = kMlpWidths[l];
        L.n_out = kMlpWidths[l + 1];
        const double limit = std::sqrt(6.0 / static_cast<double>(L.n_in));
        std::uniform_real_distribution<double> dist(-limit, limit);
        L.weights.resize(L.n_in * L.n_out);
        for (auto &w : L.weights) {
            w = dist(rng);
        }
        L.bias.assign(L.n_out, 0.0);
    }
    return m;
}

/// Per-unit multipliers for the two hidden layers: 0 (dropped) or 1/(1-rate).
struct DropoutMasks {
    std::vector<double> hidden1;
    std::vector<double> hidden2;

    static DropoutMasks identity() {
        return {std::vector<double>(kMlpWidths[1], 1.0), std::vector<double>(kMlpWidths[2], 1.0)};
    }
};

inline DropoutMasks sample_dropout(double rate, std::mt19937_64 &rng) {
    DropoutMasks m = DropoutMasks::identity();
    if (rate <= 0.0) {
        return m;
    }
    std::bernoulli_distribution keep(1.0 - rate);
    const double scale = 1.0 / (1.0 - rate);
    for (auto &v : m.hidden1) {
        v = keep(rng) ? scale : 0.0;
    }
    for (auto &v : m.hidden2) {
        v = keep(rng) ? scale : 0.0;
    }
    return m;
}

/// Intermediate activations of one forward pass.
struct MlpTrace {
    std::vector<double> z1, a1, z2, a2;
    double logit{0.0};
    double prob{0.0};
};

namespace detail {
inline double sigmoid(double z) {
    if (z >= 0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

inline std::vector<double> dense(const DenseLayer &L, std::span<const double> in) {
    std::vector<double> out(L.n_out);
    for (std::size_t o = 0; o < L.n_out; ++o) {
        double acc = L.bias[o];
        for (std::size_t i = 0; i < L.n_in; ++i) {
            acc += L.w(o, i) * in[i];
        }
        out[o] = acc;
    }
    return out;
}
} // namespace detail

inline MlpTrace mlp_trace(const MlpModel &m, std::span<const double> x, const DropoutMasks &masks) {
    if (x.size() != kMlpWidths[0]) {
        throw ShapeError("MLP input needs " + std::to_string(kMlpWidths[0]) + " features, got " +
                         std::to_string(x.size()));
    }
    MlpTrace t;
    t.z1 = detail::dense(m.layers[0], x);
    t.a1.resize(t.z1.size());
    for (std::size_t i = 0; i < t.z1.size(); ++i) {
        t.a1[i] = std::max(0.0, t.z1[i]) * masks.hidden1[i];
    }
    t.z2 = detail::dense(m.layers[1], t.a1);
    t.a2.resize(t.z2.size());
    for (std::size_t i = 0; i < t.z2.size(); ++i) {
        t.a2[i] = std::max(0.0, t.z2[i]) * masks.hidden2[i];
    }
    t.logit = detail::dense(m.layers[2], t.a2)[0];
    t.prob = detail::sigmoid(t.logit);
    return t;
}

/// Forward pass with explicit dropout masks.
inline double mlp_forward(const MlpModel &m, std::span<const double> x, const DropoutMasks &masks) {
    return mlp_trace(m, x, masks).prob;
}

/// Inference mode applies no dropout; training mode draws masks from dropout_seed.
inline double mlp_forward(const MlpModel &m, std::span<const double> x, bool training = false,
                          std::uint64_t dropout_seed = 0) {
    if (!training) {
        return mlp_forward(m, x, DropoutMasks::identity());
    }
    std::mt19937_64 rng(dropout_seed);
    return mlp_forward(m, x, sample_dropout(m.dropout_rate, rng));
}

/// BCE from the logit: softplus(z) - y z.
inline double logit_bce(double logit, int y) {
    return std::max(logit, 0.0) - logit * y + std::log1p(std::exp(-std::abs(logit)));
}

inline double l2_penalty(const MlpModel &m) {
    double s = 0.0;
    for (const auto &L : m.layers) {
        for (double w : L.weights) {
            s += w * w;
        }
    }
    return s;
}

/// Gradient with the same layout as the model's layers.
using MlpGradient = std::array<DenseLayer, 3>;

inline MlpGradient zero_gradient(const MlpModel &m) {
    MlpGradient g = m.layers;
    for (auto &L : g) {
        std::fill(L.weights.begin(), L.weights.end(), 0.0);
        std::fill(L.bias.begin(), L.bias.end(), 0.0);
    }
    return g;
}

/// Accumulates d(BCE)/d(params) of one sample into g; returns the sample's BCE.
inline double accumulate_gradient(const MlpModel &m, std::span<const double> x, int y,
                                  const DropoutMasks &masks, MlpGradient &g) {
    const auto t = mlp_trace(m, x, masks);
    const double d3 = t.prob - y;
    const auto &L3 = m.layers[2];
    const auto &L2 = m.layers[1];

    g[2].bias[0] += d3;
    std::vector<double> d2(L2.n_out);
    for (std::size_t i = 0; i < L3.n_in; ++i) {
        g[2].weights[i] += d3 * t.a2[i];
        d2[i] = t.z2[i] > 0 ? d3 * L3.w(0, i) * masks.hidden2[i] : 0.0;
    }
    std::vector<double> d1(L2.n_in, 0.0);
    for (std::size_t o = 0; o < L2.n_out; ++o) {
        g[1].bias[o] += d2[o];
        for (std::size_t i = 0; i < L2.n_in; ++i) {
            g[1].weights[o * L2.n_in + i] += d2[o] * t.a1[i];
            d1[i] += d2[o] * L2.w(o, i);
        }
    }
    const auto &L1 = m.layers[0];
    for (std::size_t o = 0; o < L1.n_out; ++o) {
        const double d = t.z1[o] > 0 ? d1[o] * masks.hidden1[o] : 0.0;
        g[0].bias[o] += d;
        for (std::size_t i = 0; i < L1.n_in; ++i) {
            g[0].weights[o * L1.n_in + i] += d * x[i];
        }
    }
    return logit_bce(t.logit, y);
}

/// Mean BCE over a set plus l2 * ||W||^2, inference mode.
inline double mlp_loss(const MlpModel &m, const FeatureMatrix &X, std::span<const int> y,
                       double l2_lambda = 0.0) {
    double s = 0.0;
    for (std::size_t i = 0; i < X.size(); ++i) {
        s += logit_bce(mlp_trace(m, X[i], DropoutMasks::identity()).logit, y[i]);
    }
    return s / static_cast<double>(X.size()) + l2_lambda * l2_penalty(m);
}

/// Full gradient of mlp_loss (no dropout).
inline MlpGradient mlp_loss_gradient(const MlpModel &m, const FeatureMatrix &X,
                                     std::span<const int> y, double l2_lambda = 0.0) {
    auto g = zero_gradient(m);
    for (std::size_t i = 0; i < X.size(); ++i) {
        accumulate_gradient(m, X[i], y[i], DropoutMasks::identity(), g);
    }
    const double inv = 1.0 / static_cast<double>(X.size());
    for (std::size_t l = 0; l < 3; ++l) {
        for (std::size_t k = 0; k < g[l].weights.size(); ++k) {
            g[l].weights[k] = g[l].weights[k] * inv + 2.0 * l2_lambda * m.layers[l].weights[k];
        }
        for (auto &b : g[l].bias) {
            b *= inv;
        }
    }
    return g;
}

inline int mlp_predict(const MlpModel &m, std::span<const double> x) {
    return mlp_forward(m, x) > 0.5 ? 1 : 0;
}

struct MlpHistory {
    std::vector<double> train_loss;
    std::vector<double> val_loss;
    std::vector<double> learning_rate;
    std::size_t best_epoch{0};
    bool stopped_early{false};
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(MlpHistory, train_loss, val_loss, learning_rate, best_epoch,
                                   stopped_early)

struct MlpTrainResult {
    MlpModel model;
    MlpHistory history;
};

namespace detail {
inline void check_binary_set(const FeatureMatrix &X, std::span<const int> y, const char *what,
                             bool need_both) {
    if (X.empty()) {
        throw ShapeError(std::string(what) + ": empty set");
    }
    if (X.size() != y.size()) {
        throw ShapeError(std::string(what) + ": label count differs from sample count");
    }
    bool has0 = false;
    bool has1 = false;
    for (int l : y) {
        if (l != 0 && l != 1) {
            throw ValidationError(std::string(what) + ": labels must be 0 or 1");
        }
        (l == 0 ? has0 : has1) = true;
    }
    if (need_both && !(has0 && has1)) {
        throw DegenerateProblemError(std::string(what) + ": training set contains a single class");
    }
}
} // namespace detail

/**
 * Full-batch Adam on mean BCE + l2 * ||W||^2.
 *
 * After every epoch the validation BCE is recorded. The learning rate is
 * multiplied by lr_reduce_factor after lr_patience epochs without a new
 * best; training stops after early_stop_patience such epochs. The returned
 * model holds the weights of the best validation epoch.
 */
inline MlpTrainResult train_mlp(const FeatureMatrix &X, std::span<const int> y,
                                const FeatureMatrix &X_val, std::span<const int> y_val,
                                MlpModel model) {
    const auto &cfg = model.config;
    cfg.validate();
    detail::check_binary_set(X, y, "train_mlp", true);
    detail::check_binary_set(X_val, y_val, "train_mlp validation", false);

    std::mt19937_64 rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
    auto m1 = zero_gradient(model);
    auto m2 = zero_gradient(model);
    double lr = cfg.learning_rate;
    double b1t = 1.0;
    double b2t = 1.0;

    MlpHistory hist;
    MlpModel best = model;
    double best_val = std::numeric_limits<double>::infinity();
    std::size_t since_best = 0;
    std::size_t plateau = 0;
    const double inv = 1.0 / static_cast<double>(X.size());

    for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        auto g = zero_gradient(model);
        double loss = 0.0;
        for (std::size_t i = 0; i < X.size(); ++i) {
            loss += accumulate_gradient(model, X[i], y[i], sample_dropout(model.dropout_rate, rng), g);
        }
        loss = loss * inv + cfg.l2_lambda * l2_penalty(model);

        b1t *= cfg.beta1;
        b2t *= cfg.beta2;
        for (std::size_t l = 0; l < 3; ++l) {
            auto update = [&](std::vector<double> &param, std::vector<double> &grad,
                              std::vector<double> &mom, std::vector<double> &vel, bool decay) {
                for (std::size_t k = 0; k < param.size(); ++k) {
                    double gk = grad[k] * inv;
                    if (decay) {
                        gk += 2.0 * cfg.l2_lambda * param[k];
                    }
                    mom[k] = cfg.beta1 * mom[k] + (1 - cfg.beta1) * gk;
                    vel[k] = cfg.beta2 * vel[k] + (1 - cfg.beta2) * gk * gk;
                    const double mh = mom[k] / (1 - b1t);
                    const double vh = vel[k] / (1 - b2t);
                    param[k] -= lr * mh / (std::sqrt(vh) + cfg.epsilon);
                }
            };
            update(model.layers[l].weights, g[l].weights, m1[l].weights, m2[l].weights, true);
            update(model.layers[l].bias, g[l].bias, m1[l].bias, m2[l].bias, false);
        }

        const double val = mlp_loss(model, X_val, y_val);
        hist.train_loss.push_back(loss);
        hist.val_loss.push_back(val);
        hist.learning_rate.push_back(lr);
        if (val < best_val) {
            best_val = val;
            best = model;
            hist.best_epoch = epoch;
            since_best = 0;
            plateau = 0;
        } else {
            ++since_best;
            if (++plateau >= cfg.lr_patience) {
                lr *= cfg.lr_reduce_factor;
                plateau = 0;
            }
            if (since_best >= cfg.early_stop_patience) {
                hist.stopped_early = true;
                break;
            }
        }
    }
    return {best, hist};
}

} // namespace qstress
