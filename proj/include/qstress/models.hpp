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
 * Uniform fit/predict wrapper over the five classifiers. Each fitted model
 * carries its own preprocessing so it can be applied to raw event features.
 */
#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "data.hpp"
#include "error.hpp"
#include "mlp.hpp"
#include "qkernel.hpp"
#include "qnn.hpp"
#include "svm.hpp"

namespace qstress {

enum class ModelId { LinearSvm, RbfSvm, Qsvm, Nn, Qnn };

inline constexpr std::array<ModelId, 5> kAllModels{ModelId::LinearSvm, ModelId::RbfSvm,
                                                   ModelId::Qsvm, ModelId::Nn, ModelId::Qnn};

inline const char *model_name(ModelId id) {
    switch (id) {
    case ModelId::LinearSvm:
        return "linear-svm";
    case ModelId::RbfSvm:
        return "rbf-svm";
    case ModelId::Qsvm:
        return "qsvm";
    case ModelId::Nn:
        return "nn";
    case ModelId::Qnn:
        return "qnn";
    }
    return "?";
}

inline ModelId parse_model_id(std::string_view s) {
    for (ModelId id : kAllModels) {
        if (s == model_name(id)) {
            return id;
        }
    }
    throw ValidationError("unknown model '" + std::string(s) +
                          "' (linear-svm|rbf-svm|qsvm|nn|qnn)");
}

inline void to_json(nlohmann::json &j, ModelId id) { j = model_name(id); }
inline void from_json(const nlohmann::json &j, ModelId &id) {
    id = parse_model_id(j.get<std::string>());
}

inline bool is_kernel_model(ModelId id) {
    return id == ModelId::LinearSvm || id == ModelId::RbfSvm || id == ModelId::Qsvm;
}

/// NN and QNN are binary classifiers; SVMs follow the configured task.
inline Task model_task(ModelId id, Task configured) {
    return is_kernel_model(id) ? configured : Task::Binary;
}

struct FittedModel {
    ModelId id{ModelId::LinearSvm};
    Task task{Task::Binary};
    Preprocessor prep{};
    KernelSpec kernel{};
    /// Preprocessed training rows (kernel models only).
    FeatureMatrix support_rows{};
    MulticlassSvm svm{};
    MlpModel mlp{};
    MlpHistory mlp_history{};
    QnnModel qnn{};
    std::size_t parameter_count{0};

    /// Predicted labels for raw (unpreprocessed) feature rows.
    [[nodiscard]] std::vector<int> predict(const FeatureMatrix &raw) const {
        if (raw.empty()) {
            return {};
        }
        const auto X = prep.transform(raw);
        std::vector<int> out(X.size());
        switch (id) {
        case ModelId::LinearSvm:
        case ModelId::RbfSvm:
        case ModelId::Qsvm:
            return predict_multiclass(svm, cross_kernel(X, support_rows, kernel));
        case ModelId::Nn:
            for (std::size_t i = 0; i < X.size(); ++i) {
                out[i] = mlp_predict(mlp, X[i]);
            }
            return out;
        case ModelId::Qnn:
            parallel_for(X.size(), [&](std::size_t i) { out[i] = qnn_predict(X[i], qnn); });
            return out;
        }
        return out;
    }
};

inline void to_json(nlohmann::json &j, const FittedModel &m) {
    j = nlohmann::json{{"model", m.id},
                       {"task", m.task},
                       {"preprocessing", m.prep},
                       {"parameter_count", m.parameter_count}};
    if (is_kernel_model(m.id)) {
        nlohmann::json k{{"kind", kernel_name(m.kernel.kind)}};
        if (m.kernel.kind == KernelKind::Rbf) {
            k["gamma"] = m.kernel.rbf.gamma;
        }
        if (m.kernel.kind == KernelKind::Quantum) {
            k["feature_map"] = m.kernel.feature_map;
        }
        j["kernel"] = k;
        j["training_rows"] = m.support_rows;
        j["svm"] = m.svm;
    } else if (m.id == ModelId::Nn) {
        j["mlp"] = m.mlp;
        j["history"] = m.mlp_history;
    } else {
        j["qnn"] = m.qnn;
    }
}

inline void from_json(const nlohmann::json &j, FittedModel &m) {
    j.at("model").get_to(m.id);
    j.at("task").get_to(m.task);
    j.at("preprocessing").get_to(m.prep);
    m.parameter_count = j.value("parameter_count", std::size_t{0});
    if (is_kernel_model(m.id)) {
        const auto &k = j.at("kernel");
        const auto kind = k.at("kind").get<std::string>();
        if (kind == "linear") {
            m.kernel = KernelSpec::linear();
        } else if (kind == "rbf") {
            m.kernel = KernelSpec::gaussian(k.at("gamma").get<double>());
        } else if (kind == "quantum") {
            m.kernel = KernelSpec::quantum(k.at("feature_map").get<FeatureMapSpec>());
        } else {
            throw ValidationError("unknown kernel kind '" + kind + "'");
        }
        j.at("training_rows").get_to(m.support_rows);
        j.at("svm").get_to(m.svm);
    } else if (m.id == ModelId::Nn) {
        j.at("mlp").get_to(m.mlp);
    } else {
        j.at("qnn").get_to(m.qnn);
    }
}

/// Kernel for one of the SVM variants.
inline KernelSpec kernel_for(ModelId id, const ExperimentConfig &cfg) {
    switch (id) {
    case ModelId::LinearSvm:
        return KernelSpec::linear();
    case ModelId::RbfSvm:
        return KernelSpec::gaussian(cfg.svm.gamma);
    case ModelId::Qsvm:
        return KernelSpec::quantum(cfg.qsvm.feature_map);
    default:
        throw ValidationError(std::string(model_name(id)) + " is not a kernel model");
    }
}

/// Non-zero dual coefficients plus one bias per binary model.
inline std::size_t svm_parameter_count(const MulticlassSvm &m) {
    std::size_t c = 0;
    for (const auto &b : m.models) {
        c += b.support.size() + 1;
    }
    return c;
}

/**
 * Fits one model on raw training rows.
 *
 * labels are 0..k-1 under the model's task. The classical models use the
 * [0, 1] min-max pipeline and the quantum ones the [0, pi/2] + L2 pipeline,
 * both fitted on the training rows only. The NN validation set is a
 * stratified hold-out of the training rows.
 */
inline FittedModel fit_model(ModelId id, const FeatureMatrix &raw, std::span<const int> labels,
                             const ExperimentConfig &cfg) {
    check_rectangular(raw, "fit_model");
    if (raw.size() != labels.size()) {
        throw ShapeError("fit_model: label count differs from sample count");
    }
    FittedModel m;
    m.id = id;
    m.task = model_task(id, cfg.task);
    const bool quantum = id == ModelId::Qsvm || id == ModelId::Qnn;
    m.prep = Preprocessor::fit(quantum ? PipelineKind::Quantum : PipelineKind::Classical, raw);
    const auto X = m.prep.transform(raw);

    if (is_kernel_model(id)) {
        m.kernel = kernel_for(id, cfg);
        m.support_rows = X;
        const auto K = kernel_matrix(X, m.kernel);
        m.svm = train_multiclass(K.entries, labels, cfg.svm_config());
        m.parameter_count = svm_parameter_count(m.svm);
        return m;
    }

    for (int l : labels) {
        if (l != 0 && l != 1) {
            throw ValidationError(std::string(model_name(id)) + " needs binary labels");
        }
    }
    if (id == ModelId::Nn) {
        auto mlp = build_mlp(cfg.seeds.init, cfg.nn.dropout_rate);
        mlp.config = cfg.mlp_config();
        FeatureMatrix Xtr, Xval;
        std::vector<int> ytr, yval;
        try {
            const auto s = sample_and_split(labels, labels.size(), 1.0 - cfg.nn.validation_fraction,
                                            cfg.seeds.sampling);
            for (std::size_t i : s.train) {
                Xtr.push_back(X[i]);
                ytr.push_back(labels[i]);
            }
            for (std::size_t i : s.test) {
                Xval.push_back(X[i]);
                yval.push_back(labels[i]);
            }
        } catch (const StratificationError &) {
            Xtr = Xval = X;
            ytr.assign(labels.begin(), labels.end());
            yval = ytr;
        }
        auto res = train_mlp(Xtr, ytr, Xval, yval, mlp);
        m.mlp = res.model;
        m.mlp_history = res.history;
        m.parameter_count = m.mlp.param_count();
        return m;
    }

    QnnModel q;
    q.spec = cfg.qnn.ansatz;
    q.feature_map = cfg.qnn.feature_map;
    q.readout = cfg.qnn.readout;
    q.kappa = cfg.qnn.kappa;
    q.threshold = cfg.qnn.threshold;
    m.qnn = train_qnn(X, labels, q, cfg.qnn_train_config());
    m.parameter_count = m.qnn.spec.param_count();
    return m;
}

} // namespace qstress
