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
 * Five-model comparison harness.
 *
 * All models see the same sampled events and the same train/test index
 * sets. Accuracies are percentages rounded to two decimals and the gap is
 * their plain difference. A model that throws is recorded as failed and
 * the remaining models still run.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"
#include "data.hpp"
#include "error.hpp"
#include "metrics.hpp"
#include "models.hpp"

namespace qstress {

struct ModelRecord {
    ModelId model{ModelId::LinearSvm};
    bool failed{false};
    std::string error{};
    Task task{Task::Binary};
    double train_accuracy{0.0};
    double test_accuracy{0.0};
    double generalization_gap{0.0};
    std::size_t parameter_count{0};
    ClassificationMetrics test_metrics{};
    std::uint64_t seed{0};
    nlohmann::json config = nlohmann::json::object();
};

inline void to_json(nlohmann::json &j, const ModelRecord &r) {
    j = nlohmann::json{{"model", r.model},
                       {"status", r.failed ? "failed" : "ok"},
                       {"task", r.task},
                       {"seed", r.seed},
                       {"config", r.config}};
    if (r.failed) {
        j["error"] = r.error;
        return;
    }
    j["train_accuracy"] = r.train_accuracy;
    j["test_accuracy"] = r.test_accuracy;
    j["generalization_gap"] = r.generalization_gap;
    j["parameter_count"] = r.parameter_count;
    j["test_metrics"] = r.test_metrics;
}

inline void from_json(const nlohmann::json &j, ModelRecord &r) {
    j.at("model").get_to(r.model);
    r.failed = j.at("status").get<std::string>() == "failed";
    j.at("task").get_to(r.task);
    r.seed = j.value("seed", std::uint64_t{0});
    r.config = j.value("config", nlohmann::json::object());
    if (r.failed) {
        r.error = j.value("error", std::string{});
        return;
    }
    j.at("train_accuracy").get_to(r.train_accuracy);
    j.at("test_accuracy").get_to(r.test_accuracy);
    j.at("generalization_gap").get_to(r.generalization_gap);
    j.at("parameter_count").get_to(r.parameter_count);
    j.at("test_metrics").get_to(r.test_metrics);
}

struct DatasetInfo {
    std::string source;
    std::size_t n_events{0};
    std::size_t sample_n{0};
    std::size_t train_size{0};
    std::size_t test_size{0};
    Task task{Task::Binary};
    std::uint64_t split_seed{0};
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(DatasetInfo, source, n_events, sample_n, train_size, test_size,
                                   task, split_seed)

struct EvalReport {
    int schema_version{1};
    std::string dataset_fingerprint;
    DatasetInfo dataset;
    nlohmann::json config = nlohmann::json::object();
    std::vector<std::string> notes;
    std::vector<ModelRecord> models;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(EvalReport, schema_version, dataset_fingerprint, dataset,
                                   config, notes, models)

/// Hyperparameters of one model as echoed into its record.
inline nlohmann::json model_config_echo(ModelId id, const ExperimentConfig &cfg) {
    switch (id) {
    case ModelId::LinearSvm:
        return {{"C", cfg.svm.C},
                {"class_weighting", cfg.svm.class_weighting},
                {"tolerance", cfg.svm.tolerance}};
    case ModelId::RbfSvm:
        return {{"C", cfg.svm.C},
                {"gamma", cfg.svm.gamma},
                {"class_weighting", cfg.svm.class_weighting},
                {"tolerance", cfg.svm.tolerance}};
    case ModelId::Qsvm:
        return {{"C", cfg.svm.C},
                {"class_weighting", cfg.svm.class_weighting},
                {"tolerance", cfg.svm.tolerance},
                {"feature_map", cfg.qsvm.feature_map}};
    case ModelId::Nn:
        return cfg.nn;
    case ModelId::Qnn:
        return cfg.qnn;
    }
    return nlohmann::json::object();
}

/// Rows and labels selected by an index set.
struct Subset {
    FeatureMatrix X;
    std::vector<int> y;
};

inline Subset select(const FeatureMatrix &X, std::span<const int> y,
                     std::span<const std::size_t> idx) {
    Subset s;
    for (std::size_t i : idx) {
        s.X.push_back(X[i]);
        s.y.push_back(y[i]);
    }
    return s;
}

inline ModelRecord evaluate_model(ModelId id, const Dataset &data, const Split &split,
                                  const ExperimentConfig &cfg) {
    ModelRecord r;
    r.model = id;
    r.task = model_task(id, cfg.task);
    r.seed = id == ModelId::Nn ? cfg.seeds.dropout : cfg.seeds.init;
    r.config = model_config_echo(id, cfg);
    try {
        const auto X = data.features();
        const auto y = data.labels(r.task);
        const auto train = select(X, y, split.train);
        const auto test = select(X, y, split.test);
        const auto fitted = fit_model(id, train.X, train.y, cfg);
        const auto train_pred = fitted.predict(train.X);
        const auto test_pred = fitted.predict(test.X);
        r.train_accuracy = to_percent(classification_metrics(train_pred, train.y).accuracy);
        r.test_metrics = classification_metrics(test_pred, test.y);
        r.test_accuracy = to_percent(r.test_metrics.accuracy);
        r.generalization_gap = generalization_gap(r.train_accuracy, r.test_accuracy);
        r.parameter_count = fitted.parameter_count;
    } catch (const std::exception &e) {
        r.failed = true;
        r.error = e.what();
    }
    return r;
}

/// Splits the dataset per the config; stratified on the configured task.
inline Split split_for(const Dataset &data, const ExperimentConfig &cfg) {
    const auto y = data.labels(cfg.task);
    return sample_and_split(y, cfg.sample_n, cfg.train_fraction, cfg.seeds.sampling);
}

inline EvalReport compare_models(const ExperimentConfig &cfg, const Dataset &data) {
    cfg.validate();
    const auto split = split_for(data, cfg);

    EvalReport rep;
    rep.dataset_fingerprint = fingerprint(write_csv(data));
    rep.dataset.source = cfg.csv_path ? *cfg.csv_path : std::string("generator");
    rep.dataset.n_events = data.size();
    rep.dataset.sample_n = cfg.sample_n;
    rep.dataset.train_size = split.train.size();
    rep.dataset.test_size = split.test.size();
    rep.dataset.task = cfg.task;
    rep.dataset.split_seed = split.seed;
    rep.config = cfg;
    rep.notes = {
        "accuracies are percentages rounded to two decimals; gap = train - test",
        "nn and qnn always solve the binary low/high task",
        "precision/recall/F1 are reported per class with macro and weighted averages",
        "svm parameter_count = non-zero dual coefficients + one bias per binary model"};
    for (ModelId id : kAllModels) {
        rep.models.push_back(evaluate_model(id, data, split, cfg));
    }
    return rep;
}

inline EvalReport compare_models(const ExperimentConfig &cfg) {
    cfg.validate();
    return compare_models(cfg, load_dataset(cfg));
}

/// k-fold cross-validation of one model over the configured sample.
inline CvResult cross_validate_model(ModelId id, const Dataset &data, const ExperimentConfig &cfg) {
    cfg.validate();
    const auto split = split_for(data, cfg);
    std::vector<std::size_t> idx = split.train;
    idx.insert(idx.end(), split.test.begin(), split.test.end());
    std::sort(idx.begin(), idx.end());
    const auto task = model_task(id, cfg.task);
    const auto s = select(data.features(), data.labels(task), idx);
    return cross_validate(s.X, s.y, cfg.cv_k, cfg.seeds.sampling,
                          [&](const FeatureMatrix &Xtr, std::span<const int> ytr,
                              const FeatureMatrix &Xev) {
                              return fit_model(id, Xtr, ytr, cfg).predict(Xev);
                          });
}

} // namespace qstress
