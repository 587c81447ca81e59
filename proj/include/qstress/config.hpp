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
 * Experiment configuration (JSON). Every key is optional; missing keys take
 * the defaults below. The effective configuration is echoed into every
 * output file.
 *
 *     {
 *       "dataset": {"csv": "scr.csv"}
 *               | {"generator": {"n": 1000, "seed": 7, "params": {...}}},
 *       "sample_n": 100, "train_fraction": 0.8, "task": "binary",
 *       "seeds": {"sampling": 0, "init": 0, "dropout": 0},
 *       "svm":  {"C": 0.5, "gamma": 2.0, "class_weighting": "balanced",
 *                "tolerance": 0.001},
 *       "qsvm": {"feature_map": {"kind": "zz", "n_qubits": 8, "alpha": 0.7,
 *                                "repetitions": 1, "pattern": "full"}},
 *       "qnn":  {"ansatz": {"n_qubits": 8}, "feature_map": {...},
 *                "learning_rate": 0.05, "max_epochs": 200,
 *                "readout": "affine", "kappa": 1.0, "threshold": 0.5},
 *       "nn":   {"learning_rate": 0.001, "l2_lambda": 0.0001, ...,
 *                "dropout_rate": 0.3, "validation_fraction": 0.2},
 *       "cv":   {"k": 5},
 *       "output": {"dir": "report", "formats": ["json", "csv", "svg"]}
 *     }
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "data.hpp"
#include "encodings.hpp"
#include "error.hpp"
#include "mlp.hpp"
#include "qnn.hpp"
#include "svm.hpp"

namespace qstress {

struct GeneratorSource {
    std::size_t n{1000};
    std::uint64_t seed{7};
    SynthParams params{};
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(GeneratorSource, n, seed, params)

struct Seeds {
    std::uint64_t sampling{0};
    std::uint64_t init{0};
    std::uint64_t dropout{0};
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(Seeds, sampling, init, dropout)

struct SvmSection {
    double C{0.5};
    double gamma{2.0};
    ClassWeighting class_weighting{ClassWeighting::Balanced};
    double tolerance{1e-3};
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(SvmSection, C, gamma, class_weighting, tolerance)

struct QsvmSection {
    FeatureMapSpec feature_map{};
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(QsvmSection, feature_map)

struct QnnSection {
    TtnAnsatzSpec ansatz{};
    FeatureMapSpec feature_map{};
    double learning_rate{0.05};
    std::size_t max_epochs{200};
    QnnReadout readout{QnnReadout::Affine};
    double kappa{1.0};
    double threshold{0.5};
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(QnnSection, ansatz, feature_map, learning_rate,
                                                max_epochs, readout, kappa, threshold)

struct NnSection {
    MlpTrainConfig train{};
    double dropout_rate{0.3};
    double validation_fraction{0.2};
};

inline void to_json(nlohmann::json &j, const NnSection &s) {
    j = s.train;
    j["dropout_rate"] = s.dropout_rate;
    j["validation_fraction"] = s.validation_fraction;
    j.erase("seed");
}

inline void from_json(const nlohmann::json &j, NnSection &s) {
    s.train = j.get<MlpTrainConfig>();
    s.dropout_rate = j.value("dropout_rate", 0.3);
    s.validation_fraction = j.value("validation_fraction", 0.2);
}

struct OutputSection {
    std::string dir{"report"};
    std::vector<std::string> formats{"json", "csv", "svg"};
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE_WITH_DEFAULT(OutputSection, dir, formats)

struct ExperimentConfig {
    std::optional<std::string> csv_path{};
    GeneratorSource generator{};
    std::size_t sample_n{100};
    double train_fraction{0.8};
    Task task{Task::Binary};
    Seeds seeds{};
    SvmSection svm{};
    QsvmSection qsvm{};
    QnnSection qnn{};
    NnSection nn{};
    std::size_t cv_k{5};
    OutputSection output{};

    /// Throws ValidationError on inconsistent values or a missing input file.
    void validate() const {
        if (csv_path && !std::filesystem::exists(*csv_path)) {
            throw ValidationError("dataset file '" + *csv_path + "' does not exist");
        }
        if (!csv_path) {
            generator.params.validate();
            if (generator.n == 0) {
                throw ValidationError("generator n must be positive");
            }
        }
        if (sample_n == 0) {
            throw ValidationError("sample_n must be positive");
        }
        if (!(train_fraction > 0 && train_fraction < 1)) {
            throw ValidationError("train_fraction must lie in (0, 1)");
        }
        if (!(svm.C > 0) || !(svm.gamma > 0) || !(svm.tolerance > 0)) {
            throw ValidationError("svm C, gamma and tolerance must be positive");
        }
        if (qsvm.feature_map.kind == EncodingKind::ZZ) {
            qsvm.feature_map.validate(4);
        }
        if (qnn.feature_map.kind != EncodingKind::ZZ) {
            throw ValidationError("qnn feature_map must be zz");
        }
        qnn.feature_map.validate(4);
        qnn.ansatz.validate();
        if (qnn.ansatz.n_qubits != qnn.feature_map.n_qubits) {
            throw ValidationError("qnn ansatz and feature map qubit counts differ");
        }
        if (!(qnn.learning_rate > 0) || qnn.max_epochs == 0) {
            throw ValidationError("qnn learning_rate and max_epochs must be positive");
        }
        if (!(qnn.threshold > 0 && qnn.threshold < 1)) {
            throw ValidationError("qnn threshold must lie in (0, 1)");
        }
        nn.train.validate();
        if (!(nn.dropout_rate >= 0 && nn.dropout_rate < 1)) {
            throw ValidationError("nn dropout_rate must lie in [0, 1)");
        }
        if (!(nn.validation_fraction > 0 && nn.validation_fraction < 1)) {
            throw ValidationError("nn validation_fraction must lie in (0, 1)");
        }
        if (cv_k < 2) {
            throw ValidationError("cv k must be at least 2");
        }
        for (const auto &f : output.formats) {
            if (f != "json" && f != "csv" && f != "svg") {
                throw ValidationError("unknown output format '" + f + "' (json|csv|svg)");
            }
        }
    }

    [[nodiscard]] SvmConfig svm_config() const {
        return {svm.C, svm.class_weighting, svm.tolerance, 0, seeds.init};
    }

    [[nodiscard]] MlpTrainConfig mlp_config() const {
        auto c = nn.train;
        c.seed = seeds.dropout;
        return c;
    }

    [[nodiscard]] QnnTrainConfig qnn_train_config() const {
        QnnTrainConfig c;
        c.learning_rate = qnn.learning_rate;
        c.max_epochs = qnn.max_epochs;
        c.seed = seeds.init;
        return c;
    }
};

inline void to_json(nlohmann::json &j, const ExperimentConfig &c) {
    nlohmann::json ds;
    if (c.csv_path) {
        ds["csv"] = *c.csv_path;
    } else {
        ds["generator"] = c.generator;
    }
    j = nlohmann::json{{"dataset", ds},
                       {"sample_n", c.sample_n},
                       {"train_fraction", c.train_fraction},
                       {"task", c.task},
                       {"seeds", c.seeds},
                       {"svm", c.svm},
                       {"qsvm", c.qsvm},
                       {"qnn", c.qnn},
                       {"nn", c.nn},
                       {"cv", {{"k", c.cv_k}}},
                       {"output", c.output}};
}

inline void from_json(const nlohmann::json &j, ExperimentConfig &c) {
    static const char *kKnown[] = {"dataset", "sample_n", "train_fraction", "task", "seeds", "svm",
                                   "qsvm",    "qnn",      "nn",             "cv",   "output"};
    for (const auto &[key, _] : j.items()) {
        bool ok = false;
        for (const char *k : kKnown) {
            ok = ok || key == k;
        }
        if (!ok) {
            throw ValidationError("unknown config key '" + key + "'");
        }
    }
    c = ExperimentConfig{};
    if (j.contains("dataset")) {
        const auto &ds = j.at("dataset");
        if (ds.contains("csv")) {
            c.csv_path = ds.at("csv").get<std::string>();
        } else if (ds.contains("generator")) {
            c.generator = ds.at("generator").get<GeneratorSource>();
        } else {
            throw ValidationError("dataset needs a 'csv' or 'generator' entry");
        }
    }
    c.sample_n = j.value("sample_n", c.sample_n);
    c.train_fraction = j.value("train_fraction", c.train_fraction);
    c.task = j.value("task", c.task);
    c.seeds = j.value("seeds", c.seeds);
    c.svm = j.value("svm", c.svm);
    c.qsvm = j.value("qsvm", c.qsvm);
    c.qnn = j.value("qnn", c.qnn);
    c.nn = j.value("nn", c.nn);
    if (j.contains("cv")) {
        c.cv_k = j.at("cv").value("k", c.cv_k);
    }
    c.output = j.value("output", c.output);
}

/// Parses a config file; JSON or type errors become ValidationError.
inline ExperimentConfig load_config(const std::string &path) {
    std::ifstream f(path);
    if (!f) {
        throw ValidationError("cannot open config '" + path + "'");
    }
    try {
        return nlohmann::json::parse(f).get<ExperimentConfig>();
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError("config '" + path + "': " + e.what());
    }
}

/// Loads or generates the configured dataset.
inline Dataset load_dataset(const ExperimentConfig &c) {
    if (c.csv_path) {
        return load_csv(*c.csv_path);
    }
    return synth_generate(c.generator.n, c.generator.seed, c.generator.params);
}

} // namespace qstress
