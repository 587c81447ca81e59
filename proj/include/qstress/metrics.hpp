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
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "data.hpp"
#include "error.hpp"
#include "matrix.hpp"

namespace qstress {

struct ClassMetrics {
    int label{0};
    double precision{0.0};
    double recall{0.0};
    double f1{0.0};
    std::size_t support{0};
    /// Set when TP+FP == 0 and precision was defined as 0.
    bool precision_undefined{false};
    /// Set when TP+FN == 0 and recall was defined as 0.
    bool recall_undefined{false};
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ClassMetrics, label, precision, recall, f1, support,
                                   precision_undefined, recall_undefined)

struct AveragedMetrics {
    double precision{0.0};
    double recall{0.0};
    double f1{0.0};
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(AveragedMetrics, precision, recall, f1)

struct ClassificationMetrics {
    /// fraction in [0, 1]
    double accuracy{0.0};
    std::vector<ClassMetrics> per_class;
    /// unweighted mean over classes
    AveragedMetrics macro;
    /// support-weighted mean over classes
    AveragedMetrics weighted;
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(ClassificationMetrics, accuracy, per_class, macro, weighted)

inline double f1_score(double precision, double recall) {
    return precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
}

/// Metrics over the union of labels seen in either vector.
inline ClassificationMetrics classification_metrics(std::span<const int> predicted,
                                                    std::span<const int> actual) {
    if (predicted.size() != actual.size()) {
        throw ShapeError("classification_metrics: " + std::to_string(predicted.size()) +
                         " predictions for " + std::to_string(actual.size()) + " labels");
    }
    if (actual.empty()) {
        throw ShapeError("classification_metrics: no samples");
    }
    std::set<int> classes(actual.begin(), actual.end());
    classes.insert(predicted.begin(), predicted.end());

    ClassificationMetrics m;
    std::size_t correct = 0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        correct += predicted[i] == actual[i] ? 1 : 0;
    }
    m.accuracy = static_cast<double>(correct) / static_cast<double>(actual.size());

    for (int c : classes) {
        std::size_t tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < actual.size(); ++i) {
            const bool p = predicted[i] == c;
            const bool a = actual[i] == c;
            tp += p && a ? 1 : 0;
            fp += p && !a ? 1 : 0;
            fn += !p && a ? 1 : 0;
        }
        ClassMetrics cm;
        cm.label = c;
        cm.support = tp + fn;
        cm.precision_undefined = tp + fp == 0;
        cm.recall_undefined = tp + fn == 0;
        cm.precision = cm.precision_undefined ? 0.0 : static_cast<double>(tp) / (tp + fp);
        cm.recall = cm.recall_undefined ? 0.0 : static_cast<double>(tp) / (tp + fn);
        cm.f1 = f1_score(cm.precision, cm.recall);
        m.per_class.push_back(cm);
    }
    const double k = static_cast<double>(m.per_class.size());
    const double n = static_cast<double>(actual.size());
    for (const auto &cm : m.per_class) {
        m.macro.precision += cm.precision / k;
        m.macro.recall += cm.recall / k;
        m.macro.f1 += cm.f1 / k;
        const double w = static_cast<double>(cm.support) / n;
        m.weighted.precision += cm.precision * w;
        m.weighted.recall += cm.recall * w;
        m.weighted.f1 += cm.f1 * w;
    }
    return m;
}

/// train - test, in percentage points; both inputs in [0, 100].
inline double generalization_gap(double train_acc_pct, double test_acc_pct) {
    auto ok = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 100.0; };
    if (!ok(train_acc_pct) || !ok(test_acc_pct)) {
        throw ValidationError("accuracies must be percentages in [0, 100]");
    }
    return train_acc_pct - test_acc_pct;
}

/// Fraction -> percentage rounded to two decimals.
inline double to_percent(double fraction) { return std::round(fraction * 10000.0) / 100.0; }

struct CvResult {
    std::vector<std::size_t> fold_of;
    std::vector<double> fold_accuracy;
    double mean{0.0};
    /// population standard deviation
    double stddev{0.0};
};

NLOHMANN_DEFINE_TYPE_NON_INTRUSIVE(CvResult, fold_of, fold_accuracy, mean, stddev)

/**
 * Stratified k-fold cross-validation.
 *
 * fit_predict(X_train, y_train, X_eval) -> predicted labels for X_eval. It is
 * called once per fold with the raw (unpreprocessed) rows, so any scaling must
 * be fitted inside it.
 */
template <typename FitPredict>
CvResult cross_validate(const FeatureMatrix &X, std::span<const int> y, std::size_t k,
                        std::uint64_t seed, FitPredict &&fit_predict) {
    if (X.size() != y.size()) {
        throw ShapeError("cross_validate: label count differs from sample count");
    }
    CvResult r;
    r.fold_of = stratified_folds(y, k, seed);
    for (std::size_t f = 0; f < k; ++f) {
        FeatureMatrix Xtr, Xev;
        std::vector<int> ytr, yev;
        for (std::size_t i = 0; i < X.size(); ++i) {
            if (r.fold_of[i] == f) {
                Xev.push_back(X[i]);
                yev.push_back(y[i]);
            } else {
                Xtr.push_back(X[i]);
                ytr.push_back(y[i]);
            }
        }
        const std::vector<int> pred = fit_predict(Xtr, std::span<const int>(ytr), Xev);
        r.fold_accuracy.push_back(classification_metrics(pred, yev).accuracy);
    }
    for (double a : r.fold_accuracy) {
        r.mean += a / static_cast<double>(k);
    }
    for (double a : r.fold_accuracy) {
        r.stddev += (a - r.mean) * (a - r.mean) / static_cast<double>(k);
    }
    r.stddev = std::sqrt(r.stddev);
    return r;
}

} // namespace qstress
