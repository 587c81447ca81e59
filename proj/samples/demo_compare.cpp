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
// Runs the five-model comparison on a small synthetic dataset and prints
// one line per model.
#include <cstdio>

#include "qstress/qstress.hpp"

int main() {
    qstress::ExperimentConfig cfg;
    cfg.generator.n = 300;
    cfg.sample_n = 60;
    cfg.qnn.max_epochs = 20;
    const auto report = qstress::compare_models(cfg);
    std::printf("dataset %s  train %zu  test %zu\n", report.dataset_fingerprint.c_str(),
                report.dataset.train_size, report.dataset.test_size);
    for (const auto &m : report.models) {
        const char *name = qstress::model_name(m.model);
        if (m.failed) {
            std::printf("%-11s failed: %s\n", name, m.error.c_str());
            continue;
        }
        std::printf("%-11s train %6.2f  test %6.2f  gap %6.2f  params %zu\n", name,
                    m.train_accuracy, m.test_accuracy, m.generalization_gap, m.parameter_count);
    }
    return 0;
}
