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
// Seeded datasets shared by the unit and acceptance tests.
#pragma once

#include <numbers>
#include <random>
#include <vector>

#include "qstress/matrix.hpp"

namespace fixture {

struct LabelledSet {
    qstress::FeatureMatrix X;
    std::vector<int> y;
};

/**
 * Linearly separable binary set with four features in [0, pi/2].
 * Label 1 draws every feature from [0.7, 1] * pi/2, label 0 from
 * [0, 0.3] * pi/2; labels alternate 0, 1, 0, ...
 */
inline LabelledSet separable_set(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    constexpr double kHalfPi = std::numbers::pi / 2;
    LabelledSet s;
    for (std::size_t i = 0; i < n; ++i) {
        const int label = static_cast<int>(i % 2);
        std::vector<double> row(4);
        for (auto &v : row) {
            v = kHalfPi * (label == 1 ? 0.7 + 0.3 * u(rng) : 0.3 * u(rng));
        }
        s.X.push_back(row);
        s.y.push_back(label);
    }
    return s;
}

} // namespace fixture
