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

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"

namespace qstress {

/// Samples as rows.
using FeatureMatrix = std::vector<std::vector<double>>;

/// Dense row-major real matrix.
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }

    double &operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    [[nodiscard]] std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }

    friend bool operator==(const Matrix &, const Matrix &) = default;

  private:
    std::size_t rows_{0};
    std::size_t cols_{0};
    std::vector<double> data_;
};

/// Throws ShapeError if X is empty or ragged; returns the column count.
inline std::size_t check_rectangular(const FeatureMatrix &X, const char *what) {
    if (X.empty()) {
        throw ShapeError(std::string(what) + ": no samples");
    }
    const std::size_t d = X.front().size();
    for (std::size_t i = 1; i < X.size(); ++i) {
        if (X[i].size() != d) {
            throw ShapeError(std::string(what) + ": row " + std::to_string(i) + " has " +
                             std::to_string(X[i].size()) + " columns, expected " +
                             std::to_string(d));
        }
    }
    return d;
}

} // namespace qstress
