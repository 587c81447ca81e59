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
 * Exception hierarchy shared by every qstress module.
 *
 * All errors derive from qstress::Error. The CLI maps ValidationError and
 * its subclasses to exit code 1 and everything else to exit code 2.
 */
#pragma once

#include <stdexcept>
#include <string>

namespace qstress {

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Input rejected before any computation started (bad values, bad config).
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// Register size outside the supported range.
class CapacityError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

/// Qubit or element index out of range.
class IndexError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

/// Mismatched or otherwise unusable dimensions.
class ShapeError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

/// Vector cannot be normalised (zero norm).
class NormalizationError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

/// Training problem has no solution worth computing (e.g. one class only).
class DegenerateProblemError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

/// SCR amplitude below the 0.1 uS detection floor.
class BelowDetectionError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

/// A class has too few members for a stratified split.
class StratificationError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

/// CSV header lacks a required column.
class SchemaError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

/// Cell could not be parsed as a number.
class ParseError : public ValidationError {
  public:
    using ValidationError::ValidationError;
};

/// Filesystem failure.
class IoError : public Error {
  public:
    using Error::Error;
};

} // namespace qstress
