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
/// Umbrella header for the qstress library.
#pragma once

#include "bench.hpp"
#include "config.hpp"
#include "data.hpp"
#include "encodings.hpp"
#include "error.hpp"
#include "matrix.hpp"
#include "metrics.hpp"
#include "mlp.hpp"
#include "models.hpp"
#include "parallel.hpp"
#include "qkernel.hpp"
#include "qnn.hpp"
#include "report.hpp"
#include "simulator.hpp"
#include "svm.hpp"
