// SPDX-License-Identifier: Apache-2.0
//
// hsed: subspace estimation and decomposition for hybrid mmWave MIMO
// Copyright (C) 2026 The hsed authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <stdexcept>
#include <string>

namespace hsed {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Operand shapes are incompatible (or a precondition on a shape fails).
class DimensionError : public Error {
public:
    using Error::Error;
};

// Configuration or parameter invariant violated (exit code 2 in the CLI).
class ConfigError : public Error {
public:
    using Error::Error;
};

// An iterative method did not converge or a system was singular
// (exit code 3 in the CLI).
class NumericalFailure : public Error {
public:
    using Error::Error;
};

// qr_thin met a pivot below the rank threshold.
class RankDeficientError : public NumericalFailure {
public:
    using NumericalFailure::NumericalFailure;
};

// Fewer usable dimensions than requested (e.g. Arnoldi broke down before d steps).
class InsufficientRankError : public NumericalFailure {
public:
    using NumericalFailure::NumericalFailure;
};

} // namespace hsed
