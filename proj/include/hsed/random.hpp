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

#include <cstdint>
#include <random>

#include "hsed/matrix.hpp"

namespace hsed {

/// Caller-owned pseudo-random stream. Never shared between threads; split
/// independent streams with derive_seed().
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double standard_normal() { return normal_(engine_); }
    /// Circularly-symmetric CN(0, variance): real and imaginary parts N(0, variance/2).
    cplx complex_normal(double variance);
    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

/// Seed of sub-stream `stream` of `master` (splitmix64 finalizer over both words).
/// Sub-streams are independent of how many siblings exist.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// i.i.d. CN(0, variance) entries. Throws ConfigError for negative variance.
CMatrix complex_gaussian(SeededRng& rng, std::size_t rows, std::size_t cols, double variance);
CVector complex_gaussian_vector(SeededRng& rng, std::size_t dim, double variance);

} // namespace hsed
