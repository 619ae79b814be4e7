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

#include "hsed/random.hpp"

#include <cmath>

#include "hsed/errors.hpp"

namespace hsed {

cplx SeededRng::complex_normal(double variance)
{
    const double s = std::sqrt(variance / 2.0);
    const double re = normal_(engine_);
    const double im = normal_(engine_);
    return {s * re, s * im};
}

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream)
{
    return splitmix64(splitmix64(master) ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

CMatrix complex_gaussian(SeededRng& rng, std::size_t rows, std::size_t cols, double variance)
{
    if (!(variance >= 0.0))
        throw ConfigError("complex_gaussian: variance must be non-negative");
    CMatrix m(rows, cols);
    if (variance == 0.0)
        return m;
    for (auto& z : m.entries())
        z = rng.complex_normal(variance);
    return m;
}

CVector complex_gaussian_vector(SeededRng& rng, std::size_t dim, double variance)
{
    if (!(variance >= 0.0))
        throw ConfigError("complex_gaussian_vector: variance must be non-negative");
    CVector v(dim);
    if (variance == 0.0)
        return v;
    for (auto& z : v.entries())
        z = rng.complex_normal(variance);
    return v;
}

} // namespace hsed
