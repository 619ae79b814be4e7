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

#include "hsed/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hsed/errors.hpp"

namespace hsed {

void ChannelParams::validate() const
{
    if (num_tx == 0)
        throw ConfigError("num_tx (M) must be at least 1");
    if (num_rx == 0)
        throw ConfigError("num_rx (N) must be at least 1");
    if (num_paths == 0)
        throw ConfigError("num_paths (L) must be at least 1");
    if (num_paths > std::min(num_tx, num_rx))
        throw ConfigError("num_paths (L) must not exceed min(M, N)");
}

void NoiseParams::validate() const
{
    if (!(sigma_r_sq >= 0.0))
        throw ConfigError("sigma_r_sq must be non-negative");
    if (!(sigma_t_sq >= 0.0))
        throw ConfigError("sigma_t_sq must be non-negative");
}

ChannelRealization::ChannelRealization(CMatrix h, std::vector<PathParams> paths)
    : h_(std::move(h)), paths_(std::move(paths)), svd_(svd(h_))
{
    if (h_.empty())
        throw DimensionError("ChannelRealization: empty channel matrix");
}

CVector ula_response(double angle, std::size_t n)
{
    CVector a(n);
    const double phase = std::numbers::pi * std::sin(angle);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k)
        a[k] = std::polar(scale, phase * static_cast<double>(k));
    return a;
}

ChannelRealization gen_channel(const ChannelParams& params, SeededRng& rng)
{
    params.validate();
    const std::size_t m = params.num_tx, n = params.num_rx, l = params.num_paths;
    constexpr double half_pi = std::numbers::pi / 2.0;

    std::vector<PathParams> paths(l);
    for (auto& p : paths) {
        p.gain = rng.complex_normal(1.0);
        p.aoa = rng.uniform(-half_pi, half_pi);
        p.aod = rng.uniform(-half_pi, half_pi);
    }

    const double prefactor = std::sqrt(static_cast<double>(m * n) / static_cast<double>(l));
    CMatrix h(n, m);
    for (const auto& p : paths) {
        const CVector ar = ula_response(p.aoa, n);
        const CVector at = ula_response(p.aod, m);
        const cplx g = prefactor * p.gain;
        for (std::size_t i = 0; i < n; ++i) {
            const cplx gi = g * ar[i];
            for (std::size_t j = 0; j < m; ++j)
                h(i, j) += gi * std::conj(at[j]);
        }
    }
    return ChannelRealization(std::move(h), std::move(paths));
}

ChannelRealization gen_channel(const ChannelParams& params)
{
    SeededRng rng(params.seed);
    return gen_channel(params, rng);
}

CVector apply_awgn(const CVector& x, double variance, SeededRng& rng)
{
    if (!(variance >= 0.0))
        throw ConfigError("apply_awgn: variance must be non-negative");
    if (variance == 0.0)
        return x;
    CVector y = x;
    for (auto& z : y.entries())
        z += rng.complex_normal(variance);
    return y;
}

Subspaces ground_truth_subspaces(const ChannelRealization& ch, std::size_t d)
{
    const SvdResult& s = ch.ground_truth();
    const std::size_t rank = s.numerical_rank(1e-9);
    if (d == 0 || d > rank)
        throw InsufficientRankError("ground_truth_subspaces: d = " + std::to_string(d) +
                                    " exceeds channel rank " + std::to_string(rank));
    return Subspaces{s.right.col_block(0, d), s.left.col_block(0, d),
                     std::vector<double>(s.singular_values.begin(), s.singular_values.begin() + d)};
}

} // namespace hsed
