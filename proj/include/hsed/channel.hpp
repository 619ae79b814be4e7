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
#include <vector>

#include "hsed/linalg.hpp"
#include "hsed/matrix.hpp"
#include "hsed/random.hpp"

namespace hsed {

/// Sparse geometric channel dimensions. M = num_tx (BS), N = num_rx (MS).
struct ChannelParams {
    std::size_t num_tx = 0;
    std::size_t num_rx = 0;
    std::size_t num_paths = 0;
    std::uint64_t seed = 0;

    /// Throws ConfigError unless M, N, L >= 1 and L <= min(M, N).
    void validate() const;
};

struct PathParams {
    cplx gain;  ///< beta_i ~ CN(0, 1)
    double aoa; ///< radians, MS side
    double aod; ///< radians, BS side
};

/// Receiver (downlink) and transmitter (uplink) noise variances.
struct NoiseParams {
    double sigma_r_sq = 0.0;
    double sigma_t_sq = 0.0;

    void validate() const;
    bool noiseless() const noexcept { return sigma_r_sq == 0.0 && sigma_t_sq == 0.0; }
};

/// Immutable N x M channel with its cached SVD.
class ChannelRealization {
public:
    explicit ChannelRealization(CMatrix h, std::vector<PathParams> paths = {});

    const CMatrix& h() const noexcept { return h_; }
    std::size_t num_tx() const noexcept { return h_.cols(); }
    std::size_t num_rx() const noexcept { return h_.rows(); }
    const std::vector<PathParams>& paths() const noexcept { return paths_; }
    const SvdResult& ground_truth() const noexcept { return svd_; }

private:
    CMatrix h_;
    std::vector<PathParams> paths_;
    SvdResult svd_;
};

/// Half-wavelength ULA response, entry k = exp(jπ k sin(angle)) / √n.
CVector ula_response(double angle, std::size_t n);

/// H = √(MN/L) Σ_i β_i a_r(aoa_i) a_t(aod_i)†. Per path the draws are taken in
/// the order (β, aoa, aod), so the path parameters depend only on the stream,
/// not on M or N.
ChannelRealization gen_channel(const ChannelParams& params, SeededRng& rng);
/// Same, seeded from params.seed.
ChannelRealization gen_channel(const ChannelParams& params);

/// x + w with w ~ CN(0, variance I). variance == 0 returns x untouched.
CVector apply_awgn(const CVector& x, double variance, SeededRng& rng);

struct Subspaces {
    CMatrix gamma1;             ///< M x d dominant right singular vectors
    CMatrix phi1;               ///< N x d dominant left singular vectors
    std::vector<double> sigma1; ///< top d singular values
};

/// Top-d singular triplets of the channel. Throws InsufficientRankError if d
/// exceeds the numerical rank.
Subspaces ground_truth_subspaces(const ChannelRealization& ch, std::size_t d);

} // namespace hsed
