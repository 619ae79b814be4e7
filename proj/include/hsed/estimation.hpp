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

#include <functional>

#include "hsed/channel.hpp"
#include "hsed/matrix.hpp"
#include "hsed/random.hpp"

namespace hsed {

enum class EchoVariant { Digital, HybridNaive, HybridRaid };

struct EchoMode {
    EchoVariant variant = EchoVariant::Digital;
    NoiseParams noise;
    std::size_t rf_chains = 1; ///< r
    std::size_t streams = 1;   ///< d

    /// Checks 1 <= d <= r <= min(M, N), and r | M, r | N for HybridRaid.
    /// Throws ConfigError naming the violated field.
    void validate(std::size_t num_tx, std::size_t num_rx) const;
};

/// Which side initiates the echo. Forward: the BS probes and observes H†H q.
/// Reverse: the MS probes and observes H H† q.
enum class LinkDirection { Forward, Reverse };

/// p = H†(H q + w_r) + w_t (forward), or p = H(H† q + w_t) + w_r (reverse).
/// Costs two channel uses. Throws DimensionError on a shape mismatch or if ‖q‖ > 1.
CVector digital_echo(const ChannelRealization& ch, const CVector& q, const NoiseParams& noise, SeededRng& rng,
                     LinkDirection dir = LinkDirection::Forward);

/// Single-shot hybrid echo with fixed analog filters (first r-column DFT block
/// on both sides): p = F†H†W W†H f̃ g̃, an r-dimensional, distorted image of
/// H†H q. Only meaningful as a diagnostic. Requires mode.variant == HybridNaive.
CVector naive_hybrid_echo(const ChannelRealization& ch, const CVector& q, const EchoMode& mode, SeededRng& rng);

struct RaidEchoResult {
    CVector p;                    ///< estimate at the initiating side
    std::size_t channel_uses = 0; ///< first_leg + second_leg
    std::size_t first_leg = 0;    ///< soundings towards the far side (K_r forward)
    std::size_t second_leg = 0;   ///< soundings back (K_t forward)
    CVector tx_error;             ///< decomposition error of the probe, e^(t)
    CVector rx_error;             ///< decomposition error of the aggregated far-side sample, e^(r)
};

/// Repetition-aided echo. The probe is sent as d·f̃ g̃ once per r-column block
/// of the far-side DFT matrix; the far side aggregates Σ_k W_k s_k, decomposes
/// the result and echoes it back the same way. Noiseless, the output is
///   p = d² A†A q − d² A†A e^(t) − d A† e^(r)
/// with A = H (forward) or H† (reverse). Optional CN(0, σ²) noise is added to
/// every r-dimensional digital sample. Requires mode.variant == HybridRaid.
RaidEchoResult raid_echo(const ChannelRealization& ch, const CVector& q, const EchoMode& mode, SeededRng& rng,
                         LinkDirection dir = LinkDirection::Forward);

using EchoFn = std::function<CVector(const CVector&)>;

struct KrylovState {
    CMatrix q_basis;          ///< dim x (steps + 1) or dim x steps after breakdown
    CMatrix t_coeffs;         ///< steps x steps upper Hessenberg
    std::size_t steps_done = 0;
    bool broke_down = false;
    double last_residual = 0.0; ///< t_{l+1,l} of the final step
};

enum class Reorthogonalization { Auto, Never, Always };

struct SeArnOptions {
    /// Breakdown when t_{l+1,l} < tol · ‖p_l‖.
    double breakdown_tol = 1e-10;
    /// Auto runs a second Gram-Schmidt pass only when `noisy` is set.
    Reorthogonalization reorth = Reorthogonalization::Auto;
    bool noisy = false;
};

struct SeArnResult {
    CMatrix gamma; ///< dim x d, orthonormal columns
    KrylovState state;
};

/// Arnoldi-based subspace estimation driven by an echo operator. Starts from a
/// random unit vector, runs up to m Gram-Schmidt steps, and returns the QR-
/// orthonormalized lift of the d largest-modulus Ritz vectors. Stops early on
/// breakdown; throws InsufficientRankError if fewer than d steps survive.
SeArnResult se_arn(const EchoFn& echo, std::size_t dim, std::size_t d, std::size_t m, SeededRng& rng,
                   const SeArnOptions& options = {});

/// (1/√2)‖a a† − b b†‖_F for orthonormal a, b. Throws DimensionError when the
/// shapes differ or a Gram deviation exceeds 1e-6.
double chordal_distance(const CMatrix& a, const CMatrix& b);

} // namespace hsed
