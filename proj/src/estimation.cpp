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

#include "hsed/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hsed/decomposition.hpp"
#include "hsed/errors.hpp"
#include "hsed/linalg.hpp"

namespace hsed {

void EchoMode::validate(std::size_t num_tx, std::size_t num_rx) const
{
    noise.validate();
    if (streams == 0)
        throw ConfigError("streams (d) must be at least 1");
    if (rf_chains < streams)
        throw ConfigError("rf_chains (r) must be at least streams (d)");
    if (rf_chains > std::min(num_tx, num_rx))
        throw ConfigError("rf_chains (r) must not exceed min(M, N)");
    if (variant == EchoVariant::HybridRaid) {
        if (num_tx % rf_chains != 0)
            throw ConfigError("rf_chains (r) must divide M for RAID echoing");
        if (num_rx % rf_chains != 0)
            throw ConfigError("rf_chains (r) must divide N for RAID echoing");
    }
}

namespace {

// The link seen from the initiating side: `a` maps probe space to far space.
struct Link {
    CMatrix a;
    double near_noise; // variance at the initiating side
    double far_noise;  // variance at the far side
};

Link make_link(const ChannelRealization& ch, const NoiseParams& noise, LinkDirection dir)
{
    if (dir == LinkDirection::Forward)
        return {ch.h(), noise.sigma_t_sq, noise.sigma_r_sq};
    return {hermitian(ch.h()), noise.sigma_r_sq, noise.sigma_t_sq};
}

// Σ_k B_k (B_k† x + n_k) over consecutive r-column blocks of the unitary DFT.
CVector dft_block_sound(const CVector& x, std::size_t r, double noise_var, SeededRng& rng, std::size_t& uses)
{
    const std::size_t n = x.dim();
    const CMatrix dft = dft_matrix(n);
    CVector acc(n);
    for (std::size_t k = 0; k < n / r; ++k) {
        const CMatrix block = dft.col_block(k * r, r);
        CVector sample = apply_awgn(matvec_adjoint(block, x), noise_var, rng);
        acc += matvec(block, sample);
        ++uses;
    }
    return acc;
}

} // namespace

CVector digital_echo(const ChannelRealization& ch, const CVector& q, const NoiseParams& noise, SeededRng& rng,
                     LinkDirection dir)
{
    const Link link = make_link(ch, noise, dir);
    if (q.dim() != link.a.cols())
        throw DimensionError("digital_echo: probe has dimension " + std::to_string(q.dim()) + ", expected " +
                             std::to_string(link.a.cols()));
    if (q.norm() > 1.0 + 1e-9)
        throw DimensionError("digital_echo: probe norm exceeds 1");
    const CVector s = apply_awgn(matvec(link.a, q), link.far_noise, rng);
    return apply_awgn(matvec_adjoint(link.a, s), link.near_noise, rng);
}

CVector naive_hybrid_echo(const ChannelRealization& ch, const CVector& q, const EchoMode& mode, SeededRng& rng)
{
    if (mode.variant != EchoVariant::HybridNaive)
        throw ConfigError("naive_hybrid_echo: mode must be HybridNaive");
    mode.validate(ch.num_tx(), ch.num_rx());
    if (q.dim() != ch.num_tx())
        throw DimensionError("naive_hybrid_echo: probe dimension mismatch");
    const std::size_t r = mode.rf_chains;
    const CMatrix w = dft_matrix(ch.num_rx()).col_block(0, r);
    const CMatrix f = dft_matrix(ch.num_tx()).col_block(0, r);

    const BeamformResult bf = beamform_decompose(q);
    const CVector sent = bf.f.column(0) * cplx{bf.g};
    const CVector s = apply_awgn(matvec_adjoint(w, matvec(ch.h(), sent)), mode.noise.sigma_r_sq, rng);
    const CVector back = matvec_adjoint(ch.h(), matvec(w, s));
    return apply_awgn(matvec_adjoint(f, back), mode.noise.sigma_t_sq, rng);
}

RaidEchoResult raid_echo(const ChannelRealization& ch, const CVector& q, const EchoMode& mode, SeededRng& rng,
                         LinkDirection dir)
{
    if (mode.variant != EchoVariant::HybridRaid)
        throw ConfigError("raid_echo: mode must be HybridRaid");
    mode.validate(ch.num_tx(), ch.num_rx());
    const Link link = make_link(ch, mode.noise, dir);
    if (q.dim() != link.a.cols())
        throw DimensionError("raid_echo: probe dimension mismatch");
    const std::size_t r = mode.rf_chains;
    const double gain = static_cast<double>(mode.streams);

    RaidEchoResult out;

    // outgoing leg: q = f̃ g̃ + e^(t), send d f̃ g̃ once per far-side block
    CVector sent(q.dim());
    if (q.norm1() > 0.0) {
        const BeamformResult bf = beamform_decompose(q);
        sent = bf.f.column(0) * cplx{bf.g};
        out.tx_error = bf.error;
    } else {
        out.tx_error = CVector(q.dim());
    }
    const CVector far_rx = matvec(link.a, sent * cplx{gain});
    const CVector s_agg = dft_block_sound(far_rx, r, link.far_noise, rng, out.first_leg);

    // return leg: s̃ = w̃ ũ + e^(r), send d w̃ ũ once per near-side block
    CVector back(s_agg.dim());
    if (s_agg.norm1() > 0.0) {
        const BeamformResult bf = beamform_decompose(s_agg);
        back = bf.f.column(0) * cplx{bf.g};
        out.rx_error = bf.error;
    } else {
        out.rx_error = CVector(s_agg.dim());
    }
    const CVector near_rx = matvec_adjoint(link.a, back * cplx{gain});
    out.p = dft_block_sound(near_rx, r, link.near_noise, rng, out.second_leg);
    out.channel_uses = out.first_leg + out.second_leg;
    return out;
}

SeArnResult se_arn(const EchoFn& echo, std::size_t dim, std::size_t d, std::size_t m, SeededRng& rng,
                   const SeArnOptions& options)
{
    if (d == 0 || d > m || m > dim)
        throw ConfigError("se_arn: need 1 <= d <= m <= dim, got d = " + std::to_string(d) +
                          ", m = " + std::to_string(m) + ", dim = " + std::to_string(dim));
    const bool second_pass = options.reorth == Reorthogonalization::Always ||
                             (options.reorth == Reorthogonalization::Auto && options.noisy);

    std::vector<CVector> basis;
    CVector q = complex_gaussian_vector(rng, dim, 1.0);
    q *= 1.0 / q.norm();
    basis.push_back(std::move(q));

    CMatrix t(m, m);
    KrylovState state;
    for (std::size_t l = 0; l < m; ++l) {
        const CVector p = echo(basis[l]);
        if (p.dim() != dim)
            throw DimensionError("se_arn: echo returned a vector of the wrong dimension");
        const double pnorm = p.norm();

        CVector res = p;
        for (std::size_t k = 0; k <= l; ++k)
            t(k, l) = dot(basis[k], p);
        for (std::size_t k = 0; k <= l; ++k)
            res -= basis[k] * t(k, l);
        if (second_pass) {
            for (std::size_t k = 0; k <= l; ++k) {
                const cplx c = dot(basis[k], res);
                res -= basis[k] * c;
                t(k, l) += c;
            }
        }
        const double h = res.norm();
        state.steps_done = l + 1;
        state.last_residual = h;
        if (pnorm == 0.0 || h < options.breakdown_tol * pnorm) {
            state.broke_down = true;
            break;
        }
        if (l + 1 < m)
            t(l + 1, l) = h;
        res *= 1.0 / h;
        basis.push_back(std::move(res));
    }

    const std::size_t steps = state.steps_done;
    if (steps < d)
        throw InsufficientRankError("se_arn: Krylov space collapsed after " + std::to_string(steps) +
                                    " steps, fewer than d = " + std::to_string(d));
    state.t_coeffs = t.block(0, 0, steps, steps);
    state.q_basis = CMatrix::from_columns(basis);

    const EigResult ritz = eig_dense(state.t_coeffs);
    const CMatrix lifted = matmul(state.q_basis.col_block(0, steps), ritz.vectors.col_block(0, d));
    return SeArnResult{qr_thin(lifted).q, std::move(state)};
}

double chordal_distance(const CMatrix& a, const CMatrix& b)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DimensionError("chordal_distance: shapes differ");
    if (orthonormality_defect(a) > 1e-6 || orthonormality_defect(b) > 1e-6)
        throw DimensionError("chordal_distance: inputs must have orthonormal columns");
    const CMatrix diff = matmul(a, hermitian(a)) - matmul(b, hermitian(b));
    return frobenius_norm(diff) / std::sqrt(2.0);
}

} // namespace hsed
