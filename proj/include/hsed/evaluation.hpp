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
#include <string>
#include <vector>

#include "hsed/channel.hpp"
#include "hsed/decomposition.hpp"
#include "hsed/estimation.hpp"
#include "hsed/matrix.hpp"
#include "hsed/random.hpp"

namespace hsed {

/// Transmit filter F G and receive filter W U.
struct HybridFactors {
    UnitModulusMatrix f_analog; ///< M x k
    CMatrix g_digital;          ///< k x d
    UnitModulusMatrix w_analog; ///< N x k
    CMatrix u_digital;          ///< k x d

    CMatrix precoder() const { return matmul(f_analog.matrix(), g_digital); }
    CMatrix combiner() const { return matmul(w_analog.matrix(), u_digital); }
};

struct LinkBudget {
    double p_s = 1.0;        ///< total transmit power, linear
    double sigma_r_sq = 1.0; ///< receiver noise variance

    void validate() const;
    double snr_db() const;
    double snr_linear() const { return p_s / sigma_r_sq; }
    /// Unit noise variance, p_s = 10^(snr_db / 10).
    static LinkBudget from_snr_db(double snr_db);
};

struct OverheadReport {
    std::size_t channel_uses = 0;
    std::size_t m = 0;               ///< requested Arnoldi steps
    std::size_t m_eff_forward = 0;   ///< steps actually run for the transmit subspace
    std::size_t m_eff_reverse = 0;   ///< steps actually run for the receive subspace
    std::size_t dl_soundings = 0;    ///< BS -> MS channel uses
    std::size_t ul_soundings = 0;    ///< MS -> BS channel uses
};

struct SedResult {
    HybridFactors factors;
    OverheadReport overhead;
    CMatrix gamma_estimate; ///< M x d
    CMatrix phi_estimate;   ///< N x d
};

/// SE-ARN in both directions followed by BCD-SD on each estimate.
/// Digital and HybridRaid echoes are supported. Each decomposition is seeded
/// from `rng`, overriding `bcd.seed`.
SedResult sed_pipeline(const ChannelRealization& ch, std::size_t d, std::size_t m, const EchoMode& mode,
                       const BcdOptions& bcd, SeededRng& rng, const SeArnOptions& arnoldi = {});

/// log2 det(I + P_s/(d σ²) A A† B⁻¹) with A = C†H P and B = C†C.
double user_rate(const ChannelRealization& ch, const CMatrix& precoder, const CMatrix& combiner,
                 const LinkBudget& budget);
double user_rate(const ChannelRealization& ch, const HybridFactors& factors, const LinkBudget& budget);

/// Equal-power rate over the top-d singular values.
double ideal_digital_rate(const ChannelRealization& ch, std::size_t d, const LinkBudget& budget);

std::vector<double> waterfill(const std::vector<double>& sigmas, double p_total, double noise_var);

enum class SelectionMetric { Frobenius, LargestSingularValue };

struct SoundingOptions {
    SelectionMetric metric = SelectionMetric::Frobenius;
    double noise_var = 0.0; ///< added to each sounded effective channel entry
};

struct SoundingResult {
    HybridFactors factors;
    OverheadReport overhead;
    std::size_t tx_block = 0; ///< selected F_i
    std::size_t rx_block = 0; ///< selected W_j
};

SoundingResult independent_sounding(const ChannelRealization& ch, std::size_t d, std::size_t r, SeededRng& rng,
                                    const SoundingOptions& options = {});

enum class Scheme { SedDigital, SedHybridRaid, IndependentSounding, IdealDigital };

std::string scheme_name(Scheme s);
/// Throws ConfigError for unknown identifiers.
Scheme parse_scheme(const std::string& name);

struct MonteCarloPlan {
    std::size_t num_tx = 64;
    std::size_t num_rx = 32;
    std::size_t rf_chains = 8;
    std::size_t streams = 2;
    std::size_t paths = 4;
    std::size_t arnoldi_steps = 4;
    std::vector<double> snr_db{0.0};
    std::size_t trials = 1;
    std::uint64_t master_seed = 0;
    std::vector<Scheme> schemes{Scheme::SedHybridRaid, Scheme::IndependentSounding, Scheme::IdealDigital};
    BcdOptions bcd;
    /// Echo noise at the link SNR (variance 1/snr on both legs); factors are
    /// then re-estimated per SNR point.
    bool estimation_noise = false;
    SelectionMetric selection_metric = SelectionMetric::Frobenius;
    std::size_t threads = 1;

    void validate() const;
};

struct RateRecord {
    double snr_db = 0.0;
    std::string scheme;
    double mean_rate = 0.0;
    double std_rate = 0.0;
    std::size_t overhead_uses = 0;
    std::size_t trials = 0;
};

/// Records sorted by (snr_db, scheme). overhead_uses is the maximum over trials.
std::vector<RateRecord> monte_carlo_rate(const MonteCarloPlan& plan);

} // namespace hsed
