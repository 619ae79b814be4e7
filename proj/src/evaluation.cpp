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

#include "hsed/evaluation.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "hsed/errors.hpp"
#include "hsed/linalg.hpp"

namespace hsed {

namespace {

double pairwise_sum(std::span<const double> x)
{
    if (x.size() <= 8) {
        double s = 0.0;
        for (double v : x)
            s += v;
        return s;
    }
    const std::size_t h = x.size() / 2;
    return pairwise_sum(x.subspan(0, h)) + pairwise_sum(x.subspan(h));
}

} // namespace

void LinkBudget::validate() const
{
    if (!(p_s > 0.0) || !std::isfinite(p_s))
        throw ConfigError("LinkBudget: p_s must be positive");
    if (!(sigma_r_sq > 0.0) || !std::isfinite(sigma_r_sq))
        throw ConfigError("LinkBudget: sigma_r_sq must be positive");
}

double LinkBudget::snr_db() const
{
    return 10.0 * std::log10(p_s / sigma_r_sq);
}

LinkBudget LinkBudget::from_snr_db(double snr_db)
{
    return LinkBudget{std::pow(10.0, snr_db / 10.0), 1.0};
}

SedResult sed_pipeline(const ChannelRealization& ch, std::size_t d, std::size_t m, const EchoMode& mode,
                       const BcdOptions& bcd, SeededRng& rng, const SeArnOptions& arnoldi)
{
    const std::size_t big_m = ch.num_tx(), big_n = ch.num_rx();
    EchoMode echo_mode = mode;
    echo_mode.streams = d;
    echo_mode.validate(big_m, big_n);
    if (echo_mode.variant == EchoVariant::HybridNaive)
        throw ConfigError("sed_pipeline: mode must be digital or hybrid-raid");

    OverheadReport overhead;
    overhead.m = m;

    auto make_echo = [&](LinkDirection dir) -> EchoFn {
        if (echo_mode.variant == EchoVariant::Digital) {
            return [&, dir](const CVector& q) {
                ++overhead.dl_soundings;
                ++overhead.ul_soundings;
                return digital_echo(ch, q, echo_mode.noise, rng, dir);
            };
        }
        return [&, dir](const CVector& q) {
            RaidEchoResult r = raid_echo(ch, q, echo_mode, rng, dir);
            if (dir == LinkDirection::Forward) {
                overhead.dl_soundings += r.first_leg;
                overhead.ul_soundings += r.second_leg;
            } else {
                overhead.ul_soundings += r.first_leg;
                overhead.dl_soundings += r.second_leg;
            }
            return std::move(r.p);
        };
    };

    const SeArnResult fwd = se_arn(make_echo(LinkDirection::Forward), big_m, d, m, rng, arnoldi);
    const SeArnResult rev = se_arn(make_echo(LinkDirection::Reverse), big_n, d, m, rng, arnoldi);
    overhead.m_eff_forward = fwd.state.steps_done;
    overhead.m_eff_reverse = rev.state.steps_done;
    overhead.channel_uses = overhead.dl_soundings + overhead.ul_soundings;

    BcdOptions tx_opts = bcd;
    tx_opts.seed = rng.next_u64();
    BcdOptions rx_opts = bcd;
    rx_opts.seed = rng.next_u64();
    tx_opts.project = rx_opts.project = true;
    DecompositionResult tx = bcd_sd(fwd.gamma, tx_opts);
    DecompositionResult rx = bcd_sd(rev.gamma, rx_opts);

    SedResult out;
    out.factors = HybridFactors{std::move(tx.analog), std::move(tx.digital), std::move(rx.analog),
                                std::move(rx.digital)};
    out.overhead = overhead;
    out.gamma_estimate = fwd.gamma;
    out.phi_estimate = rev.gamma;
    return out;
}

double user_rate(const ChannelRealization& ch, const CMatrix& precoder, const CMatrix& combiner,
                 const LinkBudget& budget)
{
    budget.validate();
    if (precoder.rows() != ch.num_tx() || combiner.rows() != ch.num_rx() || precoder.cols() != combiner.cols()
        || precoder.cols() == 0)
        throw DimensionError("user_rate: filters do not match the channel");
    const std::size_t d = precoder.cols();

    const CMatrix b = matmul(hermitian(combiner), combiner);
    const SvdResult cs = svd(combiner);
    if (cs.singular_values.back() <= 1e-12 * cs.singular_values.front())
        throw RankDeficientError("user_rate: combiner is rank deficient");

    const CMatrix a = matmul(hermitian(combiner), matmul(ch.h(), precoder));
    const double scale = budget.snr_linear() / static_cast<double>(d);
    CMatrix num = b + matmul(a, hermitian(a)) * cplx{scale};
    const double rate = (log_det_hpd(num) - log_det_hpd(b)) / std::log(2.0);
    return std::max(rate, 0.0);
}

double user_rate(const ChannelRealization& ch, const HybridFactors& factors, const LinkBudget& budget)
{
    return user_rate(ch, factors.precoder(), factors.combiner(), budget);
}

double ideal_digital_rate(const ChannelRealization& ch, std::size_t d, const LinkBudget& budget)
{
    budget.validate();
    const auto& sv = ch.ground_truth().singular_values;
    if (d == 0 || d > sv.size())
        throw DimensionError("ideal_digital_rate: d out of range");
    const double scale = budget.snr_linear() / static_cast<double>(d);
    double rate = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        rate += std::log2(1.0 + scale * sv[i] * sv[i]);
    return rate;
}

std::vector<double> waterfill(const std::vector<double>& sigmas, double p_total, double noise_var)
{
    if (!(p_total > 0.0) || !(noise_var >= 0.0))
        throw ConfigError("waterfill: p_total must be positive and noise_var non-negative");
    const std::size_t n = sigmas.size();
    std::vector<double> floor(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(sigmas[i] > 0.0))
            throw ConfigError("waterfill: singular values must be positive");
        floor[i] = noise_var / (sigmas[i] * sigmas[i]);
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return floor[a] < floor[b]; });

    double mu = 0.0;
    double prefix = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
        prefix += floor[order[k - 1]];
        const double level = (p_total + prefix) / static_cast<double>(k);
        if (k == n || level <= floor[order[k]]) {
            mu = level;
            break;
        }
    }
    std::vector<double> powers(n);
    for (std::size_t i = 0; i < n; ++i)
        powers[i] = std::max(0.0, mu - floor[i]);
    return powers;
}

SoundingResult independent_sounding(const ChannelRealization& ch, std::size_t d, std::size_t r, SeededRng& rng,
                                    const SoundingOptions& options)
{
    const std::size_t big_m = ch.num_tx(), big_n = ch.num_rx();
    if (r == 0 || big_m % r != 0 || big_n % r != 0)
        throw ConfigError("independent_sounding: rf_chains must divide both array sizes");
    if (d == 0 || d > r)
        throw ConfigError("independent_sounding: streams must satisfy 1 <= d <= rf_chains");
    if (options.noise_var < 0.0)
        throw ConfigError("independent_sounding: noise_var must be non-negative");

    const CMatrix dft_m = dft_matrix(big_m);
    const CMatrix dft_n = dft_matrix(big_n);
    const std::size_t kt = big_m / r, kr = big_n / r;

    double best_score = -1.0;
    std::size_t best_i = 0, best_j = 0;
    CMatrix best_eff;
    for (std::size_t i = 0; i < kt; ++i) {
        const CMatrix hf = matmul(ch.h(), dft_m.col_block(i * r, r));
        for (std::size_t j = 0; j < kr; ++j) {
            CMatrix eff = matmul(hermitian(dft_n.col_block(j * r, r)), hf);
            if (options.noise_var > 0.0)
                eff += complex_gaussian(rng, r, r, options.noise_var);
            const double score = options.metric == SelectionMetric::Frobenius ? frobenius_norm_sq(eff)
                                                                              : svd(eff).singular_values.front();
            if (score > best_score) {
                best_score = score;
                best_i = i;
                best_j = j;
                best_eff = std::move(eff);
            }
        }
    }

    const SvdResult s = svd(best_eff);
    SoundingResult out;
    out.factors.f_analog = project_unit_modulus(dft_m.col_block(best_i * r, r));
    out.factors.g_digital = s.right.col_block(0, d);
    out.factors.w_analog = project_unit_modulus(dft_n.col_block(best_j * r, r));
    out.factors.u_digital = s.left.col_block(0, d);
    out.overhead.channel_uses = kt * kr;
    out.overhead.dl_soundings = kt * kr;
    out.tx_block = best_i;
    out.rx_block = best_j;
    return out;
}

std::string scheme_name(Scheme s)
{
    switch (s) {
    case Scheme::SedDigital:
        return "sed-digital";
    case Scheme::SedHybridRaid:
        return "sed-hybrid-raid";
    case Scheme::IndependentSounding:
        return "independent-sounding";
    case Scheme::IdealDigital:
        return "ideal-digital";
    }
    return "unknown";
}

Scheme parse_scheme(const std::string& name)
{
    for (Scheme s : {Scheme::SedDigital, Scheme::SedHybridRaid, Scheme::IndependentSounding, Scheme::IdealDigital})
        if (scheme_name(s) == name)
            return s;
    throw ConfigError("schemes: unknown scheme '" + name + "'");
}

void MonteCarloPlan::validate() const
{
    ChannelParams{num_tx, num_rx, paths, 0}.validate();
    EchoMode mode;
    mode.variant = EchoVariant::HybridRaid;
    mode.rf_chains = rf_chains;
    mode.streams = streams;
    const bool hybrid = std::find(schemes.begin(), schemes.end(), Scheme::SedHybridRaid) != schemes.end()
        || std::find(schemes.begin(), schemes.end(), Scheme::IndependentSounding) != schemes.end();
    if (!hybrid)
        mode.variant = EchoVariant::Digital;
    mode.validate(num_tx, num_rx);
    if (arnoldi_steps < streams || arnoldi_steps > std::min(num_tx, num_rx))
        throw ConfigError("arnoldi_steps: need streams <= arnoldi_steps <= min(m_antennas, n_antennas)");
    if (trials == 0)
        throw ConfigError("trials: must be at least 1");
    if (snr_db.empty())
        throw ConfigError("snr_db: at least one SNR point is required");
    for (double s : snr_db)
        if (!std::isfinite(s))
            throw ConfigError("snr_db: values must be finite");
    if (schemes.empty())
        throw ConfigError("schemes: at least one scheme is required");
    if (threads == 0)
        throw ConfigError("threads: must be at least 1");
}

namespace {

struct TrialOutcome {
    std::vector<std::vector<double>> rates; ///< [scheme][snr]
    std::vector<std::size_t> overhead;      ///< [scheme]
};

TrialOutcome run_trial(const MonteCarloPlan& plan, std::size_t trial)
{
    const std::uint64_t trial_seed = derive_seed(plan.master_seed, trial);
    const ChannelRealization ch =
        gen_channel({plan.num_tx, plan.num_rx, plan.paths, derive_seed(trial_seed, 0)});
    const std::size_t d = plan.streams;

    TrialOutcome out;
    out.rates.assign(plan.schemes.size(), std::vector<double>(plan.snr_db.size(), 0.0));
    out.overhead.assign(plan.schemes.size(), 0);

    for (std::size_t si = 0; si < plan.schemes.size(); ++si) {
        const Scheme scheme = plan.schemes[si];
        const std::uint64_t scheme_seed = derive_seed(trial_seed, 1 + static_cast<std::uint64_t>(scheme));

        if (scheme == Scheme::IdealDigital) {
            for (std::size_t k = 0; k < plan.snr_db.size(); ++k)
                out.rates[si][k] = ideal_digital_rate(ch, d, LinkBudget::from_snr_db(plan.snr_db[k]));
            continue;
        }

        auto design = [&](SeededRng& rng, double echo_noise) -> std::pair<HybridFactors, std::size_t> {
            if (scheme == Scheme::IndependentSounding) {
                SoundingOptions so;
                so.metric = plan.selection_metric;
                so.noise_var = echo_noise;
                SoundingResult s = independent_sounding(ch, d, plan.rf_chains, rng, so);
                return {std::move(s.factors), s.overhead.channel_uses};
            }
            EchoMode mode;
            mode.variant = scheme == Scheme::SedDigital ? EchoVariant::Digital : EchoVariant::HybridRaid;
            mode.rf_chains = plan.rf_chains;
            mode.streams = d;
            mode.noise = {echo_noise, echo_noise};
            SeArnOptions ao;
            ao.noisy = echo_noise > 0.0;
            SedResult s = sed_pipeline(ch, d, plan.arnoldi_steps, mode, plan.bcd, rng, ao);
            return {std::move(s.factors), s.overhead.channel_uses};
        };

        if (!plan.estimation_noise) {
            SeededRng rng(scheme_seed);
            const auto [factors, uses] = design(rng, 0.0);
            out.overhead[si] = uses;
            for (std::size_t k = 0; k < plan.snr_db.size(); ++k)
                out.rates[si][k] = user_rate(ch, factors, LinkBudget::from_snr_db(plan.snr_db[k]));
        } else {
            for (std::size_t k = 0; k < plan.snr_db.size(); ++k) {
                const LinkBudget budget = LinkBudget::from_snr_db(plan.snr_db[k]);
                SeededRng rng(derive_seed(scheme_seed, k));
                const auto [factors, uses] = design(rng, 1.0 / budget.snr_linear());
                out.overhead[si] = std::max(out.overhead[si], uses);
                out.rates[si][k] = user_rate(ch, factors, budget);
            }
        }
    }
    return out;
}

} // namespace

std::vector<RateRecord> monte_carlo_rate(const MonteCarloPlan& plan)
{
    plan.validate();
    std::vector<TrialOutcome> outcomes(plan.trials);
    std::vector<std::exception_ptr> errors(plan.trials);

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t t = next++; t < plan.trials; t = next++) {
            try {
                outcomes[t] = run_trial(plan, t);
            } catch (...) {
                errors[t] = std::current_exception();
            }
        }
    };
    const std::size_t n_threads = std::min(plan.threads, plan.trials);
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t i = 0; i < n_threads; ++i)
            pool.emplace_back(worker);
        for (auto& th : pool)
            th.join();
    }
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);

    std::vector<RateRecord> records;
    std::vector<double> samples(plan.trials);
    for (std::size_t si = 0; si < plan.schemes.size(); ++si) {
        std::size_t overhead = 0;
        for (const auto& o : outcomes)
            overhead = std::max(overhead, o.overhead[si]);
        for (std::size_t k = 0; k < plan.snr_db.size(); ++k) {
            for (std::size_t t = 0; t < plan.trials; ++t)
                samples[t] = outcomes[t].rates[si][k];
            const double n = static_cast<double>(plan.trials);
            const double mean = pairwise_sum(samples) / n;
            std::vector<double> dev(plan.trials);
            for (std::size_t t = 0; t < plan.trials; ++t)
                dev[t] = (samples[t] - mean) * (samples[t] - mean);
            const double var = plan.trials > 1 ? pairwise_sum(dev) / (n - 1.0) : 0.0;
            records.push_back({plan.snr_db[k], scheme_name(plan.schemes[si]), mean, std::sqrt(var), overhead,
                               plan.trials});
        }
    }
    std::stable_sort(records.begin(), records.end(), [](const RateRecord& a, const RateRecord& b) {
        if (a.snr_db != b.snr_db)
            return a.snr_db < b.snr_db;
        return a.scheme < b.scheme;
    });
    return records;
}

} // namespace hsed
