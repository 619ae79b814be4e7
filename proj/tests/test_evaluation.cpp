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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hsed/errors.hpp"
#include "hsed/evaluation.hpp"
#include "hsed/linalg.hpp"
#include "oracles.hpp"

using namespace hsed;

namespace {

double rate_oracle(const CMatrix& h, const CMatrix& p, const CMatrix& c, double snr)
{
    const CMatrix ch = oracle::naive_adjoint(c);
    const CMatrix a = oracle::naive_matmul(ch, oracle::naive_matmul(h, p));
    const CMatrix b = oracle::naive_matmul(ch, c);
    CMatrix num = oracle::naive_matmul(a, oracle::naive_adjoint(a));
    const double scale = snr / static_cast<double>(p.cols());
    for (std::size_t i = 0; i < num.size(); ++i)
        num.entries()[i] = b.entries()[i] + scale * num.entries()[i];
    return (oracle::log_abs_det(num) - oracle::log_abs_det(b)) / std::log(2.0);
}

UnitModulusMatrix random_phases(SeededRng& rng, std::size_t rows, std::size_t cols)
{
    std::vector<double> ph(rows * cols);
    for (double& x : ph)
        x = rng.uniform(-3.14159, 3.14159);
    return UnitModulusMatrix(rows, cols, std::move(ph));
}

// Random hybrid factors with ‖F G‖_F² = d exactly.
HybridFactors random_factors(SeededRng& rng, std::size_t m, std::size_t n, std::size_t k, std::size_t d)
{
    HybridFactors f;
    f.f_analog = random_phases(rng, m, k);
    f.g_digital = oracle::random_matrix(rng, k, d);
    f.w_analog = random_phases(rng, n, k);
    f.u_digital = oracle::random_matrix(rng, k, d);
    const double norm = frobenius_norm(f.precoder());
    f.g_digital *= cplx{std::sqrt(static_cast<double>(d)) / norm};
    return f;
}

double equal_power_rate(const std::vector<double>& s, double p, double noise)
{
    double r = 0.0;
    for (double x : s)
        r += std::log2(1.0 + p / static_cast<double>(s.size()) * x * x / noise);
    return r;
}

double allocated_rate(const std::vector<double>& s, const std::vector<double>& pw, double noise)
{
    double r = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i)
        r += std::log2(1.0 + pw[i] * s[i] * s[i] / noise);
    return r;
}

} // namespace

TEST_CASE("LinkBudget")
{
    const LinkBudget b = LinkBudget::from_snr_db(13.0);
    CHECK(b.sigma_r_sq == 1.0);
    CHECK(b.snr_db() == doctest::Approx(13.0).epsilon(1e-14));
    CHECK_THROWS_AS((LinkBudget{0.0, 1.0}.validate()), ConfigError);
    CHECK_THROWS_AS((LinkBudget{1.0, -1.0}.validate()), ConfigError);
}

TEST_CASE("user_rate closed forms")
{
    SUBCASE("identity link")
    {
        const ChannelRealization ch(CMatrix::identity(3));
        const LinkBudget b{6.0, 2.0};
        CHECK(user_rate(ch, CMatrix::identity(3), CMatrix::identity(3), b)
              == doctest::Approx(3.0 * std::log2(2.0)).epsilon(1e-14));
    }

    SUBCASE("SVD filters give the equal-power spectrum rate")
    {
        for (std::uint64_t s = 0; s < 10; ++s) {
            const auto ch = gen_channel({16, 8, 4, s});
            const Subspaces gt = ground_truth_subspaces(ch, 2);
            const LinkBudget b = LinkBudget::from_snr_db(5.0);
            const double expect = equal_power_rate(gt.sigma1, b.p_s, b.sigma_r_sq);
            CHECK(user_rate(ch, gt.gamma1, gt.phi1, b) == doctest::Approx(expect).epsilon(1e-10));
            CHECK(ideal_digital_rate(ch, 2, b) == doctest::Approx(expect).epsilon(1e-12));
        }
    }

    SUBCASE("matches a direct determinant evaluation")
    {
        SeededRng rng(1);
        for (std::uint64_t s = 0; s < 20; ++s) {
            const auto ch = gen_channel({12, 6, 3, s});
            const CMatrix p = oracle::random_matrix(rng, 12, 2);
            const CMatrix c = oracle::random_matrix(rng, 6, 2);
            const double snr = std::pow(10.0, rng.uniform(-1.0, 2.0));
            CHECK(user_rate(ch, p, c, {snr, 1.0}) == doctest::Approx(rate_oracle(ch.h(), p, c, snr)).epsilon(1e-9));
        }
    }
}

TEST_CASE("user_rate invariances")
{
    SeededRng rng(2);
    const auto ch = gen_channel({16, 8, 4, 3});
    const LinkBudget b = LinkBudget::from_snr_db(10.0);
    for (int t = 0; t < 20; ++t) {
        HybridFactors f = random_factors(rng, 16, 8, 4, 2);
        const double base = user_rate(ch, f, b);

        HybridFactors whitened = f;
        whitened.u_digital = matmul(f.u_digital, oracle::random_matrix(rng, 2, 2));
        CHECK(std::abs(user_rate(ch, whitened, b) - base) < 1e-9);

        HybridFactors rotated = f;
        rotated.g_digital = matmul(f.g_digital, oracle::random_orthonormal(rng, 2, 2));
        CHECK(std::abs(user_rate(ch, rotated, b) - base) < 1e-9);
    }
}

TEST_CASE("SVD filtering is the empirical argmax over random hybrid factors")
{
    SeededRng rng(3);
    const auto ch = gen_channel({16, 8, 4, 11});
    const Subspaces gt = ground_truth_subspaces(ch, 2);
    for (double snr_db : {-10.0, 10.0, 30.0}) {
        const LinkBudget b = LinkBudget::from_snr_db(snr_db);
        const double best = user_rate(ch, gt.gamma1, gt.phi1, b);
        for (int t = 0; t < 200; ++t) {
            const HybridFactors f = random_factors(rng, 16, 8, 4, 2);
            CHECK(frobenius_norm_sq(f.precoder()) <= 2.0 + 1e-9);
            CHECK(user_rate(ch, f, b) <= best + 1e-9);
        }
    }
}

TEST_CASE("user_rate errors")
{
    SeededRng rng(4);
    const auto ch = gen_channel({8, 4, 2, 1});
    const CMatrix p = oracle::random_matrix(rng, 8, 2);
    CMatrix c = oracle::random_matrix(rng, 4, 2);
    c.set_col(1, c.col(0));
    CHECK_THROWS_AS(user_rate(ch, p, c, {}), RankDeficientError);
    CHECK_THROWS_AS(user_rate(ch, p, oracle::random_matrix(rng, 5, 2), {}), DimensionError);
    CHECK_THROWS_AS(user_rate(ch, p, oracle::random_matrix(rng, 4, 1), {}), DimensionError);
}

TEST_CASE("ideal_digital_rate")
{
    SeededRng rng(5);
    const CMatrix u = oracle::random_orthonormal(rng, 3, 1);
    const CMatrix v = oracle::random_orthonormal(rng, 4, 1);
    const ChannelRealization rank1(oracle::naive_matmul(u, oracle::naive_adjoint(v)) * cplx{2.0});
    CHECK(ideal_digital_rate(rank1, 1, {1.0, 1.0}) == doctest::Approx(std::log2(5.0)).epsilon(1e-14));

    const auto ch = gen_channel({16, 8, 4, 2});
    double prev = 0.0;
    for (double p = 0.01; p < 1e4; p *= 3.0) {
        const double r = ideal_digital_rate(ch, 3, {p, 1.0});
        CHECK(r >= prev);
        prev = r;
    }
    CHECK_THROWS_AS(ideal_digital_rate(ch, 0, {}), DimensionError);
    CHECK_THROWS_AS(ideal_digital_rate(ch, 9, {}), DimensionError);
}

TEST_CASE("waterfill")
{
    const auto eq = waterfill({1.5, 1.5, 1.5}, 3.0, 0.7);
    for (double p : eq)
        CHECK(p == doctest::Approx(1.0).epsilon(1e-14));

    const auto low = waterfill({3.0, 0.5, 0.2}, 1e-3, 1.0);
    CHECK(low[0] == doctest::Approx(1e-3).epsilon(1e-12));
    CHECK(low[1] == 0.0);
    CHECK(low[2] == 0.0);

    SeededRng rng(6);
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform(0.0, 6.0));
        std::vector<double> s(n);
        for (double& x : s)
            x = std::exp(rng.uniform(-3.0, 2.0));
        const double p = std::exp(rng.uniform(-4.0, 4.0));
        const double noise = std::exp(rng.uniform(-2.0, 1.0));
        const auto pw = waterfill(s, p, noise);

        CHECK(std::accumulate(pw.begin(), pw.end(), 0.0) == doctest::Approx(p).epsilon(1e-12));
        // bisection on the water level as an independent reference
        double lo = 0.0, hi = p + 1e6;
        for (int it = 0; it < 200; ++it) {
            const double mu = 0.5 * (lo + hi);
            double used = 0.0;
            for (double x : s)
                used += std::max(0.0, mu - noise / (x * x));
            (used > p ? hi : lo) = mu;
        }
        for (std::size_t i = 0; i < n; ++i)
            CHECK(std::abs(pw[i] - std::max(0.0, lo - noise / (s[i] * s[i]))) < 1e-9 * (1.0 + p));
        CHECK(allocated_rate(s, pw, noise) >= equal_power_rate(s, p, noise) - 1e-12);
    }
    CHECK_THROWS_AS(waterfill({1.0, 0.0}, 1.0, 1.0), ConfigError);
    CHECK_THROWS_AS(waterfill({1.0}, 0.0, 1.0), ConfigError);
}

TEST_CASE("independent_sounding")
{
    SeededRng rng(7);

    SUBCASE("single block reduces to SVD of the full effective channel")
    {
        const auto ch = gen_channel({8, 8, 3, 4});
        const SoundingResult s = independent_sounding(ch, 2, 8, rng);
        CHECK(s.tx_block == 0);
        CHECK(s.rx_block == 0);
        CHECK(s.overhead.channel_uses == 1);
        const CMatrix eff = oracle::naive_matmul(oracle::naive_adjoint(oracle::dft(8)),
                                                 oracle::naive_matmul(ch.h(), oracle::dft(8)));
        const SvdResult e = svd(eff);
        const LinkBudget b{1.0, 1.0};
        const double expect = equal_power_rate({e.singular_values[0], e.singular_values[1]}, 1.0, 1.0);
        CHECK(user_rate(ch, s.factors, b) == doctest::Approx(expect).epsilon(1e-10));
    }

    SUBCASE("selection matches a brute-force scan")
    {
        for (SelectionMetric metric : {SelectionMetric::Frobenius, SelectionMetric::LargestSingularValue}) {
            for (std::uint64_t seed = 0; seed < 20; ++seed) {
                const auto ch = gen_channel({16, 8, 3, seed});
                const CMatrix fm = oracle::dft(16), fn = oracle::dft(8);
                double best = -1.0;
                std::size_t bi = 0, bj = 0;
                for (std::size_t i = 0; i < 4; ++i)
                    for (std::size_t j = 0; j < 2; ++j) {
                        const CMatrix eff = oracle::naive_matmul(oracle::naive_adjoint(fn.col_block(j * 4, 4)),
                                                                 oracle::naive_matmul(ch.h(), fm.col_block(i * 4, 4)));
                        const double score = metric == SelectionMetric::Frobenius
                            ? std::pow(frobenius_norm(eff), 2)
                            : svd(eff).singular_values[0];
                        if (score > best) {
                            best = score;
                            bi = i;
                            bj = j;
                        }
                    }
                SoundingOptions o;
                o.metric = metric;
                const SoundingResult s = independent_sounding(ch, 2, 4, rng, o);
                CHECK(s.tx_block == bi);
                CHECK(s.rx_block == bj);
                CHECK(s.overhead.channel_uses == 8);
                CHECK(frobenius_norm_sq(s.factors.precoder()) == doctest::Approx(2.0).epsilon(1e-12));
            }
        }
    }

    SUBCASE("overhead counting and validation")
    {
        const auto ch = gen_channel({64, 32, 4, 1});
        CHECK(independent_sounding(ch, 2, 8, rng).overhead.channel_uses == 32);
        CHECK_THROWS_AS(independent_sounding(ch, 2, 6, rng), ConfigError);
        CHECK_THROWS_AS(independent_sounding(ch, 9, 8, rng), ConfigError);
    }
}

TEST_CASE("sed_pipeline")
{
    SeededRng rng(8);
    EchoMode raid;
    raid.variant = EchoVariant::HybridRaid;
    raid.rf_chains = 4;
    BcdOptions bcd;

    SUBCASE("hybrid overhead 2m(M+N)/r")
    {
        const auto ch = gen_channel({32, 16, 8, 2});
        const SedResult s = sed_pipeline(ch, 2, 6, raid, bcd, rng);
        CHECK(s.overhead.channel_uses == 144);
        CHECK(s.overhead.m_eff_forward == 6);
        CHECK(s.overhead.m_eff_reverse == 6);
        CHECK(s.overhead.dl_soundings + s.overhead.ul_soundings == 144);
        CHECK(s.factors.f_analog.rows() == 32);
        CHECK(s.factors.w_analog.rows() == 16);
        CHECK(frobenius_norm_sq(s.factors.precoder()) <= 2.0 + 1e-9);

        EchoMode wide = raid;
        wide.rf_chains = 8;
        const auto big = gen_channel({64, 32, 8, 3});
        CHECK(sed_pipeline(big, 2, 6, wide, bcd, rng).overhead.channel_uses == 144);
    }

    SUBCASE("noiseless digital estimation adds nothing to the decomposition residual")
    {
        EchoMode digital;
        digital.rf_chains = 4;
        BcdOptions warm;
        warm.warm_start = true;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto ch = gen_channel({32, 16, 4, seed});
            const Subspaces gt = ground_truth_subspaces(ch, 2);
            const SedResult s = sed_pipeline(ch, 2, 5, digital, warm, rng);
            CHECK(s.overhead.channel_uses == 4 * 5);
            const CMatrix span_fg = qr_thin(s.factors.precoder()).q;
            CHECK(std::abs(chordal_distance(span_fg, gt.gamma1) - chordal_distance(span_fg, s.gamma_estimate))
                  < 1e-6);
            CHECK(chordal_distance(s.gamma_estimate, gt.gamma1) < 1e-6);
            CHECK(chordal_distance(s.phi_estimate, gt.phi1) < 1e-6);
        }
    }

    SUBCASE("designed filters never beat the ideal rate")
    {
        for (std::uint64_t seed = 0; seed < 100; ++seed) {
            const auto ch = gen_channel({16, 8, 3, seed});
            const LinkBudget b = LinkBudget::from_snr_db(10.0);
            const double ideal = ideal_digital_rate(ch, 2, b);
            CHECK(user_rate(ch, sed_pipeline(ch, 2, 4, raid, bcd, rng).factors, b) <= ideal + 1e-9);
            CHECK(user_rate(ch, independent_sounding(ch, 2, 4, rng).factors, b) <= ideal + 1e-9);
        }
    }

    SUBCASE("unsupported configurations")
    {
        const auto ch = gen_channel({16, 8, 3, 1});
        EchoMode naive = raid;
        naive.variant = EchoVariant::HybridNaive;
        CHECK_THROWS_AS(sed_pipeline(ch, 2, 4, naive, bcd, rng), ConfigError);
        CHECK_THROWS_AS(sed_pipeline(ch, 3, 2, raid, bcd, rng), ConfigError);
        EchoMode bad = raid;
        bad.rf_chains = 3;
        CHECK_THROWS_AS(sed_pipeline(ch, 2, 4, bad, bcd, rng), ConfigError);
    }
}

TEST_CASE("monte_carlo_rate")
{
    MonteCarloPlan plan;
    plan.num_tx = 16;
    plan.num_rx = 8;
    plan.rf_chains = 4;
    plan.streams = 2;
    plan.paths = 3;
    plan.arnoldi_steps = 4;
    plan.snr_db = {10.0, -5.0, 0.0, 5.0};
    plan.trials = 6;
    plan.master_seed = 42;
    plan.schemes = {Scheme::IdealDigital, Scheme::SedHybridRaid, Scheme::SedDigital, Scheme::IndependentSounding};

    const auto a = monte_carlo_rate(plan);
    REQUIRE(a.size() == 16);

    SUBCASE("bit-exact reruns and thread independence")
    {
        const auto b = monte_carlo_rate(plan);
        MonteCarloPlan threaded = plan;
        threaded.threads = 3;
        const auto c = monte_carlo_rate(threaded);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a[i].mean_rate == b[i].mean_rate);
            CHECK(a[i].std_rate == b[i].std_rate);
            CHECK(a[i].mean_rate == c[i].mean_rate);
            CHECK(a[i].std_rate == c[i].std_rate);
            CHECK(a[i].scheme == c[i].scheme);
        }
    }

    SUBCASE("ordering, dominance and monotonicity")
    {
        for (std::size_t i = 1; i < a.size(); ++i)
            CHECK((a[i - 1].snr_db < a[i].snr_db
                   || (a[i - 1].snr_db == a[i].snr_db && a[i - 1].scheme < a[i].scheme)));
        for (std::size_t k = 0; k < 4; ++k) {
            const auto* row = &a[4 * k];
            const double ideal = row[0].mean_rate;
            CHECK(row[0].scheme == "ideal-digital");
            for (int s = 0; s < 4; ++s) {
                CHECK(row[s].mean_rate >= 0.0);
                CHECK(row[s].mean_rate <= ideal + 1e-9);
                CHECK(row[s].trials == 6);
                if (k > 0)
                    CHECK(row[s].mean_rate >= a[4 * (k - 1) + s].mean_rate);
            }
        }
        for (const auto& r : a) {
            if (r.scheme == "sed-hybrid-raid")
                CHECK(r.overhead_uses == 2 * 4 * 24 / 4);
            if (r.scheme == "sed-digital")
                CHECK(r.overhead_uses == 16);
            if (r.scheme == "independent-sounding")
                CHECK(r.overhead_uses == 8);
            if (r.scheme == "ideal-digital")
                CHECK(r.overhead_uses == 0);
        }
    }

    SUBCASE("noisy estimation runs and stays below the ideal rate")
    {
        MonteCarloPlan noisy = plan;
        noisy.estimation_noise = true;
        noisy.trials = 3;
        const auto n = monte_carlo_rate(noisy);
        for (std::size_t k = 0; k < 4; ++k)
            for (int s = 0; s < 4; ++s)
                CHECK(n[4 * k + s].mean_rate <= n[4 * k].mean_rate + 1e-9);
    }

    SUBCASE("validation")
    {
        MonteCarloPlan bad = plan;
        bad.trials = 0;
        CHECK_THROWS_AS(monte_carlo_rate(bad), ConfigError);
        bad = plan;
        bad.rf_chains = 3;
        CHECK_THROWS_AS(monte_carlo_rate(bad), ConfigError);
        bad = plan;
        bad.arnoldi_steps = 1;
        CHECK_THROWS_AS(monte_carlo_rate(bad), ConfigError);
        CHECK_THROWS_AS(parse_scheme("oracle"), ConfigError);
        CHECK(parse_scheme("sed-digital") == Scheme::SedDigital);
    }
}
