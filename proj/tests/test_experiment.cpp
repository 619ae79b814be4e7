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

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "hsed/errors.hpp"
#include "hsed/experiment.hpp"
#include "hsed/linalg.hpp"
#include "oracles.hpp"

using namespace hsed;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("hsed_" + tag + "_" + std::to_string(::getpid())))
    {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentConfig small_sweep()
{
    return parse_config(R"(
# small rate sweep
name = tiny
m_antennas = 16
n_antennas = 8
rf_chains = 4
streams = 2
paths = 3
arnoldi_steps = 4
snr_db = -10, 0, 10
trials = 2
master_seed = 7
schemes = sed-hybrid-raid, independent-sounding, ideal-digital, sed-digital
)");
}

} // namespace

TEST_CASE("parse_config")
{
    const ExperimentConfig c = parse_config(R"(
name = sweep   # trailing comment
m_antennas = 32
snr_db = -10, -5.5,0
schemes = ideal-digital , sed-digital
warm_start = true
bcd_tol = 1e-6
master_seed = 18446744073709551615
decomp_streams = 1,3
)");
    CHECK(c.name == "sweep");
    CHECK(c.m_antennas == 32);
    CHECK(c.snr_db == std::vector<double>{-10.0, -5.5, 0.0});
    CHECK(c.schemes == std::vector<std::string>{"ideal-digital", "sed-digital"});
    CHECK(c.warm_start);
    CHECK(c.bcd_tol == 1e-6);
    CHECK(c.master_seed == 18446744073709551615ULL);
    CHECK(c.decomp_streams == std::vector<std::size_t>{1, 3});
    CHECK(c.n_antennas == 32);
    CHECK(c.output() == fs::path("sweep.csv"));

    auto message = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("colour = red").find("colour") != std::string::npos);
    CHECK(message("trials = 2\ntrials = 3").find("duplicate") != std::string::npos);
    CHECK(message("trials = two").find("trials") != std::string::npos);
    CHECK(message("trials = -1").find("trials") != std::string::npos);
    CHECK(message("snr_db = 1, x").find("snr_db") != std::string::npos);
    CHECK(message("warm_start = maybe").find("warm_start") != std::string::npos);
    CHECK(message("just words").find("line 1") != std::string::npos);
    CHECK_THROWS_AS(load_config("/nonexistent/config.cfg"), ConfigError);
}

TEST_CASE("config validation names the field")
{
    auto message = [](ExperimentConfig c, Command cmd) {
        try {
            c.validate(cmd);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    const ExperimentConfig base = small_sweep();
    CHECK(message(base, Command::RateSweep).empty());

    ExperimentConfig c = base;
    c.streams = 0;
    CHECK(message(c, Command::RateSweep).find("streams") == 0);
    c = base;
    c.rf_chains = 3;
    CHECK(message(c, Command::RateSweep).find("rf_chains") == 0);
    c = base;
    c.rf_chains = 1;
    CHECK(message(c, Command::RateSweep).find("rf_chains") == 0);
    c = base;
    c.trials = 0;
    CHECK(message(c, Command::RateSweep).find("trials") == 0);
    c = base;
    c.arnoldi_steps = 1;
    CHECK(message(c, Command::RateSweep).find("arnoldi_steps") == 0);
    c = base;
    c.mode = "digital";
    CHECK(message(c, Command::RateSweep).find("schemes") == 0);
    c.schemes = {"sed-digital", "ideal-digital"};
    c.rf_chains = 3;
    CHECK(message(c, Command::RateSweep).empty());
    c = base;
    c.schemes = {"ideal-digital", "ideal-digital"};
    CHECK(message(c, Command::RateSweep).find("schemes") == 0);
    c = base;
    c.selection_metric = "energy";
    CHECK(message(c, Command::RateSweep).find("selection_metric") == 0);
    c = base;
    c.paths = 9;
    CHECK(message(c, Command::ChannelDump).find("paths") == 0);

    c = base;
    c.decomp_streams = {0};
    CHECK(message(c, Command::DecompBench).find("decomp_streams") == 0);
    c.decomp_streams = {5};
    CHECK(message(c, Command::DecompBench).find("decomp_streams") == 0);
    c.decomp_streams = {2};
    c.decomp_targets = 0;
    CHECK(message(c, Command::DecompBench).find("decomp_targets") == 0);
}

TEST_CASE("format_real round-trips")
{
    SeededRng rng(1);
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.standard_normal() * std::pow(10.0, rng.uniform(-30.0, 30.0));
        CHECK(std::stod(format_real(x)) == x);
    }
}

TEST_CASE("rate-sweep output is deterministic")
{
    TempDir dir("sweep");
    ExperimentConfig cfg = small_sweep();
    RunOptions o;
    o.out = dir.path / "a.csv";
    o.emit_plot_data = true;
    const auto records = run_rate_sweep(cfg, o);
    o.out = dir.path / "b.csv";
    run_rate_sweep(cfg, o);
    const std::string a = slurp(dir.path / "a.csv");
    CHECK(a == slurp(dir.path / "b.csv"));
    CHECK(a.rfind("snr_db,scheme,mean_rate,std_rate,overhead_uses,trials\n", 0) == 0);
    CHECK(std::count(a.begin(), a.end(), '\n') == 13);
    CHECK(records.size() == 12);
    CHECK(fs::exists(dir.path / "a.sed-hybrid-raid.dat"));
    CHECK(fs::exists(dir.path / "a.ideal-digital.dat"));

    cfg.threads = 2;
    o.out = dir.path / "c.csv";
    o.emit_plot_data = false;
    run_rate_sweep(cfg, o);
    CHECK(a == slurp(dir.path / "c.csv"));

    cfg.master_seed = 8;
    o.out = dir.path / "d.csv";
    run_rate_sweep(cfg, o);
    CHECK(a != slurp(dir.path / "d.csv"));

    o.out = dir.path / "missing" / "e.csv";
    CHECK_THROWS_AS(run_rate_sweep(cfg, o), ConfigError);
}

TEST_CASE("decomp-bench")
{
    TempDir dir("bench");
    ExperimentConfig cfg;
    cfg.m_antennas = 64;
    cfg.rf_chains = 10;
    cfg.decomp_streams = {1, 2};
    cfg.decomp_targets = 10;
    cfg.master_seed = 3;
    RunOptions o;
    o.out = dir.path / "bench.csv";
    const auto records = run_decomp_bench(cfg, o);
    REQUIRE(records.size() == 5);

    double bcd1 = -1, closed_form = -1;
    for (const auto& r : records) {
        if (r.d == 1 && r.method == "bcd-sd")
            bcd1 = r.mean_h0;
        if (r.d == 1 && r.method == "lemma1")
            closed_form = r.mean_h0;
        if (r.method == "lemma1")
            CHECK(r.d == 1);
    }
    CHECK(std::abs(bcd1 - closed_form) < 1e-6);
    for (std::size_t d : {1u, 2u}) {
        double bcd = 0, omp = 0;
        for (const auto& r : records) {
            if (r.d == d && r.method == "bcd-sd")
                bcd = r.mean_h0;
            if (r.d == d && r.method == "omp")
                omp = r.mean_h0;
        }
        CHECK(bcd < omp);
    }
    const std::string csv = slurp(dir.path / "bench.csv");
    CHECK(csv.rfind("d,method,mean_h0,std_h0,mean_iters\n", 0) == 0);
    CHECK(csv == decomp_bench_csv(records));
    CHECK(decomp_bench_csv(decomp_bench(cfg)) == csv);

    cfg.decomp_streams = {0};
    CHECK_THROWS_AS(decomp_bench(cfg), ConfigError);
}

TEST_CASE("channel-dump")
{
    TempDir dir("dump");
    ExperimentConfig cfg;
    cfg.m_antennas = 4;
    cfg.n_antennas = 2;
    cfg.paths = 2;
    cfg.master_seed = 11;
    RunOptions o;
    o.out = dir.path / "h.csv";
    const ChannelRealization ch = run_channel_dump(cfg, o);

    const std::string csv = slurp(dir.path / "h.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
    CHECK(read_channel_csv(dir.path / "h.csv") == ch.h());
    CHECK(paths_file_for(dir.path / "h.csv") == dir.path / "h.paths.csv");
    const auto paths = read_paths_csv(dir.path / "h.paths.csv");
    REQUIRE(paths.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(paths[i].gain == ch.paths()[i].gain);
        CHECK(paths[i].aoa == ch.paths()[i].aoa);
        CHECK(paths[i].aod == ch.paths()[i].aod);
    }

    cfg.m_antennas = 32;
    cfg.n_antennas = 16;
    cfg.paths = 1;
    o.out = dir.path / "rank1.csv";
    run_channel_dump(cfg, o);
    const CMatrix h = read_channel_csv(dir.path / "rank1.csv");
    CHECK(h.rows() == 16);
    CHECK(h.cols() == 32);
    CHECK(svd(h).numerical_rank() == 1);

    o.out = dir.path / "again.csv";
    run_channel_dump(cfg, o);
    CHECK(slurp(dir.path / "again.csv") == slurp(dir.path / "rank1.csv"));

    o.out = dir.path / "nowhere" / "h.csv";
    CHECK_THROWS_AS(run_channel_dump(cfg, o), ConfigError);
}
