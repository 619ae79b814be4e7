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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "hsed/channel.hpp"
#include "hsed/evaluation.hpp"

namespace hsed {

enum class Command { RateSweep, DecompBench, ChannelDump };

struct ExperimentConfig {
    std::string name = "experiment";
    std::size_t m_antennas = 64;
    std::size_t n_antennas = 32;
    std::size_t rf_chains = 8;
    std::size_t streams = 2;
    std::size_t paths = 4;
    std::size_t arnoldi_steps = 4;
    std::vector<double> snr_db{-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0};
    std::size_t trials = 1;
    std::uint64_t master_seed = 0;
    std::vector<std::string> schemes{"sed-hybrid-raid", "independent-sounding", "ideal-digital"};
    std::string mode = "hybrid-raid"; ///< digital | hybrid-raid
    std::size_t bcd_max_iters = 500;
    double bcd_tol = 1e-8;
    bool warm_start = false;
    std::string output_path;          ///< empty: <name>.csv
    std::vector<std::size_t> decomp_streams{1, 2, 4, 6};
    std::size_t decomp_targets = 100;
    bool estimation_noise = false;
    std::string selection_metric = "frobenius"; ///< frobenius | largest-sv
    std::size_t threads = 1;

    /// Throws ConfigError naming the offending field.
    void validate(Command cmd) const;
    MonteCarloPlan monte_carlo_plan() const;
    std::filesystem::path output() const;
};

/// Flat `key = value` text, `#` comments, comma-separated lists.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

/// 17 significant digits.
std::string format_real(double x);

struct RunOptions {
    std::optional<std::filesystem::path> out;
    bool emit_plot_data = false;
};

std::string rate_sweep_csv(const std::vector<RateRecord>& records);
std::vector<RateRecord> run_rate_sweep(const ExperimentConfig& cfg, const RunOptions& opts = {});

struct DecompRecord {
    std::size_t d = 0;
    std::string method;
    double mean_h0 = 0.0;
    double std_h0 = 0.0;
    double mean_iters = 0.0;
};

std::vector<DecompRecord> decomp_bench(const ExperimentConfig& cfg);
std::string decomp_bench_csv(const std::vector<DecompRecord>& records);
std::vector<DecompRecord> run_decomp_bench(const ExperimentConfig& cfg, const RunOptions& opts = {});

/// Writes `<out>` (entries) and `<stem>.paths.csv` next to it.
ChannelRealization run_channel_dump(const ExperimentConfig& cfg, const RunOptions& opts = {});
std::filesystem::path paths_file_for(const std::filesystem::path& entries);

CMatrix read_channel_csv(const std::filesystem::path& entries);
std::vector<PathParams> read_paths_csv(const std::filesystem::path& paths);

} // namespace hsed
