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

#include "hsed/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <fmt/format.h>

#include "hsed/decomposition.hpp"
#include "hsed/errors.hpp"
#include "hsed/linalg.hpp"

namespace hsed {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v)
{
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty())
            out.push_back(std::move(t));
    return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& text)
{
    T value{};
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end)
        throw ConfigError(fmt::format("{}: cannot parse '{}'", key, text));
    if constexpr (std::is_floating_point_v<T>)
        if (!std::isfinite(value))
            throw ConfigError(fmt::format("{}: value must be finite", key));
    return value;
}

bool parse_bool(const std::string& key, const std::string& text)
{
    if (text == "true" || text == "yes" || text == "1")
        return true;
    if (text == "false" || text == "no" || text == "0")
        return false;
    throw ConfigError(fmt::format("{}: expected true or false, got '{}'", key, text));
}

template <typename T>
std::vector<T> parse_number_list(const std::string& key, const std::string& text)
{
    std::vector<T> out;
    for (const auto& item : split_list(text))
        out.push_back(parse_number<T>(key, item));
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path() && !std::filesystem::is_directory(path.parent_path()))
        throw ConfigError(fmt::format("output_path: directory '{}' does not exist", path.parent_path().string()));
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw ConfigError(fmt::format("output_path: cannot open '{}' for writing", path.string()));
    out << content;
    out.close();
    if (!out)
        throw ConfigError(fmt::format("output_path: failed writing '{}'", path.string()));
}

std::filesystem::path sibling(const std::filesystem::path& base, const std::string& suffix)
{
    return base.parent_path() / (base.stem().string() + suffix);
}

double mean_of(const std::vector<double>& x)
{
    double s = 0.0;
    for (double v : x)
        s += v;
    return s / static_cast<double>(x.size());
}

double sample_std(const std::vector<double>& x, double mean)
{
    if (x.size() < 2)
        return 0.0;
    double s = 0.0;
    for (double v : x)
        s += (v - mean) * (v - mean);
    return std::sqrt(s / static_cast<double>(x.size() - 1));
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path, const std::string& header)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(fmt::format("cannot open '{}'", path.string()));
    std::string line;
    if (!std::getline(in, line) || trim(line) != header)
        throw ConfigError(fmt::format("'{}': expected header '{}'", path.string(), header));
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (trim(line).empty())
            continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            cells.push_back(trim(cell));
        rows.push_back(std::move(cells));
    }
    return rows;
}

} // namespace

std::string format_real(double x)
{
    return fmt::format("{:.17g}", x);
}

ExperimentConfig parse_config(const std::string& text)
{
    ExperimentConfig c;
    std::set<std::string> seen;
    std::stringstream ss(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(ss, raw)) {
        ++lineno;
        if (const auto hash = raw.find('#'); hash != std::string::npos)
            raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(fmt::format("line {}: expected 'key = value'", lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!seen.insert(key).second)
            throw ConfigError(fmt::format("{}: duplicate key on line {}", key, lineno));

        if (key == "name")
            c.name = value;
        else if (key == "m_antennas")
            c.m_antennas = parse_number<std::size_t>(key, value);
        else if (key == "n_antennas")
            c.n_antennas = parse_number<std::size_t>(key, value);
        else if (key == "rf_chains")
            c.rf_chains = parse_number<std::size_t>(key, value);
        else if (key == "streams")
            c.streams = parse_number<std::size_t>(key, value);
        else if (key == "paths")
            c.paths = parse_number<std::size_t>(key, value);
        else if (key == "arnoldi_steps")
            c.arnoldi_steps = parse_number<std::size_t>(key, value);
        else if (key == "snr_db")
            c.snr_db = parse_number_list<double>(key, value);
        else if (key == "trials")
            c.trials = parse_number<std::size_t>(key, value);
        else if (key == "master_seed")
            c.master_seed = parse_number<std::uint64_t>(key, value);
        else if (key == "schemes")
            c.schemes = split_list(value);
        else if (key == "mode")
            c.mode = value;
        else if (key == "bcd_max_iters")
            c.bcd_max_iters = parse_number<std::size_t>(key, value);
        else if (key == "bcd_tol")
            c.bcd_tol = parse_number<double>(key, value);
        else if (key == "warm_start")
            c.warm_start = parse_bool(key, value);
        else if (key == "output_path")
            c.output_path = value;
        else if (key == "decomp_streams")
            c.decomp_streams = parse_number_list<std::size_t>(key, value);
        else if (key == "decomp_targets")
            c.decomp_targets = parse_number<std::size_t>(key, value);
        else if (key == "estimation_noise")
            c.estimation_noise = parse_bool(key, value);
        else if (key == "selection_metric")
            c.selection_metric = value;
        else if (key == "threads")
            c.threads = parse_number<std::size_t>(key, value);
        else
            throw ConfigError(fmt::format("{}: unknown key on line {}", key, lineno));
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(fmt::format("config: cannot open '{}'", path.string()));
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

void ExperimentConfig::validate(Command cmd) const
{
    if (name.empty())
        throw ConfigError("name: must not be empty");
    if (m_antennas == 0)
        throw ConfigError("m_antennas: must be at least 1");
    if (n_antennas == 0)
        throw ConfigError("n_antennas: must be at least 1");
    if (paths == 0 || paths > std::min(m_antennas, n_antennas))
        throw ConfigError("paths: need 1 <= paths <= min(m_antennas, n_antennas)");
    if (cmd == Command::ChannelDump)
        return;

    if (!(bcd_tol >= 0.0))
        throw ConfigError("bcd_tol: must be non-negative");
    if (bcd_max_iters == 0)
        throw ConfigError("bcd_max_iters: must be at least 1");

    if (cmd == Command::DecompBench) {
        if (rf_chains == 0 || rf_chains > m_antennas)
            throw ConfigError("rf_chains: need 1 <= rf_chains <= m_antennas");
        if (decomp_streams.empty())
            throw ConfigError("decomp_streams: at least one value is required");
        for (std::size_t d : decomp_streams)
            if (d == 0 || d > rf_chains)
                throw ConfigError(fmt::format("decomp_streams: need 1 <= d <= rf_chains, got {}", d));
        if (decomp_targets == 0)
            throw ConfigError("decomp_targets: must be at least 1");
        return;
    }

    if (streams == 0)
        throw ConfigError("streams: must be at least 1");
    if (rf_chains < streams)
        throw ConfigError("rf_chains: must be at least streams");
    if (rf_chains > std::min(m_antennas, n_antennas))
        throw ConfigError("rf_chains: must not exceed min(m_antennas, n_antennas)");
    if (mode != "digital" && mode != "hybrid-raid")
        throw ConfigError(fmt::format("mode: expected digital or hybrid-raid, got '{}'", mode));
    if (mode == "hybrid-raid") {
        if (m_antennas % rf_chains != 0)
            throw ConfigError("rf_chains: must divide m_antennas in hybrid-raid mode");
        if (n_antennas % rf_chains != 0)
            throw ConfigError("rf_chains: must divide n_antennas in hybrid-raid mode");
    }
    for (const auto& s : schemes) {
        const Scheme sc = parse_scheme(s);
        if (mode == "digital" && (sc == Scheme::SedHybridRaid || sc == Scheme::IndependentSounding))
            throw ConfigError(fmt::format("schemes: '{}' requires mode = hybrid-raid", s));
    }
    if (std::set<std::string>(schemes.begin(), schemes.end()).size() != schemes.size())
        throw ConfigError("schemes: duplicate entry");
    if (selection_metric != "frobenius" && selection_metric != "largest-sv")
        throw ConfigError(fmt::format("selection_metric: expected frobenius or largest-sv, got '{}'",
                                      selection_metric));
    monte_carlo_plan().validate();
}

MonteCarloPlan ExperimentConfig::monte_carlo_plan() const
{
    MonteCarloPlan s;
    s.num_tx = m_antennas;
    s.num_rx = n_antennas;
    s.rf_chains = rf_chains;
    s.streams = streams;
    s.paths = paths;
    s.arnoldi_steps = arnoldi_steps;
    s.snr_db = snr_db;
    s.trials = trials;
    s.master_seed = master_seed;
    s.schemes.clear();
    for (const auto& name : schemes)
        s.schemes.push_back(parse_scheme(name));
    s.bcd.max_iters = bcd_max_iters;
    s.bcd.tol = bcd_tol;
    s.bcd.warm_start = warm_start;
    s.estimation_noise = estimation_noise;
    s.selection_metric =
        selection_metric == "largest-sv" ? SelectionMetric::LargestSingularValue : SelectionMetric::Frobenius;
    s.threads = threads;
    return s;
}

std::filesystem::path ExperimentConfig::output() const
{
    return output_path.empty() ? std::filesystem::path(name + ".csv") : std::filesystem::path(output_path);
}

std::string rate_sweep_csv(const std::vector<RateRecord>& records)
{
    std::string out = "snr_db,scheme,mean_rate,std_rate,overhead_uses,trials\n";
    for (const auto& r : records)
        out += fmt::format("{},{},{},{},{},{}\n", format_real(r.snr_db), r.scheme, format_real(r.mean_rate),
                           format_real(r.std_rate), r.overhead_uses, r.trials);
    return out;
}

std::vector<RateRecord> run_rate_sweep(const ExperimentConfig& cfg, const RunOptions& opts)
{
    cfg.validate(Command::RateSweep);
    const auto records = monte_carlo_rate(cfg.monte_carlo_plan());
    const auto path = opts.out.value_or(cfg.output());
    write_file(path, rate_sweep_csv(records));
    if (opts.emit_plot_data) {
        std::map<std::string, std::string> curves;
        for (const auto& r : records)
            curves[r.scheme] += fmt::format("{} {}\n", format_real(r.snr_db), format_real(r.mean_rate));
        for (const auto& [scheme, body] : curves)
            write_file(sibling(path, "." + scheme + ".dat"), body);
    }
    return records;
}

std::vector<DecompRecord> decomp_bench(const ExperimentConfig& cfg)
{
    cfg.validate(Command::DecompBench);
    const std::size_t m = cfg.m_antennas;
    const CMatrix dictionary = dft_matrix(m);
    std::vector<DecompRecord> out;

    for (std::size_t d : cfg.decomp_streams) {
        std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> stats;
        for (std::size_t t = 0; t < cfg.decomp_targets; ++t) {
            const std::uint64_t seed = derive_seed(derive_seed(cfg.master_seed, d), t);
            SeededRng rng(seed);
            const CMatrix target = qr_thin(complex_gaussian(rng, m, d, 1.0)).q;

            BcdOptions bo;
            bo.max_iters = cfg.bcd_max_iters;
            bo.tol = cfg.bcd_tol;
            bo.warm_start = cfg.warm_start;
            bo.seed = derive_seed(seed, 1);
            const DecompositionResult bcd = bcd_sd(target, bo);
            stats["bcd-sd"].first.push_back(bcd.objective);
            stats["bcd-sd"].second.push_back(static_cast<double>(bcd.iterations));

            const DecompositionResult omp = omp_decompose(target, dictionary, cfg.rf_chains);
            stats["omp"].first.push_back(omp.objective);
            stats["omp"].second.push_back(static_cast<double>(omp.iterations));

            if (d == 1) {
                const BeamformResult bf = beamform_decompose(target.col(0));
                const double e = bf.error.norm();
                stats["lemma1"].first.push_back(e * e);
                stats["lemma1"].second.push_back(0.0);
            }
        }
        for (const auto& [method, s] : stats) {
            const double mh = mean_of(s.first);
            out.push_back({d, method, mh, sample_std(s.first, mh), mean_of(s.second)});
        }
    }
    return out;
}

std::string decomp_bench_csv(const std::vector<DecompRecord>& records)
{
    std::string out = "d,method,mean_h0,std_h0,mean_iters\n";
    for (const auto& r : records)
        out += fmt::format("{},{},{},{},{}\n", r.d, r.method, format_real(r.mean_h0), format_real(r.std_h0),
                           format_real(r.mean_iters));
    return out;
}

std::vector<DecompRecord> run_decomp_bench(const ExperimentConfig& cfg, const RunOptions& opts)
{
    const auto records = decomp_bench(cfg);
    const auto path = opts.out.value_or(cfg.output());
    write_file(path, decomp_bench_csv(records));
    if (opts.emit_plot_data) {
        std::map<std::string, std::string> curves;
        for (const auto& r : records)
            curves[r.method] += fmt::format("{} {}\n", r.d, format_real(r.mean_h0));
        for (const auto& [method, body] : curves)
            write_file(sibling(path, "." + method + ".dat"), body);
    }
    return records;
}

std::filesystem::path paths_file_for(const std::filesystem::path& entries)
{
    return sibling(entries, ".paths.csv");
}

ChannelRealization run_channel_dump(const ExperimentConfig& cfg, const RunOptions& opts)
{
    cfg.validate(Command::ChannelDump);
    ChannelRealization ch = gen_channel({cfg.m_antennas, cfg.n_antennas, cfg.paths, cfg.master_seed});
    const auto path = opts.out.value_or(cfg.output());

    std::string entries = "row,col,re,im\n";
    const CMatrix& h = ch.h();
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < h.cols(); ++j)
            entries += fmt::format("{},{},{},{}\n", i, j, format_real(h(i, j).real()), format_real(h(i, j).imag()));
    write_file(path, entries);

    std::string paths = "i,beta_re,beta_im,aoa_rad,aod_rad\n";
    for (std::size_t i = 0; i < ch.paths().size(); ++i) {
        const auto& p = ch.paths()[i];
        paths += fmt::format("{},{},{},{},{}\n", i, format_real(p.gain.real()), format_real(p.gain.imag()),
                             format_real(p.aoa), format_real(p.aod));
    }
    write_file(paths_file_for(path), paths);

    if (opts.emit_plot_data) {
        std::string sv;
        const auto& s = ch.ground_truth().singular_values;
        for (std::size_t i = 0; i < s.size(); ++i)
            sv += fmt::format("{} {}\n", i, format_real(s[i]));
        write_file(sibling(path, ".singular_values.dat"), sv);
    }
    return ch;
}

CMatrix read_channel_csv(const std::filesystem::path& entries)
{
    const auto rows = read_csv(entries, "row,col,re,im");
    std::size_t n_rows = 0, n_cols = 0;
    std::vector<std::tuple<std::size_t, std::size_t, cplx>> cells;
    for (const auto& r : rows) {
        if (r.size() != 4)
            throw ConfigError(fmt::format("'{}': malformed row", entries.string()));
        const auto i = parse_number<std::size_t>("row", r[0]);
        const auto j = parse_number<std::size_t>("col", r[1]);
        cells.emplace_back(i, j, cplx{parse_number<double>("re", r[2]), parse_number<double>("im", r[3])});
        n_rows = std::max(n_rows, i + 1);
        n_cols = std::max(n_cols, j + 1);
    }
    if (cells.size() != n_rows * n_cols)
        throw ConfigError(fmt::format("'{}': expected {} entries, found {}", entries.string(), n_rows * n_cols,
                                      cells.size()));
    CMatrix h(n_rows, n_cols);
    for (const auto& [i, j, v] : cells)
        h(i, j) = v;
    return h;
}

std::vector<PathParams> read_paths_csv(const std::filesystem::path& paths)
{
    std::vector<PathParams> out;
    for (const auto& r : read_csv(paths, "i,beta_re,beta_im,aoa_rad,aod_rad")) {
        if (r.size() != 5)
            throw ConfigError(fmt::format("'{}': malformed row", paths.string()));
        out.push_back({cplx{parse_number<double>("beta_re", r[1]), parse_number<double>("beta_im", r[2])},
                       parse_number<double>("aoa_rad", r[3]), parse_number<double>("aod_rad", r[4])});
    }
    return out;
}

} // namespace hsed
