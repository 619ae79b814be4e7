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

#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hsed/errors.hpp"
#include "hsed/experiment.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;

struct Flags {
    std::string config;
    std::uint64_t seed = 0;
    std::string out;
    bool emit_plot_data = false;
};

CLI::App* add_command(CLI::App& app, const std::string& name, const std::string& help, Flags& flags,
                      CLI::Option*& seed_opt)
{
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config, "experiment config file")->required();
    seed_opt = sub->add_option("--seed", flags.seed, "override master_seed");
    sub->add_option("--out", flags.out, "output CSV path (overrides output_path)");
    sub->add_flag("--emit-plot-data", flags.emit_plot_data, "also write two-column per-curve files");
    return sub;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"hybrid mmWave subspace estimation experiments"};
    app.require_subcommand(1);
    Flags flags;
    CLI::Option* seed_opts[3] = {};
    CLI::App* sweep = add_command(app, "rate-sweep", "average user rate versus SNR", flags, seed_opts[0]);
    CLI::App* bench = add_command(app, "decomp-bench", "subspace decomposition quality", flags, seed_opts[1]);
    CLI::App* dump = add_command(app, "channel-dump", "write one channel realization as CSV", flags, seed_opts[2]);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kConfigError;
    }

    try {
        hsed::ExperimentConfig cfg = hsed::load_config(flags.config);
        for (auto* o : seed_opts)
            if (o != nullptr && o->count() > 0)
                cfg.master_seed = flags.seed;
        hsed::RunOptions opts;
        if (!flags.out.empty())
            opts.out = flags.out;
        opts.emit_plot_data = flags.emit_plot_data;

        if (sweep->parsed())
            hsed::run_rate_sweep(cfg, opts);
        else if (bench->parsed())
            hsed::run_decomp_bench(cfg, opts);
        else if (dump->parsed())
            hsed::run_channel_dump(cfg, opts);
        return 0;
    } catch (const hsed::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const hsed::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const hsed::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
