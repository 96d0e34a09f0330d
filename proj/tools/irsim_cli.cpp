// SPDX-License-Identifier: Apache-2.0
//
// irsim: cascaded-IRS terahertz uplink simulator and phase optimizer
// Copyright (C) 2026 The irsim authors
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

// Command-line front end. Talks to the library only through the C interface.

#include "irsim/irsim_c.h"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace
{

struct ConfigDeleter
{
    void operator()(irs_config *c) const { irs_config_free(c); }
};
using ConfigPtr = std::unique_ptr<irs_config, ConfigDeleter>;

struct Failure
{
    int status;
};

void check(int status)
{
    if (status != IRS_OK)
        throw Failure{status};
}

struct Common
{
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> objective;
    std::optional<std::size_t> trials;
    std::vector<std::string> overrides;
};

void add_common(CLI::App *cmd, Common &c)
{
    cmd->add_option("--config", c.config, "Configuration file (defaults apply when omitted)");
    cmd->add_option("--seed", c.seed, "Master seed");
    cmd->add_option("--objective", c.objective, "desired_user or sum_rate");
    cmd->add_option("--set", c.overrides, "Override a config key: key=value (repeatable)");
}

ConfigPtr build_config(const Common &c)
{
    irs_config *raw = nullptr;
    check(c.config.empty() ? irs_config_default(&raw) : irs_config_load(c.config.c_str(), &raw));
    ConfigPtr cfg(raw);
    for (const auto &kv : c.overrides)
    {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
        {
            std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
            throw Failure{IRS_ERR_CONFIG_PARSE};
        }
        check(irs_config_set(cfg.get(), kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
    }
    if (c.seed)
        check(irs_config_set_seed(cfg.get(), *c.seed));
    if (c.objective)
        check(irs_config_set(cfg.get(), "objective", c.objective->c_str()));
    if (c.trials)
        check(irs_config_set(cfg.get(), "trials", std::to_string(*c.trials).c_str()));
    check(irs_config_validate(cfg.get()));
    return cfg;
}

void print_owned(char *text)
{
    std::fputs(text, stdout);
    irs_string_free(text);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"irsim: cascaded-IRS terahertz uplink simulator and phase optimizer"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(irs_version()));

    Common common;

    auto *sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over correlation and distance ratio; writes CSV");
    add_common(sweep, common);
    sweep->add_option("--trials", common.trials, "Monte-Carlo trials per cell");
    std::string sweep_out, sweep_solvers;
    sweep->add_option("--out", sweep_out, "CSV output path (stdout when omitted)");
    sweep->add_option("--solver", sweep_solvers, "Comma-separated solver list");

    auto *trainc = app.add_subcommand("train", "Single DDPG training run; writes a checkpoint and a reward CSV");
    add_common(trainc, common);
    std::string ckpt_out = "irsim.ckpt", reward_out = "rewards.csv";
    trainc->add_option("--out", ckpt_out, "Checkpoint path")->capture_default_str();
    trainc->add_option("--rewards", reward_out, "Reward history CSV path")->capture_default_str();

    auto *solve = app.add_subcommand("solve", "Solve one channel realization and print phases and rates");
    add_common(solve, common);
    std::string solver = "pinv", checkpoint;
    std::uint64_t trial = 0;
    solve->add_option("--solver", solver, "pinv, block, grid, coord, random or ddpg")->capture_default_str();
    solve->add_option("--trial", trial, "Realization index")->capture_default_str();
    solve->add_option("--checkpoint", checkpoint, "Checkpoint for the ddpg solver");

    auto *complexity = app.add_subcommand("complexity", "Operation counts of each scheme");
    irs_complexity_input cin{};
    irs_complexity_defaults(&cin);
    complexity->add_option("--m", cin.m, "IRS1 elements")->capture_default_str();
    complexity->add_option("--n", cin.n, "IRS2 elements")->capture_default_str();
    complexity->add_option("--k", cin.k, "Users")->capture_default_str();
    complexity->add_option("--xi", cin.xi, "Grid points per phase minus one")->capture_default_str();
    complexity->add_option("--s", cin.s, "State size")->capture_default_str();
    complexity->add_option("--ui", cin.ui, "First hidden width")->capture_default_str();
    complexity->add_option("--uj", cin.uj, "Second hidden width")->capture_default_str();
    complexity->add_option("--hidden", cin.hidden, "Hidden-to-hidden products")->capture_default_str();
    std::optional<double> action;
    complexity->add_option("--a", action, "Action size (default M+N)");
    complexity->add_option("--nblk", cin.n_blk, "Block size")->capture_default_str();

    auto *selftest = app.add_subcommand("selftest", "Run the built-in invariant checks");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForVersion &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try
    {
        if (*sweep)
        {
            ConfigPtr cfg = build_config(common);
            if (!sweep_solvers.empty())
                check(irs_config_set(cfg.get(), "solvers", sweep_solvers.c_str()));
            if (sweep_out.empty())
            {
                char *text = nullptr;
                check(irs_run_sweep(cfg.get(), nullptr, &text));
                print_owned(text);
            }
            else
                check(irs_run_sweep(cfg.get(), sweep_out.c_str(), nullptr));
        }
        else if (*trainc)
        {
            ConfigPtr cfg = build_config(common);
            check(irs_train(cfg.get(), ckpt_out.c_str(), reward_out.c_str()));
            std::printf("checkpoint: %s\nrewards: %s\n", ckpt_out.c_str(), reward_out.c_str());
        }
        else if (*solve)
        {
            ConfigPtr cfg = build_config(common);
            irs_solution *sol = nullptr;
            check(irs_solve(cfg.get(), solver.c_str(), trial, checkpoint.empty() ? nullptr : checkpoint.c_str(), &sol));
            const std::size_t m = irs_solution_m(sol), n = irs_solution_n(sol);
            std::vector<double> phases(m + n);
            irs_solution_phases(sol, phases.data(), phases.size());
            double r1, r2, sr, ub, p1;
            irs_solution_rates(sol, &r1, &r2, &sr, &ub, &p1);
            irs_solution_free(sol);
            std::printf("solver %s trial %llu\n", solver.c_str(), static_cast<unsigned long long>(trial));
            std::printf("eta");
            for (std::size_t i = 0; i < m; ++i)
                std::printf(" %.9f", phases[i]);
            std::printf("\npsi");
            for (std::size_t i = 0; i < n; ++i)
                std::printf(" %.9f", phases[m + i]);
            std::printf("\nrate1 %.12g\nrate2 %.12g\nsum_rate %.12g\nupper_bound %.12g\np_rx1_mw %.12g\n", r1, r2,
                        sr, ub, p1);
        }
        else if (*complexity)
        {
            cin.a = action.value_or(cin.m + cin.n);
            char *text = nullptr;
            check(irs_complexity_table(&cin, &text));
            print_owned(text);
        }
        else if (*selftest)
        {
            char *text = nullptr;
            int failures = 0;
            check(irs_selftest(&text, &failures));
            print_owned(text);
            return failures == 0 ? 0 : 1;
        }
    }
    catch (const Failure &f)
    {
        const char *msg = irs_last_error();
        std::fprintf(stderr, "error: %s%s%s\n", irs_status_string(f.status), *msg ? ": " : "", msg);
        return 1;
    }
    return 0;
}
