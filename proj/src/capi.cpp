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

#include "irsim/irsim_c.h"
#include "irsim/errors.hpp"
#include "irsim/harness.hpp"

#include <cstdlib>
#include <cstring>
#include <algorithm>
#include <fstream>
#include <memory>
#include <new>
#include <sstream>

struct irs_config
{
    irsim::ExperimentConfig value;
};

struct irs_solution
{
    irsim::PhaseConfig phases;
    irsim::RatePoint point;
};

namespace
{

thread_local std::string g_last_error;

int record(int status, const std::string &message)
{
    g_last_error = message;
    return status;
}

// Runs `body`, translating exceptions into status codes.
template <class Fn>
int guarded(Fn body)
{
    try
    {
        body();
        g_last_error.clear();
        return IRS_OK;
    }
    catch (const irsim::Error &e)
    {
        return record(static_cast<int>(e.code()), e.what());
    }
    catch (const std::bad_alloc &)
    {
        return record(IRS_ERR_INTERNAL, "out of memory");
    }
    catch (const std::exception &e)
    {
        return record(IRS_ERR_INTERNAL, e.what());
    }
    catch (...)
    {
        return record(IRS_ERR_INTERNAL, "unknown error");
    }
}

char *dup_string(const std::string &s)
{
    char *out = static_cast<char *>(std::malloc(s.size() + 1));
    if (!out)
        throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

#define IRS_REQUIRE(ptr)                                                                                               \
    if (!(ptr))                                                                                                        \
    return record(IRS_ERR_NULL_ARGUMENT, #ptr " must not be NULL")

std::ofstream open_out(const char *path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        irsim::fail(irsim::ErrorCode::io, std::string("cannot open '") + path + "' for writing");
    return os;
}

} // namespace

extern "C" {

const char *irs_version(void)
{
    return "1.0.0";
}

const char *irs_status_string(int status)
{
    switch (status)
    {
    case IRS_OK: return "ok";
    case IRS_ERR_DOMAIN: return "domain error";
    case IRS_ERR_SHAPE: return "shape mismatch";
    case IRS_ERR_NUMERICAL: return "numerical failure";
    case IRS_ERR_NOT_PSD: return "matrix not positive semidefinite";
    case IRS_ERR_GEOMETRY: return "degenerate geometry";
    case IRS_ERR_BUDGET: return "evaluation budget exceeded";
    case IRS_ERR_CONFIG_MISSING: return "config file missing";
    case IRS_ERR_CONFIG_PARSE: return "config parse error";
    case IRS_ERR_CONFIG_CONSTRAINT: return "config constraint violated";
    case IRS_ERR_IO: return "i/o error";
    case IRS_ERR_PRECONDITION: return "precondition violated";
    case IRS_ERR_NULL_ARGUMENT: return "null argument";
    case IRS_ERR_INTERNAL: return "internal error";
    default: return "unknown status";
    }
}

const char *irs_last_error(void)
{
    return g_last_error.c_str();
}

void irs_string_free(char *s)
{
    std::free(s);
}

int irs_config_default(irs_config **out)
{
    IRS_REQUIRE(out);
    return guarded([&] { *out = new irs_config{}; });
}

int irs_config_load(const char *path, irs_config **out)
{
    IRS_REQUIRE(path);
    IRS_REQUIRE(out);
    return guarded([&] { *out = new irs_config{irsim::load_config(path)}; });
}

int irs_config_parse(const char *text, irs_config **out)
{
    IRS_REQUIRE(text);
    IRS_REQUIRE(out);
    return guarded([&] { *out = new irs_config{irsim::parse_config(text)}; });
}

int irs_config_set(irs_config *cfg, const char *key, const char *value)
{
    IRS_REQUIRE(cfg);
    IRS_REQUIRE(key);
    IRS_REQUIRE(value);
    return guarded([&] { irsim::set_config_value(cfg->value, key, value); });
}

int irs_config_set_seed(irs_config *cfg, uint64_t seed)
{
    IRS_REQUIRE(cfg);
    return guarded([&] { irsim::set_seed(cfg->value, seed); });
}

int irs_config_validate(const irs_config *cfg)
{
    IRS_REQUIRE(cfg);
    return guarded([&] { irsim::validate(cfg->value); });
}

int irs_config_serialize(const irs_config *cfg, char **out_text)
{
    IRS_REQUIRE(cfg);
    IRS_REQUIRE(out_text);
    return guarded([&] { *out_text = dup_string(irsim::serialize_config(cfg->value)); });
}

void irs_config_free(irs_config *cfg)
{
    delete cfg;
}

int irs_run_sweep(const irs_config *cfg, const char *csv_path, char **out_text)
{
    IRS_REQUIRE(cfg);
    if (!csv_path && !out_text)
        return record(IRS_ERR_NULL_ARGUMENT, "either csv_path or out_text is required");
    return guarded([&] {
        const auto &c = cfg->value;
        irsim::validate(c);
        const irsim::SweepResult res = irsim::run_sweep(c.sweep, c.scenario, c.train);
        std::ostringstream ss;
        irsim::write_sweep_csv(ss, res, c.sweep.emit_trials);
        if (csv_path)
        {
            auto os = open_out(csv_path);
            os << ss.str();
            if (!os.flush())
                irsim::fail(irsim::ErrorCode::io, std::string("write failed for '") + csv_path + "'");
        }
        else
            *out_text = dup_string(ss.str());
    });
}

int irs_train(const irs_config *cfg, const char *checkpoint_path, const char *reward_csv_path)
{
    IRS_REQUIRE(cfg);
    return guarded([&] {
        const auto &c = cfg->value;
        irsim::validate(c);
        const irsim::Scenario sc = irsim::make_scenario(c.scenario);
        const irsim::TrainResult res = irsim::train(c.train, sc);
        if (checkpoint_path)
        {
            auto os = open_out(checkpoint_path);
            irsim::save_checkpoint(os, res);
        }
        if (reward_csv_path)
        {
            auto os = open_out(reward_csv_path);
            irsim::write_reward_csv(os, res.reward_history);
            if (!os.flush())
                irsim::fail(irsim::ErrorCode::io, std::string("write failed for '") + reward_csv_path + "'");
        }
    });
}

int irs_solve(const irs_config *cfg, const char *solver, uint64_t trial, const char *checkpoint_path,
              irs_solution **out)
{
    IRS_REQUIRE(cfg);
    IRS_REQUIRE(solver);
    IRS_REQUIRE(out);
    return guarded([&] {
        const auto &c = cfg->value;
        irsim::validate(c);
        const irsim::SolverKind kind = irsim::solver_from_string(solver);
        const irsim::Scenario sc = irsim::make_scenario(c.scenario);
        const irsim::ChannelRealization ch = irsim::trial_channel(sc, c.sweep.seed, trial);
        irsim::RngStream rng = irsim::trial_stream(c.sweep.seed, kind, trial);

        auto sol = std::make_unique<irs_solution>();
        if (kind == irsim::SolverKind::ddpg)
        {
            if (!checkpoint_path)
                irsim::fail(irsim::ErrorCode::precondition, "solver ddpg needs a checkpoint");
            std::ifstream is(checkpoint_path, std::ios::binary);
            if (!is)
                irsim::fail(irsim::ErrorCode::io, std::string("cannot open checkpoint '") + checkpoint_path + "'");
            const irsim::TrainResult tr = irsim::load_checkpoint(is);
            if (tr.agent.actor.output_size() != sc.m() + sc.n())
                irsim::fail(irsim::ErrorCode::shape, "checkpoint actor does not match M+N of the scenario");
            const irsim::Environment env(sc, c.objective, c.train.reward_offset_db);
            sol->phases = irsim::policy_phases(tr.agent.actor, env, ch, rng);
        }
        else
            sol->phases = irsim::solve_realization(kind, sc, ch, irsim::solve_options(c), rng);
        sol->point = irsim::evaluate(ch, sol->phases, sc.link);
        *out = sol.release();
    });
}

size_t irs_solution_m(const irs_solution *sol)
{
    return sol ? sol->phases.m() : 0;
}

size_t irs_solution_n(const irs_solution *sol)
{
    return sol ? sol->phases.n() : 0;
}

size_t irs_solution_phases(const irs_solution *sol, double *buf, size_t len)
{
    if (!sol || !buf)
        return 0;
    const std::vector<double> flat = sol->phases.flat();
    const size_t count = std::min(len, flat.size());
    std::copy_n(flat.begin(), count, buf);
    return count;
}

int irs_solution_rates(const irs_solution *sol, double *rate1, double *rate2, double *sum_rate, double *upper_bound,
                       double *p_rx1_mw)
{
    IRS_REQUIRE(sol);
    const auto &p = sol->point;
    if (rate1)
        *rate1 = p.rate[0];
    if (rate2)
        *rate2 = p.rate[1];
    if (sum_rate)
        *sum_rate = p.sum_rate;
    if (upper_bound)
        *upper_bound = p.upper_bound;
    if (p_rx1_mw)
        *p_rx1_mw = p.p_rx[0];
    return IRS_OK;
}

void irs_solution_free(irs_solution *sol)
{
    delete sol;
}

void irs_complexity_defaults(irs_complexity_input *in)
{
    if (!in)
        return;
    const irsim::ComplexityInput d;
    *in = {d.m, d.n, d.k, d.xi, d.s, d.ui, d.uj, d.hidden, d.a, d.n_blk};
}

namespace
{
irsim::ComplexityInput to_cpp(const irs_complexity_input &in)
{
    return {in.m, in.n, in.k, in.xi, in.s, in.ui, in.uj, in.hidden, in.a, in.n_blk};
}
} // namespace

int irs_complexity(const irs_complexity_input *in, irs_complexity_output *out)
{
    IRS_REQUIRE(in);
    IRS_REQUIRE(out);
    return guarded([&] {
        const auto r = irsim::complexity_report(to_cpp(*in));
        *out = {r.drl, r.pinv, r.block, r.exhaustive};
    });
}

int irs_complexity_table(const irs_complexity_input *in, char **out_text)
{
    IRS_REQUIRE(in);
    IRS_REQUIRE(out_text);
    return guarded([&] {
        const auto cin = to_cpp(*in);
        *out_text = dup_string(irsim::format_complexity(cin, irsim::complexity_report(cin)));
    });
}

int irs_selftest(char **out_report, int *failures)
{
    IRS_REQUIRE(out_report);
    return guarded([&] {
        const auto checks = irsim::run_selftest();
        int failed = 0;
        for (const auto &c : checks)
            failed += !c.passed;
        if (failures)
            *failures = failed;
        *out_report = dup_string(irsim::format_selftest(checks));
    });
}

} // extern "C"
