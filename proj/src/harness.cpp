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

#include "irsim/harness.hpp"
#include "irsim/errors.hpp"
#include "irsim/solvers.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>

namespace irsim
{

namespace
{

constexpr std::uint64_t kSolverStreamTag = 0x50171E5ULL;

unsigned resolve_threads(unsigned requested)
{
    if (requested == 0)
        requested = std::max(1u, std::thread::hardware_concurrency());
    return requested;
}

// Runs fn(i) for i in [0, count) on up to `threads` workers; one captured exception is
// rethrown once every worker has finished.
template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn fn)
{
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++)
            {
                try
                {
                    fn(i);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    for (auto &th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

std::string num(double v)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

} // namespace

std::string to_string(SolverKind kind)
{
    switch (kind)
    {
    case SolverKind::pinv: return "pinv";
    case SolverKind::block: return "block";
    case SolverKind::grid: return "grid";
    case SolverKind::coord: return "coord";
    case SolverKind::random: return "random";
    case SolverKind::ddpg: return "ddpg";
    }
    return "unknown";
}

SolverKind solver_from_string(const std::string &name)
{
    for (auto k : {SolverKind::pinv, SolverKind::block, SolverKind::grid, SolverKind::coord, SolverKind::random,
                   SolverKind::ddpg})
        if (name == to_string(k))
            return k;
    fail(ErrorCode::domain, "unknown solver '" + name + "'");
}

double objective_value(const ChannelRealization &ch, std::span<const double> phases, const LinkParams &link,
                       Objective objective)
{
    const PhaseConfig pc = PhaseConfig::from_flat(phases, ch.m());
    if (objective == Objective::desired_user)
        return received_power(ch, pc, link.losses[0], link.tx_power_mw, 0, link.alpha);
    std::vector<double> p(ch.users());
    for (std::size_t k = 0; k < p.size(); ++k)
        p[k] = received_power(ch, pc, link.losses[k], link.tx_power_mw, k, link.alpha);
    std::vector<double> g(p.size());
    for (std::size_t k = 0; k < p.size(); ++k)
        g[k] = sinr(p, k, link.noise_mw);
    return sum_rate(g);
}

SolveOptions solve_options(const ExperimentConfig &cfg)
{
    SolveOptions o;
    o.objective = cfg.objective;
    o.block_size = cfg.sweep.block_size;
    o.grid_step = cfg.sweep.grid_step;
    o.grid_budget = cfg.sweep.grid_budget;
    o.coord_sweeps = cfg.sweep.coord_sweeps;
    o.threads = resolve_threads(cfg.sweep.threads);
    return o;
}

PhaseConfig solve_realization(SolverKind kind, const Scenario &scenario, const ChannelRealization &ch,
                              const SolveOptions &opt, RngStream &rng, const Eigen::MatrixXd *a_pinv)
{
    const std::size_t m = scenario.m(), n = scenario.n();
    auto pinv = [&] {
        const PhaseSystem sys = assemble_system(ch, 0);
        return a_pinv ? solve_pinv(sys, *a_pinv) : solve_pinv(sys);
    };
    const Evaluator eval = [&](std::span<const double> x) {
        return objective_value(ch, x, scenario.link, opt.objective);
    };
    switch (kind)
    {
    case SolverKind::pinv: return pinv();
    case SolverKind::block: return solve_block(ch, opt.block_size, 0);
    case SolverKind::grid:
        return PhaseConfig::from_flat(solve_grid(eval, m + n, opt.grid_step, opt.grid_budget, opt.threads).phases, m);
    case SolverKind::coord:
        return PhaseConfig::from_flat(solve_coordinate_ascent(eval, pinv().flat(), opt.grid_step, opt.coord_sweeps).phases,
                                      m);
    case SolverKind::random: return solve_random(rng, m, n);
    case SolverKind::ddpg: break;
    }
    fail(ErrorCode::precondition, "solve_realization: ddpg needs a trained actor");
}

ChannelRealization trial_channel(const Scenario &scenario, std::uint64_t seed, std::uint64_t trial)
{
    return draw_channel(scenario.channel, seed, trial);
}

RngStream trial_stream(std::uint64_t seed, SolverKind kind, std::uint64_t trial)
{
    return RngStream(seed, stream_key({kSolverStreamTag, static_cast<std::uint64_t>(kind), trial}));
}

ScenarioConfig cell_scenario(const ScenarioConfig &base, double rho, double ratio)
{
    ScenarioConfig c = base;
    c.rho = rho;
    c.user1_distance_m = ratio * base.user2_distance_m;
    return c;
}

SweepResult run_sweep(const SweepSpec &spec, const ScenarioConfig &scenario_cfg, const TrainConfig &train_cfg)
{
    validate(spec);
    validate(scenario_cfg);
    const unsigned threads = resolve_threads(spec.threads);
    const bool has_ddpg = std::find(spec.solvers.begin(), spec.solvers.end(), SolverKind::ddpg) != spec.solvers.end();
    if (has_ddpg)
        validate(train_cfg);

    // One scenario per (rho, ratio); index rho-major.
    const std::size_t n_rho = spec.rhos.size(), n_ratio = spec.ratios.size();
    std::vector<Scenario> scenarios;
    for (double rho : spec.rhos)
        for (double ratio : spec.ratios)
        {
            const ScenarioConfig c = cell_scenario(scenario_cfg, rho, ratio);
            validate(c);
            scenarios.push_back(make_scenario(c));
        }
    const Eigen::MatrixXd a_pinv = alignment_pseudo_inverse(scenario_cfg.irs1_elements, scenario_cfg.irs2_elements);

    std::vector<MlpParams> actors(scenarios.size());
    if (has_ddpg)
        parallel_for(scenarios.size(), threads,
                     [&](std::size_t i) { actors[i] = train(train_cfg, scenarios[i]).agent.actor; });

    struct Cell
    {
        SolverKind solver;
        std::size_t scenario;
    };
    std::vector<Cell> cells;
    for (SolverKind s : spec.solvers)
        for (std::size_t ir = 0; ir < n_rho; ++ir)
            for (std::size_t iq = 0; iq < n_ratio; ++iq)
                cells.push_back({s, ir * n_ratio + iq});

    SolveOptions opt;
    opt.objective = train_cfg.objective;
    opt.block_size = spec.block_size;
    opt.grid_step = spec.grid_step;
    opt.grid_budget = spec.grid_budget;
    opt.coord_sweeps = spec.coord_sweeps;
    opt.threads = 1;

    const std::size_t trials = spec.trials;
    std::vector<std::optional<SweepRow>> slots(cells.size() * trials);
    std::vector<std::string> failures(slots.size());

    parallel_for(slots.size(), threads, [&](std::size_t job) {
        const Cell &cell = cells[job / trials];
        const std::size_t trial = job % trials;
        const Scenario &sc = scenarios[cell.scenario];
        try
        {
            const auto t0 = std::chrono::steady_clock::now();
            const ChannelRealization ch = trial_channel(sc, spec.seed, trial);
            RngStream rng = trial_stream(spec.seed, cell.solver, trial);
            PhaseConfig phases;
            if (cell.solver == SolverKind::ddpg)
            {
                const Environment env(sc, train_cfg.objective, train_cfg.reward_offset_db);
                phases = policy_phases(actors[cell.scenario], env, ch, rng);
            }
            else
                phases = solve_realization(cell.solver, sc, ch, opt, rng, &a_pinv);
            SweepRow row;
            row.solver = cell.solver;
            row.rho = sc.config.rho;
            row.ratio = spec.ratios[cell.scenario % n_ratio];
            row.trial = trial;
            row.point = evaluate(ch, phases, sc.link);
            row.phases = std::move(phases);
            if (spec.record_timing)
                row.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            slots[job] = std::move(row);
        }
        catch (const Error &e)
        {
            failures[job] = e.what();
        }
    });

    SweepResult result;
    for (std::size_t ci = 0; ci < cells.size(); ++ci)
    {
        const Cell &cell = cells[ci];
        const double rho = spec.rhos[cell.scenario / n_ratio];
        const double ratio = spec.ratios[cell.scenario % n_ratio];
        const auto first = ci * trials;
        const auto bad = std::find_if(failures.begin() + static_cast<std::ptrdiff_t>(first),
                                      failures.begin() + static_cast<std::ptrdiff_t>(first + trials),
                                      [](const std::string &s) { return !s.empty(); });
        if (bad != failures.begin() + static_cast<std::ptrdiff_t>(first + trials))
        {
            result.errors.push_back({cell.solver, rho, ratio, *bad});
            continue;
        }

        SweepAggregate agg;
        agg.solver = cell.solver;
        agg.rho = rho;
        agg.ratio = ratio;
        agg.count = trials;
        std::array<double, 6> sum{}, sq{};
        for (std::size_t t = 0; t < trials; ++t)
        {
            SweepRow &row = *slots[first + t];
            const std::array<double, 6> v = {row.point.rate[0], row.point.rate[1], row.point.sum_rate,
                                             row.point.upper_bound, row.point.p_rx[0], row.wall_s};
            for (std::size_t j = 0; j < 6; ++j)
            {
                sum[j] += v[j];
                sq[j] += v[j] * v[j];
            }
            result.rows.push_back(std::move(row));
        }
        const auto nn = static_cast<double>(trials);
        for (std::size_t j = 0; j < 6; ++j)
        {
            agg.mean[j] = sum[j] / nn;
            const double var = trials > 1 ? std::max(0.0, (sq[j] - nn * agg.mean[j] * agg.mean[j]) / (nn - 1.0)) : 0.0;
            agg.ci95[j] = 1.959963984540054 * std::sqrt(var / nn);
        }
        result.aggregates.push_back(agg);
    }
    return result;
}

void write_sweep_csv(std::ostream &os, const SweepResult &result, bool emit_trials)
{
    os << "# irsim-sweep v1\n";
    os << "solver,rho,ratio,trial,rate1,rate2,sum_rate,upper_bound,p_rx1_mw,wall_s\n";
    auto key = [](SolverKind s, double rho, double ratio) { return to_string(s) + "," + num(rho) + "," + num(ratio); };

    std::size_t row = 0;
    auto emit_cell = [&](const SweepAggregate &agg) {
        for (std::size_t t = 0; t < agg.count; ++t, ++row)
        {
            const SweepRow &r = result.rows[row];
            if (!emit_trials)
                continue;
            os << key(r.solver, r.rho, r.ratio) << ',' << r.trial << ',' << num(r.point.rate[0]) << ','
               << num(r.point.rate[1]) << ',' << num(r.point.sum_rate) << ',' << num(r.point.upper_bound) << ','
               << num(r.point.p_rx[0]) << ',' << num(r.wall_s) << '\n';
        }
        for (const auto &[label, vals] : {std::pair{"mean", &agg.mean}, std::pair{"ci95", &agg.ci95}})
        {
            os << key(agg.solver, agg.rho, agg.ratio) << ',' << label;
            for (double v : *vals)
                os << ',' << num(v);
            os << '\n';
        }
    };
    for (const auto &agg : result.aggregates)
        emit_cell(agg);
    for (const auto &e : result.errors)
        os << "# error " << key(e.solver, e.rho, e.ratio) << ": " << e.message << '\n';
}

// ---- reports --------------------------------------------------------------

ComplexityReport complexity_report(const ComplexityInput &in)
{
    for (double v : {in.m, in.n, in.k, in.xi, in.s, in.ui, in.uj, in.hidden, in.a, in.n_blk})
        if (!(v >= 1.0) || !std::isfinite(v))
            fail(ErrorCode::domain, "complexity_report: every count must be >= 1");
    ComplexityReport r;
    r.drl = in.s * in.ui + in.hidden * in.ui * in.uj + in.uj * in.a + in.a;
    const double mn = in.m * in.n;
    r.pinv = mn * mn * (in.m + in.n);
    const double blocks = mn / (in.n_blk * in.n_blk);
    r.block = blocks * blocks * ((in.m + in.n) / in.n_blk);
    r.exhaustive = in.k * std::pow(in.xi + 1.0, in.m + in.n);
    return r;
}

std::string format_complexity(const ComplexityInput &in, const ComplexityReport &r)
{
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "# M=%g N=%g K=%g Xi=%g S=%g Ui=%g Uj=%g n=%g A=%g N_blk=%g\n"
                  "scheme,operations\n"
                  "drl,%.17g\n"
                  "pinv,%.17g\n"
                  "block,%.17g\n"
                  "exhaustive,%.17g\n",
                  in.m, in.n, in.k, in.xi, in.s, in.ui, in.uj, in.hidden, in.a, in.n_blk, r.drl, r.pinv, r.block,
                  r.exhaustive);
    return buf;
}

namespace
{
std::vector<double> ranks(std::span<const double> v)
{
    std::vector<std::size_t> order(v.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < order.size();)
    {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]])
            ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            r[order[k]] = avg;
        i = j + 1;
    }
    return r;
}
} // namespace

double spearman(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2)
        fail(ErrorCode::shape, "spearman: need two equal-length samples of size >= 2");
    const auto rx = ranks(x), ry = ranks(y);
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < rx.size(); ++i)
    {
        mx += rx[i];
        my += ry[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i)
    {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        return 0.0;
    return sxy / std::sqrt(sxx * syy);
}

} // namespace irsim
