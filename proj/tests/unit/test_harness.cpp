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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "irsim/errors.hpp"
#include "irsim/harness.hpp"
#include "irsim/solvers.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace irsim;

namespace
{
ErrorCode code_of(auto &&fn)
{
    try
    {
        fn();
    }
    catch (const Error &e)
    {
        return e.code();
    }
    return ErrorCode{};
}

std::string error_text(auto &&fn)
{
    try
    {
        fn();
    }
    catch (const Error &e)
    {
        return e.what();
    }
    return {};
}

SweepSpec small_spec()
{
    SweepSpec s;
    s.solvers = {SolverKind::pinv, SolverKind::block, SolverKind::random};
    s.ratios = {0.4, 1.0};
    s.rhos = {0.5, 0.9};
    s.trials = 6;
    s.block_size = 2;
    return s;
}

ScenarioConfig small_config()
{
    ScenarioConfig c;
    c.irs1_elements = 4;
    c.irs2_elements = 4;
    c.tx_power_mw = 1e9;
    return c;
}

std::string csv_of(const SweepResult &r, bool trials = true)
{
    std::ostringstream os;
    write_sweep_csv(os, r, trials);
    return os.str();
}
} // namespace

TEST_CASE("solver names")
{
    for (SolverKind k : {SolverKind::pinv, SolverKind::block, SolverKind::grid, SolverKind::coord,
                         SolverKind::random, SolverKind::ddpg})
        CHECK(solver_from_string(to_string(k)) == k);
    CHECK_THROWS_AS(solver_from_string("sdr"), Error);
}

TEST_CASE("empty configuration yields the table defaults")
{
    const ExperimentConfig c = parse_config("");
    CHECK(c.scenario.frequency_hz == 300e9);
    CHECK(c.scenario.bandwidth_hz == 2e9);
    CHECK(c.scenario.irs1_elements == 18);
    CHECK(c.scenario.irs2_elements == 18);
    CHECK(c.scenario.noise_psd_dbm_hz == -174.0);
    CHECK(c.scenario.noise_figure_db == 10.0);
    CHECK(c.scenario.user2_distance_m == 15.0);
    CHECK(c.train.batch_size == 128);
    CHECK(c.train.buffer_capacity == 100000);
    CHECK(c.train.discount == 0.99);
    CHECK(c.train.tau == 1e-3);
    CHECK(c.train.actor_lr == 1e-4);
    CHECK(c.train.critic_lr == 3e-4);
    CHECK(c.train.hidden_units == 128);
    CHECK(c.sweep.trials == 1000);
    CHECK(c.sweep.rhos == std::vector<double>{0.25, 0.5, 0.75, 0.9, 1.0});
    CHECK(c.sweep.ratios == std::vector<double>{0.2, 0.4, 0.6, 0.8, 1.0});
    const Scenario s = make_scenario(c.scenario);
    CHECK(s.link.noise_mw == doctest::Approx(7.9621e-8).epsilon(1e-4));
}

TEST_CASE("configuration parsing")
{
    const ExperimentConfig c = parse_config("# comment\n"
                                            "rho = 0.25   # trailing comment\n"
                                            "\n"
                                            "  irs1_elements=4\n"
                                            "irs2_elements = 6\n"
                                            "objective = desired_user\n"
                                            "solvers = pinv, grid\n"
                                            "ratios = 0.5, 1\n"
                                            "irs1_normal = 0, 1, 0\n"
                                            "corr_theta = 0.3\n"
                                            "record_timing = true\n"
                                            "seed = 17\n");
    CHECK(c.scenario.rho == 0.25);
    CHECK(c.scenario.irs1_elements == 4);
    CHECK(c.scenario.irs2_elements == 6);
    CHECK(c.objective == Objective::desired_user);
    CHECK(c.train.objective == Objective::desired_user);
    CHECK(c.sweep.solvers == std::vector<SolverKind>{SolverKind::pinv, SolverKind::grid});
    CHECK(c.sweep.ratios == std::vector<double>{0.5, 1.0});
    REQUIRE(c.scenario.irs1_normal.has_value());
    CHECK(*c.scenario.irs1_normal == Vec3{0.0, 1.0, 0.0});
    CHECK(c.scenario.corr_theta == 0.3);
    CHECK(c.sweep.record_timing);
    CHECK(c.scenario.seed == 17);
    CHECK(c.train.seed == 17);
    CHECK(c.sweep.seed == 17);
}

TEST_CASE("configuration errors are distinct")
{
    CHECK(code_of([] { parse_config("rho = 1.5\n"); }) == ErrorCode::config_constraint);
    CHECK(error_text([] { parse_config("rho = 1.5\n"); }).find("rho") != std::string::npos);
    CHECK(code_of([] { parse_config("bogus = 1\n"); }) == ErrorCode::config_parse);
    CHECK(code_of([] { parse_config("rho 0.5\n"); }) == ErrorCode::config_parse);
    CHECK(code_of([] { parse_config("rho = abc\n"); }) == ErrorCode::config_parse);
    CHECK(code_of([] { parse_config("rho = 0.5\nrho = 0.6\n"); }) == ErrorCode::config_parse);
    CHECK(code_of([] { parse_config("solvers = pinv, magic\n"); }) == ErrorCode::config_parse);
    CHECK(code_of([] { parse_config("ratios = 0\n"); }) == ErrorCode::config_constraint);
    CHECK(code_of([] { parse_config("trials = 0\n"); }) == ErrorCode::config_constraint);
    CHECK(code_of([] { parse_config("discount = 1\n"); }) == ErrorCode::config_constraint);
    const std::string where = error_text([] { parse_config("\n\nbogus = 1\n", "lab.cfg"); });
    CHECK(where.find("lab.cfg:3") != std::string::npos);
    CHECK(code_of([] { load_config("/nonexistent/dir/missing.cfg"); }) == ErrorCode::config_missing);
    CHECK(error_text([] { load_config("/nonexistent/dir/missing.cfg"); }).find("missing.cfg") != std::string::npos);
}

TEST_CASE("configuration round-trips through text")
{
    ExperimentConfig c;
    set_config_value(c, "tx_power_mw", "123456.789");
    set_config_value(c, "rho", "0.1");
    set_config_value(c, "irs2_normal", "1, -2, 0.5");
    set_config_value(c, "solvers", "ddpg, coord");
    set_config_value(c, "objective", "desired_user");
    set_config_value(c, "los_mode", "steering");
    set_config_value(c, "actor_lr", "3e-4");
    set_seed(c, 99);
    const std::string text = serialize_config(c);
    const ExperimentConfig back = parse_config(text);
    CHECK(back == c);
    CHECK(serialize_config(back) == text);
    CHECK(parse_config(serialize_config(ExperimentConfig{})) == ExperimentConfig{});

    const auto path = std::filesystem::temp_directory_path() / "irsim_roundtrip_test.cfg";
    {
        std::ofstream f(path);
        f << text;
    }
    CHECK(load_config(path.string()) == c);
    std::filesystem::remove(path);
}

TEST_CASE("objective values")
{
    const Scenario s = testing::small_scenario(2, 2);
    const ChannelRealization ch = trial_channel(s, 3, 0);
    const std::vector<double> x{0.1, 0.2, 0.3, 0.4};
    const RatePoint pt = evaluate(ch, PhaseConfig::from_flat(x, 2), s.link);
    CHECK(objective_value(ch, x, s.link, Objective::sum_rate) == doctest::Approx(pt.sum_rate).epsilon(1e-14));
    CHECK(objective_value(ch, x, s.link, Objective::desired_user) == doctest::Approx(pt.p_rx[0]).epsilon(1e-14));
}

TEST_CASE("trial channels and streams are addressable")
{
    const Scenario s = testing::small_scenario(3, 3);
    const ChannelRealization a = trial_channel(s, 5, 7), b = trial_channel(s, 5, 7), c = trial_channel(s, 5, 8);
    CHECK(a.h_mn == b.h_mn);
    CHECK(a.h_mn != c.h_mn);
    RngStream r1 = trial_stream(5, SolverKind::random, 1), r2 = trial_stream(5, SolverKind::random, 1);
    CHECK(r1.next_u64() == r2.next_u64());
    RngStream r3 = trial_stream(5, SolverKind::ddpg, 1);
    RngStream r4 = trial_stream(5, SolverKind::random, 1);
    CHECK(r3.next_u64() != r4.next_u64());
}

TEST_CASE("solve_realization dispatches every classical solver")
{
    const Scenario s = testing::small_scenario(2, 2, 0.9);
    const ChannelRealization ch = trial_channel(s, 1, 0);
    SolveOptions opt;
    opt.block_size = 1;
    opt.grid_step = std::numbers::pi / 4.0;
    RngStream rng(1, 0);
    const PhaseConfig pinv = solve_realization(SolverKind::pinv, s, ch, opt, rng);
    CHECK(pinv == solve_pinv(assemble_system(ch, 0)));
    CHECK(solve_realization(SolverKind::block, s, ch, opt, rng) == solve_block(ch, 1, 0));
    const PhaseConfig grid = solve_realization(SolverKind::grid, s, ch, opt, rng);
    const PhaseConfig coord = solve_realization(SolverKind::coord, s, ch, opt, rng);
    const Evaluator eval = [&](std::span<const double> x) {
        return objective_value(ch, x, s.link, Objective::sum_rate);
    };
    CHECK(grid.flat() == solve_grid(eval, 4, opt.grid_step, opt.grid_budget).phases);
    CHECK(objective_value(ch, coord.flat(), s.link, Objective::sum_rate) >=
          objective_value(ch, pinv.flat(), s.link, Objective::sum_rate));
    RngStream a(2, 0), b(2, 0);
    CHECK(solve_realization(SolverKind::random, s, ch, opt, a) == solve_random(b, 2, 2));
    CHECK(code_of([&] { solve_realization(SolverKind::ddpg, s, ch, opt, rng); }) == ErrorCode::precondition);
    opt.grid_budget = 10;
    CHECK(code_of([&] { solve_realization(SolverKind::grid, s, ch, opt, rng); }) == ErrorCode::budget);
}

TEST_CASE("cell scenarios place user 1 by ratio")
{
    const ScenarioConfig c = cell_scenario(ScenarioConfig{}, 0.75, 0.4);
    CHECK(c.rho == 0.75);
    CHECK(c.user1_distance_m == doctest::Approx(6.0));
    CHECK(c.user2_distance_m == 15.0);
}

TEST_CASE("sweep rows re-evaluate from their phases")
{
    const SweepResult r = run_sweep(small_spec(), small_config(), TrainConfig{});
    CHECK(r.errors.empty());
    CHECK(r.rows.size() == 3 * 2 * 2 * 6);
    CHECK(r.aggregates.size() == 3 * 2 * 2);
    for (const SweepRow &row : r.rows)
    {
        const Scenario sc = make_scenario(cell_scenario(small_config(), row.rho, row.ratio));
        const ChannelRealization ch = trial_channel(sc, 1, row.trial);
        const RatePoint pt = evaluate(ch, row.phases, sc.link);
        CHECK(pt.sum_rate == row.point.sum_rate);
        CHECK(pt.rate[0] == row.point.rate[0]);
        CHECK(pt.p_rx[0] == row.point.p_rx[0]);
        CHECK(row.point.sum_rate <= row.point.upper_bound + 1e-9);
        CHECK(row.wall_s == 0.0);
    }
}

TEST_CASE("sweep aggregates")
{
    const SweepResult r = run_sweep(small_spec(), small_config(), TrainConfig{});
    std::size_t offset = 0;
    for (const SweepAggregate &a : r.aggregates)
    {
        REQUIRE(a.count == 6);
        double sum = 0.0, sq = 0.0;
        for (std::size_t t = 0; t < a.count; ++t)
        {
            const SweepRow &row = r.rows[offset + t];
            CHECK(row.solver == a.solver);
            CHECK(row.trial == t);
            sum += row.point.sum_rate;
        }
        const double mean = sum / 6.0;
        for (std::size_t t = 0; t < a.count; ++t)
            sq += std::pow(r.rows[offset + t].point.sum_rate - mean, 2);
        CHECK(a.mean[2] == doctest::Approx(mean).epsilon(1e-12));
        CHECK(a.ci95[2] == doctest::Approx(1.959963984540054 * std::sqrt(sq / 5.0 / 6.0)).epsilon(1e-6));
        CHECK(a.mean[2] <= a.mean[3]);
        if (a.solver == SolverKind::random)
            CHECK(a.mean[2] < a.mean[3]);
        offset += a.count;
    }
}

TEST_CASE("sweep csv layout")
{
    const SweepResult r = run_sweep(small_spec(), small_config(), TrainConfig{});
    const std::string text = csv_of(r);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    CHECK(line == "# irsim-sweep v1");
    std::getline(in, line);
    CHECK(line == "solver,rho,ratio,trial,rate1,rate2,sum_rate,upper_bound,p_rx1_mw,wall_s");
    std::getline(in, line);
    CHECK(line.rfind("pinv,0.5,0.4,0,", 0) == 0);
    while (std::getline(in, line))
        CHECK(std::count(line.begin(), line.end(), ',') == 9);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2 + 12 * (6 + 2));
    CHECK(text.find("pinv,0.5,0.4,mean,") != std::string::npos);
    CHECK(text.find("random,0.9,1,ci95,") != std::string::npos);
    const std::string agg = csv_of(r, false);
    CHECK(agg.find(",0,") == std::string::npos);
    CHECK(std::count(agg.begin(), agg.end(), '\n') == 2 + 12 * 2);
}

TEST_CASE("sweep output is deterministic and thread-count independent")
{
    SweepSpec spec = small_spec();
    spec.solvers.push_back(SolverKind::coord);
    const std::string a = csv_of(run_sweep(spec, small_config(), TrainConfig{}));
    const std::string b = csv_of(run_sweep(spec, small_config(), TrainConfig{}));
    CHECK(a == b);
    spec.threads = 4;
    CHECK(csv_of(run_sweep(spec, small_config(), TrainConfig{})) == a);
    spec.threads = 0;
    CHECK(csv_of(run_sweep(spec, small_config(), TrainConfig{})) == a);
    spec.seed = 2;
    CHECK(csv_of(run_sweep(spec, small_config(), TrainConfig{})) != a);
}

TEST_CASE("solvers share channel realizations within a cell")
{
    const SweepResult r = run_sweep(small_spec(), small_config(), TrainConfig{});
    // Same cell, same trial, different solvers: identical upper bound.
    for (const SweepRow &a : r.rows)
        for (const SweepRow &b : r.rows)
            if (a.rho == b.rho && a.ratio == b.ratio && a.trial == b.trial)
                CHECK(a.point.upper_bound == b.point.upper_bound);
}

TEST_CASE("budget failures are reported per cell")
{
    SweepSpec spec = small_spec();
    spec.solvers = {SolverKind::grid, SolverKind::pinv};
    spec.grid_budget = 1000; // 16^8 points needed
    const SweepResult r = run_sweep(spec, small_config(), TrainConfig{});
    CHECK(r.errors.size() == 4);
    for (const SweepCellError &e : r.errors)
    {
        CHECK(e.solver == SolverKind::grid);
        CHECK(e.message.find("budget") != std::string::npos);
    }
    CHECK(r.aggregates.size() == 4);
    const std::string text = csv_of(r);
    CHECK(text.find("# error grid,0.5,0.4: ") != std::string::npos);
}

TEST_CASE("timing is recorded on request")
{
    SweepSpec spec = small_spec();
    spec.record_timing = true;
    spec.trials = 2;
    for (const SweepRow &row : run_sweep(spec, small_config(), TrainConfig{}).rows)
        CHECK(row.wall_s >= 0.0);
}

TEST_CASE("sweeps with a trained policy")
{
    SweepSpec spec;
    spec.solvers = {SolverKind::ddpg, SolverKind::random};
    spec.ratios = {1.0};
    spec.rhos = {0.5, 0.9};
    spec.trials = 4;
    ScenarioConfig sc = small_config();
    sc.irs1_elements = 2;
    sc.irs2_elements = 2;
    TrainConfig t;
    t.episodes = 3;
    t.steps_per_episode = 8;
    t.batch_size = 8;
    t.buffer_capacity = 64;
    t.hidden_units = 8;
    const SweepResult a = run_sweep(spec, sc, t);
    CHECK(a.errors.empty());
    CHECK(a.rows.size() == 16);
    spec.threads = 3;
    CHECK(csv_of(run_sweep(spec, sc, t)) == csv_of(a));
    t.discount = 2.0;
    CHECK(code_of([&] { run_sweep(spec, sc, t); }) == ErrorCode::config_constraint);
}

TEST_CASE("complexity formulas")
{
    const ComplexityReport d = complexity_report(ComplexityInput{});
    CHECK(d.drl == 37796.0);
    CHECK(d.drl == 3.0 * 128 + 2.0 * 128 * 128 + 128.0 * 36 + 36);
    CHECK(d.pinv == std::pow(18.0 * 18.0, 2) * 36.0);
    CHECK(d.block == std::pow(18.0 * 18.0 / 9.0, 2) * 12.0);

    ComplexityInput es;
    es.m = 4;
    es.n = 4;
    CHECK(complexity_report(es).exhaustive == 2.0 * std::pow(73.0, 8));
    CHECK(complexity_report(es).exhaustive == 2.0 * 806460091894081.0);

    ComplexityInput big;
    big.m = 64;
    big.n = 64;
    big.n_blk = 6;
    const ComplexityReport b = complexity_report(big);
    CHECK(b.block < b.pinv);

    ComplexityInput bad;
    bad.n_blk = 0;
    CHECK(code_of([&] { complexity_report(bad); }) == ErrorCode::domain);
}

TEST_CASE("complexity table text")
{
    const ComplexityInput in{};
    const std::string t = format_complexity(in, complexity_report(in));
    CHECK(t.find("scheme,operations\n") != std::string::npos);
    CHECK(t.find("drl,37796\n") != std::string::npos);
    CHECK(t.rfind("# M=18 N=18", 0) == 0);
}

TEST_CASE("spearman rank correlation")
{
    const std::vector<double> x{1, 2, 3, 4, 5};
    const std::vector<double> up{2, 4, 8, 16, 32}, down{5, 3, 2, 1, 0.5};
    CHECK(spearman(x, up) == doctest::Approx(1.0));
    CHECK(spearman(x, down) == doctest::Approx(-1.0));
    // 1 - 6 * sum d^2 / (n (n^2 - 1)) with d = (0, 0, 1, -1, 0)
    const std::vector<double> swap{1, 2, 4, 3, 5};
    CHECK(spearman(x, swap) == doctest::Approx(1.0 - 6.0 * 2.0 / 120.0));
    // Ties take average ranks: y ranks (1.5, 1.5, 3, 4, 5).
    const std::vector<double> tie{1, 1, 3, 4, 5};
    const double r = spearman(x, tie);
    CHECK(r == doctest::Approx(0.974679434).epsilon(1e-8));
    CHECK_THROWS_AS(spearman(std::vector<double>{1}, std::vector<double>{1}), Error);
    CHECK_THROWS_AS(spearman(x, std::vector<double>{1, 2}), Error);
}

TEST_CASE("selftest passes")
{
    const std::vector<SelfTestCheck> checks = run_selftest();
    CHECK(checks.size() >= 9);
    for (const SelfTestCheck &c : checks)
    {
        INFO(c.name << ": " << c.detail);
        CHECK(c.passed);
    }
    const std::string text = format_selftest(checks);
    CHECK(text.find(std::to_string(checks.size()) + "/" + std::to_string(checks.size()) + " checks passed") !=
          std::string::npos);
}
