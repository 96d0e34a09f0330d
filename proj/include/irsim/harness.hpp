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

#ifndef IRSIM_HARNESS_HPP
#define IRSIM_HARNESS_HPP

#include "irsim/ddpg.hpp"
#include "irsim/linkbudget.hpp"
#include "irsim/scenario.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace irsim
{

enum class SolverKind
{
    pinv,
    block,
    grid,
    coord,
    random,
    ddpg
};

std::string to_string(SolverKind kind);
SolverKind solver_from_string(const std::string &name);

// Monte-Carlo sweep over correlation and distance ratio. The ratio is
// r_t1 / r_t2 with r_t2 taken from the scenario's user2_distance_m.
struct SweepSpec
{
    std::vector<SolverKind> solvers{SolverKind::pinv, SolverKind::block, SolverKind::random};
    std::vector<double> ratios{0.2, 0.4, 0.6, 0.8, 1.0};
    std::vector<double> rhos{0.25, 0.5, 0.75, 0.9, 1.0};
    std::size_t trials = 1000;
    std::size_t block_size = 3;         // elements per block, each dimension
    double grid_step = 0.39269908169872414; // pi / 8
    std::uint64_t grid_budget = 10000000;
    std::size_t coord_sweeps = 5;
    unsigned threads = 1; // 0: one per hardware thread
    bool record_timing = false;
    bool emit_trials = true; // false: aggregate rows only
    std::uint64_t seed = 1;
};

void validate(const SweepSpec &spec);

// Everything one config file describes. The single `seed` key seeds all three parts
// and `objective` is shared by training and the sweep.
struct ExperimentConfig
{
    ScenarioConfig scenario;
    TrainConfig train;
    SweepSpec sweep;
    Objective objective = Objective::sum_rate;
};

// `origin` prefixes parse diagnostics (usually the file path).
ExperimentConfig parse_config(std::string_view text, const std::string &origin = "<config>");
ExperimentConfig load_config(const std::string &path);
std::string serialize_config(const ExperimentConfig &cfg);
// Set one key as it would appear in a file; throws like parse_config.
void set_config_value(ExperimentConfig &cfg, const std::string &key, const std::string &value);
void set_seed(ExperimentConfig &cfg, std::uint64_t seed);
void validate(const ExperimentConfig &cfg);
bool operator==(const ExperimentConfig &a, const ExperimentConfig &b);

// ---- single-realization solving -------------------------------------------

// Objective value of a flat phase vector: sum rate, or user-1 power in mW.
double objective_value(const ChannelRealization &ch, std::span<const double> phases, const LinkParams &link,
                       Objective objective);

struct SolveOptions
{
    Objective objective = Objective::sum_rate;
    std::size_t block_size = 3;
    double grid_step = 0.39269908169872414;
    std::uint64_t grid_budget = 10000000;
    std::size_t coord_sweeps = 5;
    unsigned threads = 1;
};

SolveOptions solve_options(const ExperimentConfig &cfg);

// Classical solvers only (not ddpg). `rng` feeds the random solver.
PhaseConfig solve_realization(SolverKind kind, const Scenario &scenario, const ChannelRealization &ch,
                              const SolveOptions &opt, RngStream &rng, const Eigen::MatrixXd *a_pinv = nullptr);

// Realization of trial `trial` under the sweep's channel streams.
ChannelRealization trial_channel(const Scenario &scenario, std::uint64_t seed, std::uint64_t trial);
RngStream trial_stream(std::uint64_t seed, SolverKind kind, std::uint64_t trial);

// ---- sweeps ---------------------------------------------------------------

struct SweepRow
{
    SolverKind solver = SolverKind::pinv;
    double rho = 0.0;
    double ratio = 0.0;
    std::size_t trial = 0;
    PhaseConfig phases;
    RatePoint point;
    double wall_s = 0.0;
};

struct SweepAggregate
{
    SolverKind solver = SolverKind::pinv;
    double rho = 0.0;
    double ratio = 0.0;
    std::size_t count = 0;
    // rate1, rate2, sum_rate, upper_bound, p_rx1_mw, wall_s
    std::array<double, 6> mean{};
    std::array<double, 6> ci95{};
};

struct SweepCellError
{
    SolverKind solver = SolverKind::pinv;
    double rho = 0.0;
    double ratio = 0.0;
    std::string message;
};

struct SweepResult
{
    std::vector<SweepRow> rows; // cell-major, trials ascending within a cell
    std::vector<SweepAggregate> aggregates;
    std::vector<SweepCellError> errors;
};

ScenarioConfig cell_scenario(const ScenarioConfig &base, double rho, double ratio);

// Cells are ordered solver, rho, ratio as listed in the spec. DDPG trains once per
// (rho, ratio) cell with `train` and is evaluated noiselessly on the trial channels.
SweepResult run_sweep(const SweepSpec &spec, const ScenarioConfig &scenario, const TrainConfig &train);
void write_sweep_csv(std::ostream &os, const SweepResult &result, bool emit_trials = true);

// ---- reports --------------------------------------------------------------

struct ComplexityInput
{
    double m = 18, n = 18;
    double k = 2;      // users
    double xi = 72;    // grid points per phase minus one
    double s = 3;      // state size
    double ui = 128, uj = 128;
    double hidden = 2; // hidden-to-hidden products per forward pass
    double a = 36;     // action size
    double n_blk = 3;
};

struct ComplexityReport
{
    double drl = 0.0;        // one actor forward pass
    double pinv = 0.0;
    double block = 0.0;
    double exhaustive = 0.0;
};

ComplexityReport complexity_report(const ComplexityInput &in);
std::string format_complexity(const ComplexityInput &in, const ComplexityReport &r);

// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

struct SelfTestCheck
{
    std::string name;
    bool passed = false;
    std::string detail;
};

std::vector<SelfTestCheck> run_selftest();
std::string format_selftest(const std::vector<SelfTestCheck> &checks);

} // namespace irsim

#endif
