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

#ifndef IRSIM_SOLVERS_HPP
#define IRSIM_SOLVERS_HPP

#include "irsim/channel.hpp"
#include "irsim/metrics.hpp"
#include "irsim/rng.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace irsim
{

// M*N alignment equations eta_m + psi_n = c_mn in M+N unknowns. Row (m, n) sits at
// index n*M + m; column m is eta_m, column M+n is psi_n.
struct PhaseSystem
{
    Eigen::MatrixXd a;
    Eigen::VectorXd c; // wrapped to (-pi, pi]
    std::size_t m = 0;
    std::size_t n = 0;

    std::size_t row(std::size_t mi, std::size_t ni) const { return ni * m + mi; }
};

// The 0/1 structure matrix alone; it depends only on (M, N).
Eigen::MatrixXd alignment_matrix(std::size_t m, std::size_t n);

// Pseudo-inverse of alignment_matrix(m, n), reusable across realizations.
Eigen::MatrixXd alignment_pseudo_inverse(std::size_t m, std::size_t n);

// Right-hand side for user `user` with the common phase offset fixed to zero.
PhaseSystem assemble_system(const ChannelRealization &ch, std::size_t user);

// Minimum-norm least-squares solution, unwrapped.
Eigen::VectorXd solve_min_norm(const PhaseSystem &sys);
Eigen::VectorXd solve_min_norm(const PhaseSystem &sys, const Eigen::MatrixXd &a_pinv);

double residual_norm(const PhaseSystem &sys, const Eigen::VectorXd &theta);

PhaseConfig solve_pinv(const PhaseSystem &sys);
PhaseConfig solve_pinv(const PhaseSystem &sys, const Eigen::MatrixXd &a_pinv);

// Block solution with n_blk elements per group in each dimension: one
// representative element per group is aligned, its phase is copied to the group.
PhaseConfig solve_block(const ChannelRealization &ch, std::size_t n_blk, std::size_t user);

// Objective over the flat phase vector [eta..., psi...]. Must be safe to call
// concurrently when used with a multi-threaded grid search.
using Evaluator = std::function<double(std::span<const double>)>;

struct SolverResult
{
    std::vector<double> phases; // flat [eta..., psi...]
    double objective = 0.0;
    std::uint64_t evaluations = 0;
    double wall_time_s = 0.0;
    std::vector<double> trace; // objective after each coordinate update (coordinate ascent only)
};

// Phases {0, step, 2 step, ...} strictly below 2 pi.
std::vector<double> grid_points(double step);

// Exhaustive search over grid_points(step)^dims. Throws ErrorCode::budget when the
// grid holds more than `budget` points. Ties resolve to the lexicographically
// smallest phase vector, independent of `threads`.
SolverResult solve_grid(const Evaluator &evaluator, std::size_t dims, double step, std::uint64_t budget,
                        unsigned threads = 1);

// Cyclic one-dimensional grid maximization; never accepts a worse point.
SolverResult solve_coordinate_ascent(const Evaluator &evaluator, std::vector<double> init, double step,
                                     std::size_t sweeps);

PhaseConfig solve_random(RngStream &rng, std::size_t m, std::size_t n);

} // namespace irsim

#endif
