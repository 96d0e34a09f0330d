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

#include "irsim/solvers.hpp"
#include "irsim/errors.hpp"
#include "irsim/numerics.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

namespace irsim
{

namespace
{
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}
} // namespace

Eigen::MatrixXd alignment_matrix(std::size_t m, std::size_t n)
{
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m * n), static_cast<Eigen::Index>(m + n));
    for (std::size_t ni = 0; ni < n; ++ni)
        for (std::size_t mi = 0; mi < m; ++mi)
        {
            const auto r = static_cast<Eigen::Index>(ni * m + mi);
            a(r, static_cast<Eigen::Index>(mi)) = 1.0;
            a(r, static_cast<Eigen::Index>(m + ni)) = 1.0;
        }
    return a;
}

Eigen::MatrixXd alignment_pseudo_inverse(std::size_t m, std::size_t n)
{
    const ComplexMatrix a = alignment_matrix(m, n).cast<cplx>();
    return pseudo_inverse(a).real();
}

PhaseSystem assemble_system(const ChannelRealization &ch, std::size_t user)
{
    if (user >= ch.users())
        fail(ErrorCode::shape, "assemble_system: user index out of range");
    PhaseSystem sys;
    sys.m = ch.m();
    sys.n = ch.n();
    sys.a = alignment_matrix(sys.m, sys.n);
    sys.c.resize(static_cast<Eigen::Index>(sys.m * sys.n));

    const double bulk = ch.omega_k[user] + ch.omega_3;
    for (std::size_t ni = 0; ni < sys.n; ++ni)
        for (std::size_t mi = 0; mi < sys.m; ++mi)
        {
            const auto im = static_cast<Eigen::Index>(mi), in = static_cast<Eigen::Index>(ni);
            const double path = std::arg(ch.h_t[user](im)) + std::arg(ch.h_mn(im, in)) + std::arg(ch.h_r(in)) + bulk;
            sys.c(static_cast<Eigen::Index>(sys.row(mi, ni))) = wrap_pi(-path);
        }
    return sys;
}

Eigen::VectorXd solve_min_norm(const PhaseSystem &sys, const Eigen::MatrixXd &a_pinv)
{
    if (a_pinv.rows() != sys.a.cols() || a_pinv.cols() != sys.a.rows())
        fail(ErrorCode::shape, "solve_min_norm: pseudo-inverse shape does not match the system");
    return a_pinv * sys.c;
}

Eigen::VectorXd solve_min_norm(const PhaseSystem &sys)
{
    const ComplexMatrix theta = least_squares_min_norm(sys.a.cast<cplx>(), sys.c.cast<cplx>());
    return theta.real();
}

double residual_norm(const PhaseSystem &sys, const Eigen::VectorXd &theta)
{
    return (sys.a * theta - sys.c).norm();
}

namespace
{
PhaseConfig to_config(const Eigen::VectorXd &theta, std::size_t m)
{
    return PhaseConfig::from_flat(std::span<const double>(theta.data(), static_cast<std::size_t>(theta.size())), m);
}
} // namespace

PhaseConfig solve_pinv(const PhaseSystem &sys)
{
    return to_config(solve_min_norm(sys), sys.m);
}

PhaseConfig solve_pinv(const PhaseSystem &sys, const Eigen::MatrixXd &a_pinv)
{
    return to_config(solve_min_norm(sys, a_pinv), sys.m);
}

PhaseConfig solve_block(const ChannelRealization &ch, std::size_t n_blk, std::size_t user)
{
    const std::size_t m = ch.m(), n = ch.n();
    if (n_blk == 0 || m % n_blk != 0 || n % n_blk != 0)
        fail(ErrorCode::domain, "solve_block: block size " + std::to_string(n_blk) + " must divide M=" +
                                    std::to_string(m) + " and N=" + std::to_string(n));

    // Under-determined or degenerate grouping: fall back to the full solve.
    if (m + n > m * n || m + n < n_blk)
        return solve_pinv(assemble_system(ch, user));

    const std::size_t v_count = m / n_blk, w_count = n / n_blk;
    ChannelRealization reduced;
    reduced.omega_k = ch.omega_k;
    reduced.omega_3 = ch.omega_3;
    reduced.h_mn.resize(static_cast<Eigen::Index>(v_count), static_cast<Eigen::Index>(w_count));
    reduced.h_r.resize(static_cast<Eigen::Index>(w_count));
    for (const auto &ht : ch.h_t)
    {
        ComplexVector rep(static_cast<Eigen::Index>(v_count));
        for (std::size_t v = 0; v < v_count; ++v)
            rep(static_cast<Eigen::Index>(v)) = ht(static_cast<Eigen::Index>(v * n_blk));
        reduced.h_t.push_back(rep);
    }
    for (std::size_t v = 0; v < v_count; ++v)
        for (std::size_t w = 0; w < w_count; ++w)
            reduced.h_mn(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(w)) =
                ch.h_mn(static_cast<Eigen::Index>(v * n_blk), static_cast<Eigen::Index>(w * n_blk));
    for (std::size_t w = 0; w < w_count; ++w)
        reduced.h_r(static_cast<Eigen::Index>(w)) = ch.h_r(static_cast<Eigen::Index>(w * n_blk));

    const PhaseConfig rep = solve_pinv(assemble_system(reduced, user));
    std::vector<double> eta(m), psi(n);
    for (std::size_t i = 0; i < m; ++i)
        eta[i] = rep.eta()[i / n_blk];
    for (std::size_t i = 0; i < n; ++i)
        psi[i] = rep.psi()[i / n_blk];
    return PhaseConfig(std::move(eta), std::move(psi));
}

std::vector<double> grid_points(double step)
{
    if (!(step > 0.0) || !std::isfinite(step))
        fail(ErrorCode::domain, "grid_points: step must be positive");
    const auto count = static_cast<std::size_t>(std::ceil(kTwoPi / step - 1e-9));
    std::vector<double> pts(count);
    for (std::size_t i = 0; i < count; ++i)
        pts[i] = static_cast<double>(i) * step;
    return pts;
}

namespace
{

struct Best
{
    double value = -std::numeric_limits<double>::infinity();
    std::uint64_t index = std::numeric_limits<std::uint64_t>::max();
};

// Scan flat indices [begin, end) of the grid; index digits are most-significant first.
Best scan_range(const Evaluator &f, const std::vector<double> &pts, std::size_t dims, std::uint64_t begin,
                std::uint64_t end)
{
    const std::uint64_t base = pts.size();
    std::vector<std::uint64_t> digit(dims);
    std::uint64_t rem = begin;
    for (std::size_t d = dims; d-- > 0;)
    {
        digit[d] = rem % base;
        rem /= base;
    }
    std::vector<double> x(dims);
    for (std::size_t d = 0; d < dims; ++d)
        x[d] = pts[digit[d]];

    Best best;
    for (std::uint64_t idx = begin; idx < end; ++idx)
    {
        const double v = f(x);
        if (v > best.value || best.index == std::numeric_limits<std::uint64_t>::max())
        {
            best.value = v;
            best.index = idx;
        }
        for (std::size_t d = dims; d-- > 0;)
        {
            if (++digit[d] < base)
            {
                x[d] = pts[digit[d]];
                break;
            }
            digit[d] = 0;
            x[d] = pts[0];
        }
    }
    return best;
}

} // namespace

SolverResult solve_grid(const Evaluator &evaluator, std::size_t dims, double step, std::uint64_t budget,
                        unsigned threads)
{
    const auto t0 = std::chrono::steady_clock::now();
    if (dims == 0)
        fail(ErrorCode::domain, "solve_grid: need at least one phase");
    const std::vector<double> pts = grid_points(step);

    std::uint64_t total = 1;
    for (std::size_t d = 0; d < dims; ++d)
    {
        if (total > budget / pts.size())
            fail(ErrorCode::budget, "solve_grid: " + std::to_string(pts.size()) + "^" + std::to_string(dims) +
                                        " grid points exceed the evaluation budget of " + std::to_string(budget) +
                                        "; reduce the number of elements or enlarge the step");
        total *= pts.size();
    }

    threads = std::max(1u, threads);
    Best best;
    if (threads == 1 || total < 4096)
        best = scan_range(evaluator, pts, dims, 0, total);
    else
    {
        std::vector<Best> partial(threads);
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (total + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t)
        {
            const std::uint64_t b = std::min<std::uint64_t>(total, t * chunk);
            const std::uint64_t e = std::min<std::uint64_t>(total, b + chunk);
            pool.emplace_back([&, t, b, e] {
                if (b < e)
                    partial[t] = scan_range(evaluator, pts, dims, b, e);
            });
        }
        for (auto &th : pool)
            th.join();
        // Chunks are ordered, so strict '>' keeps the earliest index on ties.
        for (const Best &p : partial)
            if (p.index != std::numeric_limits<std::uint64_t>::max() &&
                (best.index == std::numeric_limits<std::uint64_t>::max() || p.value > best.value))
                best = p;
    }

    SolverResult res;
    res.phases.resize(dims);
    std::uint64_t rem = best.index;
    for (std::size_t d = dims; d-- > 0;)
    {
        res.phases[d] = pts[rem % pts.size()];
        rem /= pts.size();
    }
    res.objective = best.value;
    res.evaluations = total;
    res.wall_time_s = seconds_since(t0);
    return res;
}

SolverResult solve_coordinate_ascent(const Evaluator &evaluator, std::vector<double> init, double step,
                                     std::size_t sweeps)
{
    const auto t0 = std::chrono::steady_clock::now();
    if (sweeps == 0)
        fail(ErrorCode::domain, "solve_coordinate_ascent: sweeps must be >= 1");
    if (init.empty())
        fail(ErrorCode::domain, "solve_coordinate_ascent: need at least one phase");
    const std::vector<double> pts = grid_points(step);

    SolverResult res;
    std::vector<double> x = std::move(init);
    double current = evaluator(x);
    res.evaluations = 1;
    res.trace.push_back(current);

    for (std::size_t sweep = 0; sweep < sweeps; ++sweep)
    {
        const double start = current;
        for (std::size_t d = 0; d < x.size(); ++d)
        {
            const double keep = x[d];
            double best_v = current, best_p = keep;
            for (double p : pts)
            {
                x[d] = p;
                const double v = evaluator(x);
                ++res.evaluations;
                if (v > best_v)
                {
                    best_v = v;
                    best_p = p;
                }
            }
            x[d] = best_p;
            current = best_v;
            res.trace.push_back(current);
        }
        if (current - start <= 1e-9 * std::abs(start))
            break;
    }
    res.phases = std::move(x);
    res.objective = current;
    res.wall_time_s = seconds_since(t0);
    return res;
}

PhaseConfig solve_random(RngStream &rng, std::size_t m, std::size_t n)
{
    std::vector<double> eta(m), psi(n);
    for (auto &v : eta)
        v = rng.uniform(0.0, kTwoPi);
    for (auto &v : psi)
        v = rng.uniform(0.0, kTwoPi);
    return PhaseConfig(std::move(eta), std::move(psi));
}

} // namespace irsim
