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

// Shared fixtures for the unit tests.

#ifndef IRSIM_TEST_HELPERS_HPP
#define IRSIM_TEST_HELPERS_HPP

#include "irsim/channel.hpp"
#include "irsim/numerics.hpp"
#include "irsim/rng.hpp"
#include "irsim/scenario.hpp"

#include <cmath>

namespace testing
{

inline irsim::ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, irsim::RngStream &rng)
{
    irsim::ComplexMatrix a(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            a(r, c) = rng.complex_normal();
    return a;
}

inline double rel_diff(double a, double b)
{
    return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

inline irsim::Scenario small_scenario(std::size_t m, std::size_t n, double rho = 0.5)
{
    irsim::ScenarioConfig c;
    c.irs1_elements = m;
    c.irs2_elements = n;
    c.rho = rho;
    return irsim::make_scenario(c);
}

// Realization with every magnitude one and every phase zero.
inline irsim::ChannelRealization unit_channel(std::size_t m, std::size_t n, std::size_t users = 2)
{
    irsim::ChannelRealization ch;
    for (std::size_t k = 0; k < users; ++k)
        ch.h_t.push_back(irsim::ComplexVector::Ones(static_cast<Eigen::Index>(m)));
    ch.h_mn = irsim::ComplexMatrix::Ones(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
    ch.h_r = irsim::ComplexVector::Ones(static_cast<Eigen::Index>(n));
    ch.omega_k.assign(users, 0.0);
    ch.omega_3 = 0.0;
    return ch;
}

} // namespace testing

#endif
