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

#ifndef IRSIM_SCENARIO_HPP
#define IRSIM_SCENARIO_HPP

#include "irsim/channel.hpp"
#include "irsim/linkbudget.hpp"
#include "irsim/metrics.hpp"

namespace irsim
{

// Everything derived once from a ScenarioConfig: geometry, fading model with
// factored correlation matrices, and the per-user link budget.
struct Scenario
{
    ScenarioConfig config;
    Geometry geometry;
    ChannelModel channel;
    LinkParams link;
    double corr_theta = 0.0;

    std::size_t m() const { return config.irs1_elements; }
    std::size_t n() const { return config.irs2_elements; }
};

Scenario make_scenario(const ScenarioConfig &cfg);

} // namespace irsim

#endif
