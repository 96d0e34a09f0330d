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

#include "irsim/scenario.hpp"

namespace irsim
{

Scenario make_scenario(const ScenarioConfig &cfg)
{
    Scenario s;
    s.config = cfg;
    s.geometry = derive_geometry(cfg);
    s.corr_theta = cfg.corr_theta.value_or(s.geometry.theta_i2);

    const double lambda = cfg.wavelength();
    const std::size_t m = cfg.irs1_elements, n = cfg.irs2_elements;

    std::vector<ComplexVector> los_t;
    std::vector<double> omega_k;
    for (std::size_t k = 0; k < kUsers; ++k)
    {
        los_t.push_back(cfg.los_mode == LosMode::steering
                            ? steering_los(m, s.geometry.theta_i1[k], cfg.element_spacing_wavelengths)
                            : ones_los(m));
        omega_k.push_back(path_phase(s.geometry.r_t[k], lambda));
    }
    ComplexVector los_r = cfg.los_mode == LosMode::steering
                              ? steering_los(n, s.geometry.theta_r2, cfg.element_spacing_wavelengths)
                              : ones_los(n);

    const CorrelationSpec row{cfg.rho, s.corr_theta, m};
    const CorrelationSpec col{cfg.rho, s.corr_theta, n};
    s.channel = make_channel_model(m, n, cfg.rician_k1, cfg.rician_k2, std::move(los_t), std::move(los_r), row, col,
                                   std::move(omega_k), path_phase(s.geometry.r_3, lambda));

    for (std::size_t k = 0; k < kUsers; ++k)
        s.link.losses.push_back(total_loss(s.geometry, cfg, k));
    s.link.tx_power_mw = cfg.tx_power_mw;
    s.link.noise_mw = noise_power(cfg.noise_psd_dbm_hz, cfg.bandwidth_hz, cfg.noise_figure_db);
    s.link.alpha = cfg.reflection_magnitude;
    return s;
}

} // namespace irsim
