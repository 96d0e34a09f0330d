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

#ifndef IRSIM_LINKBUDGET_HPP
#define IRSIM_LINKBUDGET_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace irsim
{

inline constexpr double kSpeedOfLight = 3.0e8; // m/s, as used for lambda = c / f

struct Vec3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    bool operator==(const Vec3 &) const = default;
};

enum class LosMode
{
    ones,    // all-ones LOS vectors; bulk phase lives in omega_k / omega_3
    steering // uniform linear array response at the incidence angle
};

// Physical description of one experiment. All powers are in mW, distances in m,
// angles in radians. Defaults reproduce the simulation parameter table of the
// two-user cascaded-IRS setup; keys in the config file use the same names.
struct ScenarioConfig
{
    double frequency_hz = 300e9;
    double bandwidth_hz = 2e9;
    double tx_power_mw = 1e8;
    std::size_t irs1_elements = 18; // M
    std::size_t irs2_elements = 18; // N

    Vec3 irs1_position{5.0, 10.0, 12.0};
    Vec3 irs2_position{10.0, 10.0, 12.0};
    Vec3 rx_position{20.0, 0.0, 5.0};
    // Users sit on the ray from IRS1 toward this point, r_tk metres away.
    Vec3 user_anchor{5.0, 0.0, 5.0};
    double user1_distance_m = 3.0;
    double user2_distance_m = 15.0;

    // Unset: the surface faces the bisector of its incoming and outgoing rays.
    std::optional<Vec3> irs1_normal;
    std::optional<Vec3> irs2_normal;

    double tx_antenna_diameter_m = 0.12;
    double rx_antenna_diameter_m = 0.12;
    double tx_aperture_efficiency = 1.0;
    double rx_aperture_efficiency = 1.0;
    double tx_offboresight_rad = 0.0;
    double rx_offboresight_rad = 0.0;

    double reflection_magnitude = 1.0; // alpha
    double rician_k1 = 10.0;
    double rician_k2 = 10.0;
    double rho = 0.9;
    // Unset: use the IRS2 incidence angle theta_{i,2} from the geometry.
    std::optional<double> corr_theta;
    LosMode los_mode = LosMode::ones;
    double element_spacing_wavelengths = 0.5;

    double noise_psd_dbm_hz = -174.0;
    double noise_figure_db = 10.0;
    double absorption_coeff_per_m = 0.0;

    std::uint64_t seed = 1;

    double wavelength() const { return kSpeedOfLight / frequency_hz; }
    double user_distance(std::size_t user) const { return user == 0 ? user1_distance_m : user2_distance_m; }
};

inline constexpr std::size_t kUsers = 2;

// Throws ErrorCode::config_constraint naming the offending key.
void validate(const ScenarioConfig &cfg);

struct Geometry
{
    std::vector<double> r_t;        // user k -> IRS1
    double r_2 = 0.0;               // IRS1 -> IRS2
    double r_3 = 0.0;               // IRS2 -> receiver
    std::vector<double> theta_i1;   // incidence at IRS1 per user
    double theta_r1 = 0.0;          // reflection at IRS1 toward IRS2
    double theta_i2 = 0.0;          // incidence at IRS2
    double theta_r2 = 0.0;          // reflection at IRS2 toward the receiver
    Vec3 irs1_normal;
    Vec3 irs2_normal;
};

Geometry derive_geometry(const ScenarioConfig &cfg);

// Circular-aperture gain: e (pi D / lambda)^2 * [2 J1(x) / x]^2, x = pi D sin(o) / lambda.
double antenna_gain(double angle_off_boresight, double diameter, double efficiency, double wavelength);

// Reflecting-unit gain 4 cos(theta), 0 <= theta <= pi/2.
double ru_gain(double theta);

// Three-hop free-space factor including every antenna and RU gain.
double fspl_total(const Geometry &geom, const ScenarioConfig &cfg, std::size_t user);

double absorption_loss(double kappa, double total_path);

// fspl_total * absorption over r_tk + r_2 + r_3.
double total_loss(const Geometry &geom, const ScenarioConfig &cfg, std::size_t user);

// Thermal noise in mW from a dBm/Hz density, bandwidth in Hz and noise figure in dB.
double noise_power(double noise_psd_dbm_hz, double bandwidth_hz, double noise_figure_db);

} // namespace irsim

#endif
