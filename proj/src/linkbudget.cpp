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

#include "irsim/linkbudget.hpp"
#include "irsim/errors.hpp"
#include "irsim/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace irsim
{

namespace
{

void require(bool ok, const char *key, const std::string &constraint)
{
    if (!ok)
        fail(ErrorCode::config_constraint, std::string(key) + ": must be " + constraint);
}

Vec3 sub(const Vec3 &a, const Vec3 &b)
{
    return {a.x - b.x, a.y - b.y, a.z - b.z};
}
Vec3 add(const Vec3 &a, const Vec3 &b)
{
    return {a.x + b.x, a.y + b.y, a.z + b.z};
}
Vec3 scale(const Vec3 &a, double s)
{
    return {a.x * s, a.y * s, a.z * s};
}
double dot(const Vec3 &a, const Vec3 &b)
{
    return a.x * b.x + a.y * b.y + a.z * b.z;
}
double norm(const Vec3 &a)
{
    return std::sqrt(dot(a, a));
}

Vec3 unit(const Vec3 &a, const char *what)
{
    const double n = norm(a);
    if (!(n > 1e-12))
        fail(ErrorCode::geometry, std::string("derive_geometry: ") + what + " has zero length");
    return scale(a, 1.0 / n);
}

double angle_to_normal(const Vec3 &ray, const Vec3 &normal)
{
    const double c = std::clamp(dot(ray, normal), -1.0, 1.0);
    return std::clamp(std::acos(c), 0.0, std::numbers::pi / 2.0);
}

} // namespace

void validate(const ScenarioConfig &c)
{
    auto finite_pos = [](double v) { return std::isfinite(v) && v > 0.0; };
    require(finite_pos(c.frequency_hz), "frequency_hz", "> 0");
    require(finite_pos(c.bandwidth_hz), "bandwidth_hz", "> 0");
    require(finite_pos(c.tx_power_mw), "tx_power_mw", "> 0");
    require(c.irs1_elements >= 1, "irs1_elements", ">= 1");
    require(c.irs2_elements >= 1, "irs2_elements", ">= 1");
    require(finite_pos(c.user1_distance_m), "user1_distance_m", "> 0");
    require(finite_pos(c.user2_distance_m), "user2_distance_m", "> 0");
    require(finite_pos(c.tx_antenna_diameter_m), "tx_antenna_diameter_m", "> 0");
    require(finite_pos(c.rx_antenna_diameter_m), "rx_antenna_diameter_m", "> 0");
    require(c.tx_aperture_efficiency > 0.0 && c.tx_aperture_efficiency <= 1.0, "tx_aperture_efficiency", "in (0, 1]");
    require(c.rx_aperture_efficiency > 0.0 && c.rx_aperture_efficiency <= 1.0, "rx_aperture_efficiency", "in (0, 1]");
    require(std::isfinite(c.tx_offboresight_rad), "tx_offboresight_rad", "finite");
    require(std::isfinite(c.rx_offboresight_rad), "rx_offboresight_rad", "finite");
    require(c.reflection_magnitude > 0.0 && c.reflection_magnitude <= 1.0, "reflection_magnitude", "in (0, 1]");
    require(std::isfinite(c.rician_k1) && c.rician_k1 >= 0.0, "rician_k1", ">= 0");
    require(std::isfinite(c.rician_k2) && c.rician_k2 >= 0.0, "rician_k2", ">= 0");
    require(c.rho >= 0.0 && c.rho <= 1.0, "rho", "in [0, 1]");
    require(!c.corr_theta || std::isfinite(*c.corr_theta), "corr_theta", "finite or auto");
    require(finite_pos(c.element_spacing_wavelengths), "element_spacing_wavelengths", "> 0");
    require(std::isfinite(c.noise_psd_dbm_hz), "noise_psd_dbm_hz", "finite");
    require(std::isfinite(c.noise_figure_db), "noise_figure_db", "finite");
    require(std::isfinite(c.absorption_coeff_per_m) && c.absorption_coeff_per_m >= 0.0, "absorption_coeff_per_m",
            ">= 0");
}

Geometry derive_geometry(const ScenarioConfig &cfg)
{
    validate(cfg);
    Geometry g;

    const Vec3 to_irs2 = sub(cfg.irs2_position, cfg.irs1_position);
    const Vec3 to_rx = sub(cfg.rx_position, cfg.irs2_position);
    g.r_2 = norm(to_irs2);
    g.r_3 = norm(to_rx);
    if (!(g.r_2 > 0.0))
        fail(ErrorCode::geometry, "derive_geometry: IRS1 and IRS2 coincide");
    if (!(g.r_3 > 0.0))
        fail(ErrorCode::geometry, "derive_geometry: IRS2 and the receiver coincide");

    const Vec3 u12 = unit(to_irs2, "IRS1 -> IRS2");
    const Vec3 u23 = unit(to_rx, "IRS2 -> receiver");
    const Vec3 u_user = unit(sub(cfg.user_anchor, cfg.irs1_position), "IRS1 -> user anchor");

    g.irs1_normal = cfg.irs1_normal ? unit(*cfg.irs1_normal, "irs1_normal") : unit(add(u_user, u12), "IRS1 bisector");
    g.irs2_normal =
        cfg.irs2_normal ? unit(*cfg.irs2_normal, "irs2_normal") : unit(add(scale(u12, -1.0), u23), "IRS2 bisector");

    for (std::size_t k = 0; k < kUsers; ++k)
    {
        g.r_t.push_back(cfg.user_distance(k));
        g.theta_i1.push_back(angle_to_normal(u_user, g.irs1_normal));
    }
    g.theta_r1 = angle_to_normal(u12, g.irs1_normal);
    g.theta_i2 = angle_to_normal(scale(u12, -1.0), g.irs2_normal);
    g.theta_r2 = angle_to_normal(u23, g.irs2_normal);
    return g;
}

double antenna_gain(double angle_off_boresight, double diameter, double efficiency, double wavelength)
{
    if (!std::isfinite(angle_off_boresight))
        fail(ErrorCode::domain, "antenna_gain: non-finite angle");
    if (!(diameter > 0.0) || !(wavelength > 0.0))
        fail(ErrorCode::domain, "antenna_gain: diameter and wavelength must be positive");
    if (!(efficiency > 0.0 && efficiency <= 1.0))
        fail(ErrorCode::domain, "antenna_gain: efficiency must lie in (0, 1]");

    const double aperture = std::numbers::pi * diameter / wavelength;
    const double boresight = efficiency * aperture * aperture;
    const double x = aperture * std::sin(angle_off_boresight);
    if (std::abs(x) < 1e-8)
        return boresight;
    const double pattern = 2.0 * bessel_j1(x) / x;
    return boresight * pattern * pattern;
}

double ru_gain(double theta)
{
    constexpr double eps = 1e-12;
    if (!(theta >= -eps && theta <= std::numbers::pi / 2.0 + eps))
        fail(ErrorCode::domain, "ru_gain: theta must lie in [0, pi/2]");
    return std::max(0.0, 4.0 * std::cos(std::clamp(theta, 0.0, std::numbers::pi / 2.0)));
}

double fspl_total(const Geometry &geom, const ScenarioConfig &cfg, std::size_t user)
{
    if (user >= geom.r_t.size())
        fail(ErrorCode::domain, "fspl_total: user index out of range");
    const double lambda = cfg.wavelength();
    const double g_t =
        antenna_gain(cfg.tx_offboresight_rad, cfg.tx_antenna_diameter_m, cfg.tx_aperture_efficiency, lambda);
    const double g_r =
        antenna_gain(cfg.rx_offboresight_rad, cfg.rx_antenna_diameter_m, cfg.rx_aperture_efficiency, lambda);
    const double ru = ru_gain(geom.theta_i1[user]) * ru_gain(geom.theta_r1) * ru_gain(geom.theta_i2) *
                      ru_gain(geom.theta_r2);
    const double free = std::pow(lambda / (4.0 * std::numbers::pi), 6);
    const double r2 = geom.r_t[user] * geom.r_t[user] * geom.r_2 * geom.r_2 * geom.r_3 * geom.r_3;
    return free * g_t * ru * g_r / r2;
}

double absorption_loss(double kappa, double total_path)
{
    if (!(kappa >= 0.0) || !(total_path >= 0.0))
        fail(ErrorCode::domain, "absorption_loss: kappa and path length must be non-negative");
    return std::exp(-kappa * total_path);
}

double total_loss(const Geometry &geom, const ScenarioConfig &cfg, std::size_t user)
{
    const double path = geom.r_t.at(user) + geom.r_2 + geom.r_3;
    return fspl_total(geom, cfg, user) * absorption_loss(cfg.absorption_coeff_per_m, path);
}

double noise_power(double noise_psd_dbm_hz, double bandwidth_hz, double noise_figure_db)
{
    if (!(bandwidth_hz > 0.0))
        fail(ErrorCode::domain, "noise_power: bandwidth must be positive");
    return std::pow(10.0, (noise_psd_dbm_hz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db) / 10.0);
}

} // namespace irsim
