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

#include "irsim/errors.hpp"
#include "irsim/linkbudget.hpp"
#include "irsim/numerics.hpp"

#include <cmath>
#include <numbers>

using namespace irsim;

namespace
{
constexpr double kPi = std::numbers::pi;

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
} // namespace

TEST_CASE("geometry distances for the default coordinates")
{
    const Geometry g = derive_geometry(ScenarioConfig{});
    CHECK(g.r_2 == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(g.r_3 == doctest::Approx(std::sqrt(249.0)).epsilon(1e-15));
    CHECK(g.r_3 == doctest::Approx(15.780).epsilon(1e-4));
    CHECK(g.r_t[0] == 3.0);
    CHECK(g.r_t[1] == 15.0);
}

TEST_CASE("ray parallel to the normal has zero incidence")
{
    ScenarioConfig c;
    c.irs2_normal = Vec3{-1.0, 0.0, 0.0}; // points back along IRS2 -> IRS1
    const Geometry g = derive_geometry(c);
    CHECK(g.theta_i2 == doctest::Approx(0.0));
}

TEST_CASE("angles stay within [0, pi/2] for any normal")
{
    for (Vec3 n : {Vec3{0, 1, 0}, Vec3{0, -1, 0}, Vec3{1, 1, 1}, Vec3{0, 0, -1}, Vec3{-1, 0, 0.2}})
    {
        ScenarioConfig c;
        c.irs1_normal = n;
        c.irs2_normal = n;
        const Geometry g = derive_geometry(c);
        for (double a : {g.theta_i1[0], g.theta_i1[1], g.theta_r1, g.theta_i2, g.theta_r2})
        {
            CHECK(a >= 0.0);
            CHECK(a <= kPi / 2.0);
        }
    }
}

TEST_CASE("default bisector normals split incoming and outgoing rays evenly")
{
    const Geometry g = derive_geometry(ScenarioConfig{});
    CHECK(g.theta_i1[0] == doctest::Approx(g.theta_r1).epsilon(1e-12));
    CHECK(g.theta_i2 == doctest::Approx(g.theta_r2).epsilon(1e-12));
    CHECK(g.theta_r1 < kPi / 2.0);
    CHECK(g.theta_i2 < kPi / 2.0);
}

TEST_CASE("coincident nodes are a geometry error")
{
    ScenarioConfig c;
    c.irs2_position = c.irs1_position;
    CHECK(code_of([&] { derive_geometry(c); }) == ErrorCode::geometry);
    ScenarioConfig d;
    d.rx_position = d.irs2_position;
    CHECK(code_of([&] { derive_geometry(d); }) == ErrorCode::geometry);
}

TEST_CASE("antenna boresight gain")
{
    CHECK(antenna_gain(0.0, 0.12, 1.0, 1e-3) == doctest::Approx(std::pow(120.0 * kPi, 2)).epsilon(1e-12));
    CHECK(antenna_gain(0.0, 0.12, 1.0, 1e-3) == doctest::Approx(1.42122e5).epsilon(1e-5));
}

TEST_CASE("antenna gain is linear in efficiency")
{
    for (double o : {0.0, 0.003, 0.01})
        CHECK(antenna_gain(o, 0.12, 0.8, 1e-3) == doctest::Approx(2.0 * antenna_gain(o, 0.12, 0.4, 1e-3)));
}

TEST_CASE("antenna pattern null at the first Bessel root")
{
    const double lambda = 1e-3, d = 0.12;
    const double o = std::asin(3.8317059702 * lambda / (kPi * d));
    CHECK(antenna_gain(o, d, 1.0, lambda) <= 1e-6 * antenna_gain(0.0, d, 1.0, lambda));
}

TEST_CASE("antenna gain is non-negative past the first null")
{
    for (double o = 0.0; o < 0.2; o += 1e-4)
        CHECK(antenna_gain(o, 0.12, 1.0, 1e-3) >= 0.0);
    CHECK_THROWS_AS(antenna_gain(NAN, 0.12, 1.0, 1e-3), Error);
}

TEST_CASE("reflecting-unit gain")
{
    CHECK(ru_gain(0.0) == 4.0);
    CHECK(ru_gain(kPi / 3.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(ru_gain(kPi / 2.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(std::abs(ru_gain(kPi / 2.0)) < 1e-15);
    CHECK_THROWS_AS(ru_gain(-0.1), Error);
    CHECK_THROWS_AS(ru_gain(2.0), Error);
    for (double t = 0.0; t <= kPi / 2.0; t += 0.01)
    {
        CHECK(ru_gain(t) >= 0.0);
        CHECK(ru_gain(t) <= 4.0);
    }
}

TEST_CASE("fspl with unit gains and distances")
{
    ScenarioConfig c;
    c.frequency_hz = kSpeedOfLight / (4.0 * kPi); // lambda = 4 pi
    c.tx_antenna_diameter_m = 4.0;                // pi D / lambda = 1
    c.rx_antenna_diameter_m = 4.0;
    Geometry g;
    g.r_t = {1.0, 1.0};
    g.r_2 = 1.0;
    g.r_3 = 1.0;
    const double unit_ru = std::acos(0.25);
    g.theta_i1 = {unit_ru, unit_ru};
    g.theta_r1 = g.theta_i2 = g.theta_r2 = unit_ru;
    CHECK(fspl_total(g, c, 0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("fspl scales with the inverse square of r_2")
{
    ScenarioConfig c;
    Geometry g = derive_geometry(c);
    const double base = fspl_total(g, c, 0);
    g.r_2 *= 2.0;
    CHECK(fspl_total(g, c, 0) == doctest::Approx(base / 4.0).epsilon(1e-14));
}

TEST_CASE("fspl for the default geometry, term by term")
{
    ScenarioConfig c;
    const Geometry g = derive_geometry(c);
    const double lambda = 3e8 / 300e9;
    const double gt = std::pow(kPi * 0.12 / lambda, 2);
    // Bisector geometry: half the angle between the user ray and the IRS1 -> IRS2 ray.
    const double u[3] = {0.0, -10.0, -7.0}, v[3] = {5.0, 0.0, 0.0};
    const double cos1 = (u[0] * v[0] + u[1] * v[1] + u[2] * v[2]) / (std::sqrt(149.0) * 5.0);
    const double half1 = 0.5 * std::acos(cos1);
    const double w[3] = {10.0, -10.0, -7.0};
    const double cos2 = (-v[0] * w[0]) / (5.0 * std::sqrt(249.0));
    const double half2 = 0.5 * std::acos(cos2);
    const double ru = std::pow(4.0 * std::cos(half1), 2) * std::pow(4.0 * std::cos(half2), 2);
    const double expected =
        std::pow(lambda / (4.0 * kPi), 6) * gt * gt * ru / (3.0 * 3.0 * 5.0 * 5.0 * 249.0);
    CHECK(fspl_total(g, c, 0) == doctest::Approx(expected).epsilon(1e-10));
    CHECK(total_loss(g, c, 0) == doctest::Approx(expected).epsilon(1e-10));
}

TEST_CASE("fspl decreases in every distance")
{
    ScenarioConfig c;
    const Geometry g = derive_geometry(c);
    const double base = fspl_total(g, c, 0);
    for (int which = 0; which < 3; ++which)
        for (double f : {0.9, 1.1})
        {
            Geometry h = g;
            (which == 0 ? h.r_t[0] : which == 1 ? h.r_2 : h.r_3) *= f;
            const double v = fspl_total(h, c, 0);
            CHECK((f > 1.0 ? v < base : v > base));
        }
}

TEST_CASE("absorption loss")
{
    CHECK(absorption_loss(0.0, 50.0) == 1.0);
    CHECK(absorption_loss(0.3, 0.0) == 1.0);
    CHECK(absorption_loss(0.01, 100.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
    CHECK(absorption_loss(0.01, 100.0) == doctest::Approx(0.3679).epsilon(1e-4));
}

TEST_CASE("total loss with and without absorption")
{
    ScenarioConfig c;
    const Geometry g = derive_geometry(c);
    CHECK(total_loss(g, c, 1) == fspl_total(g, c, 1));
    double prev = total_loss(g, c, 1);
    for (double k : {0.001, 0.01, 0.1})
    {
        c.absorption_coeff_per_m = k;
        const double v = total_loss(g, c, 1);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("noise power over a 1 Hz band")
{
    CHECK(noise_power(-174.0, 1.0, 0.0) == doctest::Approx(std::pow(10.0, -17.4)).epsilon(1e-12));
}

TEST_CASE("three extra dB of noise figure double the noise")
{
    CHECK(noise_power(-174.0, 2e9, 13.0) / noise_power(-174.0, 2e9, 10.0) == doctest::Approx(2.0).epsilon(2e-3));
}

TEST_CASE("default receiver noise is -71 dBm")
{
    // kTB at -174 dBm/Hz over 2 GHz plus a 10 dB figure: 7.9621e-11 W.
    const double mw = noise_power(-174.0, 2e9, 10.0);
    CHECK(mw == doctest::Approx(7.9621e-8).epsilon(1e-4));
    CHECK(10.0 * std::log10(mw) == doctest::Approx(-70.99).epsilon(1e-4));
}

TEST_CASE("validation names the offending key")
{
    ScenarioConfig c;
    c.rho = 1.5;
    try
    {
        validate(c);
        FAIL("expected a constraint error");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::config_constraint);
        CHECK(std::string(e.what()).find("rho") != std::string::npos);
    }
    ScenarioConfig d;
    d.irs1_elements = 0;
    CHECK(code_of([&] { validate(d); }) == ErrorCode::config_constraint);
    ScenarioConfig e;
    e.reflection_magnitude = 1.2;
    CHECK(code_of([&] { validate(e); }) == ErrorCode::config_constraint);
}
