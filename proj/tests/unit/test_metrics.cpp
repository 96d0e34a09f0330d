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
#include "irsim/metrics.hpp"
#include "irsim/scenario.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

using namespace irsim;
using testing::rel_diff;

namespace
{
constexpr double kPi = std::numbers::pi;

ChannelRealization random_channel(std::size_t m, std::size_t n, RngStream &rng, std::size_t users = 2)
{
    ChannelRealization ch;
    for (std::size_t k = 0; k < users; ++k)
        ch.h_t.push_back(testing::random_matrix(static_cast<Eigen::Index>(m), 1, rng).col(0));
    ch.h_mn = testing::random_matrix(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n), rng);
    ch.h_r = testing::random_matrix(static_cast<Eigen::Index>(n), 1, rng).col(0);
    for (std::size_t k = 0; k < users; ++k)
        ch.omega_k.push_back(rng.uniform(0.0, 100.0));
    ch.omega_3 = rng.uniform(0.0, 100.0);
    return ch;
}

PhaseConfig random_phases(std::size_t m, std::size_t n, RngStream &rng)
{
    std::vector<double> e(m), p(n);
    for (double &v : e)
        v = rng.uniform(0.0, 2.0 * kPi);
    for (double &v : p)
        v = rng.uniform(0.0, 2.0 * kPi);
    return PhaseConfig(e, p);
}

// Straight complex products, no magnitude/phase split.
double oracle_power(const ChannelRealization &ch, const PhaseConfig &ph, double loss, double tx, std::size_t k,
                    double alpha)
{
    std::complex<double> s = 0.0;
    for (std::size_t m = 0; m < ch.m(); ++m)
        for (std::size_t n = 0; n < ch.n(); ++n)
            s += ch.h_t[k](static_cast<Eigen::Index>(m)) *
                 ch.h_mn(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) *
                 ch.h_r(static_cast<Eigen::Index>(n)) *
                 std::exp(std::complex<double>(0.0, ph.eta()[m] + ph.psi()[n] + ch.omega_k[k] + ch.omega_3));
    return std::norm(s) * std::pow(alpha, 4) * loss * tx;
}

LinkParams link_of(double loss0, double loss1, double tx, double noise)
{
    LinkParams l;
    l.losses = {loss0, loss1};
    l.tx_power_mw = tx;
    l.noise_mw = noise;
    return l;
}
} // namespace

TEST_CASE("phase wrapping")
{
    CHECK(wrap_2pi(0.0) == 0.0);
    CHECK(wrap_2pi(2.0 * kPi) == doctest::Approx(0.0));
    CHECK(wrap_2pi(-0.5) == doctest::Approx(2.0 * kPi - 0.5));
    CHECK(wrap_2pi(7.0 * kPi) == doctest::Approx(kPi));
    CHECK(wrap_pi(kPi) == doctest::Approx(kPi));
    CHECK(wrap_pi(-kPi) == doctest::Approx(kPi));
    CHECK(wrap_pi(1.5 * kPi) == doctest::Approx(-0.5 * kPi));
    RngStream rng(3, 0);
    for (int i = 0; i < 10000; ++i)
    {
        const double x = rng.uniform(-1e3, 1e3);
        const double w = wrap_2pi(x);
        CHECK(w >= 0.0);
        CHECK(w < 2.0 * kPi);
        CHECK(std::abs(std::remainder(x - w, 2.0 * kPi)) < 1e-9);
        const double v = wrap_pi(x);
        CHECK(v > -kPi);
        CHECK(v <= kPi);
    }
    CHECK(wrap_2pi(-1e-300) < 2.0 * kPi);
}

TEST_CASE("phase configurations are reduced and flattened")
{
    const PhaseConfig p({-1.0, 7.0}, {2.0 * kPi + 0.25});
    CHECK(p.m() == 2);
    CHECK(p.n() == 1);
    CHECK(p.eta()[0] == doctest::Approx(2.0 * kPi - 1.0));
    CHECK(p.eta()[1] == doctest::Approx(7.0 - 2.0 * kPi));
    CHECK(p.psi()[0] == doctest::Approx(0.25));
    const std::vector<double> flat = p.flat();
    REQUIRE(flat.size() == 3);
    CHECK(PhaseConfig::from_flat(flat, 2) == p);
    CHECK_THROWS_AS(PhaseConfig::from_flat(flat, 4), Error);
}

TEST_CASE("aligned unit phasors reach the coherent maximum")
{
    for (auto [m, n] : {std::pair<std::size_t, std::size_t>{1, 1}, {2, 3}, {4, 4}})
    {
        const ChannelRealization ch = testing::unit_channel(m, n);
        const PhaseConfig zero(std::vector<double>(m, 0.0), std::vector<double>(n, 0.0));
        const double mn = static_cast<double>(m * n);
        CHECK(received_power(ch, zero, 2.5e-3, 4.0, 0) == doctest::Approx(2.5e-3 * mn * mn * 4.0));
    }
}

TEST_CASE("aligned phasors with nonzero channel phases")
{
    RngStream rng(11, 0);
    const std::size_t m = 3, n = 2;
    ChannelRealization ch = testing::unit_channel(m, n);
    std::vector<double> a(m), b(n);
    for (auto &v : a)
        v = rng.uniform(0.0, 6.0);
    for (auto &v : b)
        v = rng.uniform(0.0, 6.0);
    ch.omega_k = {0.7, 0.0};
    ch.omega_3 = 1.1;
    for (std::size_t i = 0; i < m; ++i)
        ch.h_t[0](static_cast<Eigen::Index>(i)) = std::polar(1.0, a[i]);
    for (std::size_t j = 0; j < n; ++j)
        ch.h_r(static_cast<Eigen::Index>(j)) = std::polar(1.0, b[j]);
    // Cancel every (m, n) exponent: eta_m = -a_m - 1.8, psi_n = -b_n.
    std::vector<double> eta(m), psi(n);
    for (std::size_t i = 0; i < m; ++i)
        eta[i] = -a[i] - 1.8;
    for (std::size_t j = 0; j < n; ++j)
        psi[j] = -b[j];
    CHECK(received_power(ch, PhaseConfig(eta, psi), 1.0, 1.0, 0) == doctest::Approx(36.0).epsilon(1e-12));
}

TEST_CASE("alternating phasors cancel")
{
    const ChannelRealization ch = testing::unit_channel(2, 2);
    const PhaseConfig p({0.0, kPi}, {0.0, 0.0}); // exponents 0, 0, pi, pi
    CHECK(received_power(ch, p, 1.0, 1.0, 0) < 1e-25);
    const PhaseConfig q({0.0, kPi}, {0.0, kPi}); // 0, pi, pi, 2 pi
    CHECK(received_power(ch, q, 1.0, 1.0, 0) < 1e-25);
}

TEST_CASE("double sum and matrix form agree")
{
    RngStream rng(2024, 0);
    for (int t = 0; t < 100; ++t)
    {
        const std::size_t m = 1 + rng.index(6), n = 1 + rng.index(6);
        const ChannelRealization ch = random_channel(m, n, rng);
        const PhaseConfig p = random_phases(m, n, rng);
        for (std::size_t k = 0; k < 2; ++k)
        {
            const double a = received_power(ch, p, 1e-3, 10.0, k, 0.8);
            const double b = received_power_matrix(ch, p, 1e-3, 10.0, k, 0.8);
            const double c = oracle_power(ch, p, 1e-3, 10.0, k, 0.8);
            CHECK(rel_diff(a, b) <= 1e-10);
            CHECK(rel_diff(a, c) <= 1e-10);
        }
    }
}

TEST_CASE("received power is invariant to a global phase shift")
{
    RngStream rng(5, 0);
    for (int t = 0; t < 50; ++t)
    {
        const ChannelRealization ch = random_channel(4, 3, rng);
        const PhaseConfig p = random_phases(4, 3, rng);
        const double nu = rng.uniform(0.0, 2.0 * kPi);
        std::vector<double> eta = p.eta(), psi = p.psi();
        for (double &v : eta)
            v += nu;
        const double base = received_power(ch, p, 1.0, 1.0, 1);
        CHECK(rel_diff(received_power(ch, PhaseConfig(eta, p.psi()), 1.0, 1.0, 1), base) <= 1e-10);
        for (double &v : psi)
            v -= 2.0 * nu;
        CHECK(rel_diff(received_power(ch, PhaseConfig(p.eta(), psi), 1.0, 1.0, 1), base) <= 1e-10);
    }
}

TEST_CASE("received power is invariant to summation order")
{
    RngStream rng(6, 0);
    const ChannelRealization ch = random_channel(3, 5, rng);
    const PhaseConfig p = random_phases(3, 5, rng);
    // Transposing the roles of the two surfaces keeps the same set of (m, n) terms.
    ChannelRealization t;
    t.h_t = {ch.h_r};
    t.h_mn = ch.h_mn.transpose();
    t.h_r = ch.h_t[0];
    t.omega_k = {ch.omega_k[0]};
    t.omega_3 = ch.omega_3;
    const PhaseConfig q(p.psi(), p.eta());
    CHECK(rel_diff(received_power(ch, p, 1.0, 1.0, 0), received_power(t, q, 1.0, 1.0, 0)) <= 1e-12);
}

TEST_CASE("received power shape errors")
{
    const ChannelRealization ch = testing::unit_channel(2, 2);
    const PhaseConfig bad({0.0}, {0.0, 0.0});
    CHECK_THROWS_AS(received_power(ch, bad, 1.0, 1.0, 0), Error);
    const PhaseConfig ok({0.0, 0.0}, {0.0, 0.0});
    try
    {
        received_power(ch, ok, 1.0, 1.0, 2);
        FAIL("expected a shape error");
    }
    catch (const Error &e)
    {
        CHECK(e.code() == ErrorCode::shape);
    }
}

TEST_CASE("sinr examples")
{
    const double s2 = 7.9621e-11;
    const std::vector<double> eq{s2, s2};
    CHECK(sinr(eq, 0, s2) == doctest::Approx(0.5));
    const std::vector<double> alone{3e-10, 0.0};
    CHECK(sinr(alone, 0, s2) == doctest::Approx(3e-10 / s2));
    const std::vector<double> p{4e-10, 1e-10};
    CHECK(sinr(p, 0, s2) == doctest::Approx(2.22691).epsilon(1e-5));
    CHECK(sinr(p, 0, s2) == doctest::Approx(4e-10 / (1e-10 + s2)).epsilon(1e-15));
    const std::vector<double> three{1.0, 2.0, 3.0};
    CHECK(sinr(three, 1, 1.0) == doctest::Approx(0.4));
    CHECK_THROWS_AS(sinr(p, 0, 0.0), Error);
    CHECK_THROWS_AS(sinr(p, 2, 1.0), Error);
}

TEST_CASE("rate and sum rate")
{
    CHECK(rate(0.0) == 0.0);
    CHECK(rate(1.0) == 1.0);
    CHECK(rate(3.0) == 2.0);
    CHECK_THROWS_AS(rate(-0.1), Error);
    CHECK(sum_rate(std::vector<double>{0.0, 0.0}) == 0.0);
    CHECK(sum_rate(std::vector<double>{1.0, 3.0}) == 3.0);
    CHECK(sum_rate(std::vector<double>{2.2259, 0.4}) ==
          doctest::Approx(std::log2(3.2259) + std::log2(1.4)).epsilon(1e-15));
}

TEST_CASE("upper bound for a single element")
{
    const ChannelRealization ch = testing::unit_channel(1, 1);
    const LinkParams l = link_of(2e-3, 1e-3, 5.0, 1e-2);
    const double expected = std::log2(1.0 + 2e-3 * 5.0 / 1e-2) + std::log2(1.0 + 1e-3 * 5.0 / 1e-2);
    CHECK(upper_bound_sum_rate(ch, l) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("doubling every magnitude scales the bound SNR by 64")
{
    RngStream rng(8, 0);
    ChannelRealization ch = random_channel(3, 4, rng, 1);
    LinkParams l;
    l.losses = {1e-6};
    l.tx_power_mw = 1.0;
    l.noise_mw = 1.0;
    const double g1 = std::exp2(upper_bound_sum_rate(ch, l)) - 1.0;
    ch.h_t[0] *= 2.0;
    ch.h_mn *= 2.0;
    ch.h_r *= 2.0;
    const double g2 = std::exp2(upper_bound_sum_rate(ch, l)) - 1.0;
    CHECK(g2 / g1 == doctest::Approx(64.0).epsilon(1e-9));
}

TEST_CASE("coherent power bounds every phase choice")
{
    RngStream rng(9, 0);
    for (int t = 0; t < 200; ++t)
    {
        const ChannelRealization ch = random_channel(3, 3, rng);
        const double c = coherent_power(ch, 1.0, 1.0, 0);
        CHECK(received_power(ch, random_phases(3, 3, rng), 1.0, 1.0, 0) <= c * (1.0 + 1e-12));
    }
}

TEST_CASE("upper bound dominates sum rate over random phases")
{
    const Scenario s = testing::small_scenario(4, 4, 0.5);
    LinkParams l = s.link;
    l.tx_power_mw = 1e10; // well into the interference-limited regime
    RngStream rng(10, 0);
    int violations = 0;
    for (std::uint64_t t = 0; t < 100; ++t)
    {
        const ChannelRealization ch = draw_channel(s.channel, 77, t);
        for (int k = 0; k < 100; ++k)
        {
            const RatePoint pt = evaluate(ch, random_phases(4, 4, rng), l);
            if (!(pt.sum_rate <= pt.upper_bound + 1e-9))
                ++violations;
        }
    }
    CHECK(violations == 0);
}

TEST_CASE("evaluate assembles consistent fields")
{
    RngStream rng(12, 0);
    const ChannelRealization ch = random_channel(2, 3, rng);
    const PhaseConfig p = random_phases(2, 3, rng);
    const LinkParams l = link_of(1e-2, 3e-2, 2.0, 0.5);
    const RatePoint pt = evaluate(ch, p, l);
    REQUIRE(pt.p_rx.size() == 2);
    for (std::size_t k = 0; k < 2; ++k)
    {
        CHECK(pt.p_rx[k] == doctest::Approx(oracle_power(ch, p, l.losses[k], 2.0, k, 1.0)).epsilon(1e-12));
        const double g = pt.p_rx[k] / (pt.p_rx[1 - k] + 0.5);
        CHECK(pt.sinr[k] == doctest::Approx(g).epsilon(1e-14));
        CHECK(pt.rate[k] == doctest::Approx(std::log2(1.0 + g)).epsilon(1e-14));
        CHECK(pt.rate[k] >= 0.0);
    }
    CHECK(pt.sum_rate == doctest::Approx(pt.rate[0] + pt.rate[1]));
    CHECK(pt.sum_rate <= pt.upper_bound);
    LinkParams bad = l;
    bad.losses = {1.0};
    CHECK_THROWS_AS(evaluate(ch, p, bad), Error);
}
