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

#include "irsim/metrics.hpp"
#include "irsim/errors.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <string>

namespace irsim
{

namespace
{
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_shapes(const ChannelRealization &ch, const PhaseConfig &phases, std::size_t user)
{
    if (user >= ch.users())
        fail(ErrorCode::shape, "user index " + std::to_string(user) + " out of range");
    if (phases.m() != ch.m() || phases.n() != ch.n())
        fail(ErrorCode::shape, "phase configuration is " + std::to_string(phases.m()) + "+" +
                                   std::to_string(phases.n()) + ", channel is " + std::to_string(ch.m()) + "x" +
                                   std::to_string(ch.n()));
    if (static_cast<std::size_t>(ch.h_t[user].size()) != ch.m() || static_cast<std::size_t>(ch.h_r.size()) != ch.n())
        fail(ErrorCode::shape, "channel vectors do not match H");
}
} // namespace

double wrap_2pi(double phase)
{
    double w = std::fmod(phase, kTwoPi);
    if (w < 0.0)
        w += kTwoPi;
    return w >= kTwoPi ? 0.0 : w;
}

double wrap_pi(double phase)
{
    double w = wrap_2pi(phase);
    return w > std::numbers::pi ? w - kTwoPi : w;
}

PhaseConfig::PhaseConfig(std::vector<double> eta, std::vector<double> psi) : eta_(std::move(eta)), psi_(std::move(psi))
{
    for (double &v : eta_)
        v = wrap_2pi(v);
    for (double &v : psi_)
        v = wrap_2pi(v);
}

PhaseConfig PhaseConfig::from_flat(std::span<const double> flat, std::size_t m)
{
    if (m > flat.size())
        fail(ErrorCode::shape, "PhaseConfig::from_flat: M exceeds vector length");
    return PhaseConfig(std::vector<double>(flat.begin(), flat.begin() + static_cast<std::ptrdiff_t>(m)),
                       std::vector<double>(flat.begin() + static_cast<std::ptrdiff_t>(m), flat.end()));
}

std::vector<double> PhaseConfig::flat() const
{
    std::vector<double> out(eta_);
    out.insert(out.end(), psi_.begin(), psi_.end());
    return out;
}

double received_power(const ChannelRealization &ch, const PhaseConfig &phases, double loss, double tx_power_mw,
                      std::size_t user, double alpha)
{
    check_shapes(ch, phases, user);
    const std::size_t m_count = ch.m(), n_count = ch.n();
    const ComplexVector &ht = ch.h_t[user];
    const double bulk = ch.omega_k[user] + ch.omega_3;

    cplx amp = 0.0;
    for (std::size_t m = 0; m < m_count; ++m)
    {
        const auto mi = static_cast<Eigen::Index>(m);
        const double a_t = std::abs(ht(mi));
        const double p_t = std::arg(ht(mi)) + phases.eta()[m];
        for (std::size_t n = 0; n < n_count; ++n)
        {
            const auto ni = static_cast<Eigen::Index>(n);
            const cplx hmn = ch.h_mn(mi, ni);
            const cplx hr = ch.h_r(ni);
            const double mag = a_t * std::abs(hmn) * std::abs(hr);
            const double phase = p_t + std::arg(hmn) + phases.psi()[n] + std::arg(hr) + bulk;
            amp += std::polar(mag, -phase);
        }
    }
    const double p = std::norm(amp) * alpha * alpha * alpha * alpha * loss * tx_power_mw;
#ifndef NDEBUG
    const double q = received_power_matrix(ch, phases, loss, tx_power_mw, user, alpha);
    assert(std::abs(p - q) <= 1e-9 * std::max({p, q, 1e-300}));
#endif
    return p;
}

double received_power_matrix(const ChannelRealization &ch, const PhaseConfig &phases, double loss,
                             double tx_power_mw, std::size_t user, double alpha)
{
    check_shapes(ch, phases, user);
    const auto m = static_cast<Eigen::Index>(ch.m());
    const auto n = static_cast<Eigen::Index>(ch.n());
    ComplexVector phi_m(m), phi_n(n);
    for (Eigen::Index i = 0; i < m; ++i)
        phi_m(i) = alpha * std::polar(1.0, -phases.eta()[static_cast<std::size_t>(i)]);
    for (Eigen::Index i = 0; i < n; ++i)
        phi_n(i) = alpha * std::polar(1.0, -phases.psi()[static_cast<std::size_t>(i)]);

    // h_r^H Phi_N H^H Phi_M h_t^H, with h_t stored as the row vector's entries.
    const ComplexVector right = phi_m.asDiagonal() * ch.h_t[user].conjugate();
    const ComplexVector mid = ch.h_mn.adjoint() * right;
    const cplx core = ch.h_r.adjoint() * (phi_n.asDiagonal() * mid);
    const cplx amp = std::polar(1.0, -ch.omega_3) * core * std::polar(1.0, -ch.omega_k[user]);
    return std::norm(amp) * loss * tx_power_mw;
}

double coherent_power(const ChannelRealization &ch, double loss, double tx_power_mw, std::size_t user, double alpha)
{
    if (user >= ch.users())
        fail(ErrorCode::shape, "coherent_power: user index out of range");
    const Eigen::VectorXd at = ch.h_t[user].cwiseAbs();
    const Eigen::VectorXd ar = ch.h_r.cwiseAbs();
    const double s = at.transpose() * ch.h_mn.cwiseAbs() * ar;
    const double a2 = alpha * alpha;
    return s * s * a2 * a2 * loss * tx_power_mw;
}

double sinr(std::span<const double> p_rx, std::size_t user, double noise_mw)
{
    if (user >= p_rx.size())
        fail(ErrorCode::shape, "sinr: user index out of range");
    if (!(noise_mw > 0.0))
        fail(ErrorCode::domain, "sinr: noise power must be positive");
    double interference = 0.0;
    for (std::size_t i = 0; i < p_rx.size(); ++i)
        if (i != user)
            interference += p_rx[i];
    return p_rx[user] / (interference + noise_mw);
}

double rate(double s)
{
    if (!(s >= 0.0))
        fail(ErrorCode::domain, "rate: SINR must be non-negative");
    return std::log2(1.0 + s);
}

double sum_rate(std::span<const double> sinrs)
{
    double total = 0.0;
    for (double s : sinrs)
        total += rate(s);
    return total;
}

double upper_bound_sum_rate(const ChannelRealization &ch, const LinkParams &link)
{
    if (link.losses.size() != ch.users())
        fail(ErrorCode::shape, "upper_bound_sum_rate: one loss per user required");
    double total = 0.0;
    for (std::size_t k = 0; k < ch.users(); ++k)
        total += rate(coherent_power(ch, link.losses[k], link.tx_power_mw, k, link.alpha) / link.noise_mw);
    return total;
}

RatePoint evaluate(const ChannelRealization &ch, const PhaseConfig &phases, const LinkParams &link)
{
    if (link.losses.size() != ch.users())
        fail(ErrorCode::shape, "evaluate: one loss per user required");
    RatePoint pt;
    const std::size_t k_users = ch.users();
    pt.p_rx.resize(k_users);
    for (std::size_t k = 0; k < k_users; ++k)
        pt.p_rx[k] = received_power(ch, phases, link.losses[k], link.tx_power_mw, k, link.alpha);
    for (std::size_t k = 0; k < k_users; ++k)
    {
        pt.sinr.push_back(sinr(pt.p_rx, k, link.noise_mw));
        pt.rate.push_back(rate(pt.sinr.back()));
    }
    pt.sum_rate = sum_rate(pt.sinr);
    pt.upper_bound = upper_bound_sum_rate(ch, link);
    return pt;
}

} // namespace irsim
