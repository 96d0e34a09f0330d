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

#ifndef IRSIM_METRICS_HPP
#define IRSIM_METRICS_HPP

#include "irsim/channel.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace irsim
{

double wrap_2pi(double phase); // [0, 2 pi)
double wrap_pi(double phase);  // (-pi, pi]

// IRS1 phases eta_m and IRS2 phases psi_n, always reduced to [0, 2 pi).
class PhaseConfig
{
public:
    PhaseConfig() = default;
    PhaseConfig(std::vector<double> eta, std::vector<double> psi);

    // [eta_1 .. eta_M, psi_1 .. psi_N]
    static PhaseConfig from_flat(std::span<const double> flat, std::size_t m);
    std::vector<double> flat() const;

    const std::vector<double> &eta() const { return eta_; }
    const std::vector<double> &psi() const { return psi_; }
    std::size_t m() const { return eta_.size(); }
    std::size_t n() const { return psi_.size(); }

    bool operator==(const PhaseConfig &) const = default;

private:
    std::vector<double> eta_;
    std::vector<double> psi_;
};

// Per-user large-scale terms shared by every metric.
struct LinkParams
{
    std::vector<double> losses; // L_tau,k per user (linear)
    double tx_power_mw = 1.0;
    double noise_mw = 1.0;
    double alpha = 1.0; // |alpha_m| = |alpha_n|
};

// |sqrt(L) sum_m sum_n |h_t,km| alpha |H_mn| alpha |h_rn| e^{-j(...)}|^2 P_t, evaluated as the
// explicit double sum over the per-path phases.
double received_power(const ChannelRealization &ch, const PhaseConfig &phases, double loss, double tx_power_mw,
                      std::size_t user, double alpha = 1.0);

// Same quantity through the matrix product e^{-j Omega_3} h_r^H Phi_N H^H Phi_M h_t^H e^{-j Omega_k}.
double received_power_matrix(const ChannelRealization &ch, const PhaseConfig &phases, double loss,
                             double tx_power_mw, std::size_t user, double alpha = 1.0);

// Fully aligned (triangle-inequality) received power: L (sum |h_t||H||h_r| alpha^2)^2 P_t.
double coherent_power(const ChannelRealization &ch, double loss, double tx_power_mw, std::size_t user,
                      double alpha = 1.0);

double sinr(std::span<const double> p_rx, std::size_t user, double noise_mw);
double rate(double sinr);
double sum_rate(std::span<const double> sinrs);

// Sum of log2(1 + coherent_power / noise): null interference and perfect alignment.
double upper_bound_sum_rate(const ChannelRealization &ch, const LinkParams &link);

struct RatePoint
{
    std::vector<double> p_rx; // mW per user
    std::vector<double> sinr;
    std::vector<double> rate; // bits/s/Hz
    double sum_rate = 0.0;
    double upper_bound = 0.0;
};

RatePoint evaluate(const ChannelRealization &ch, const PhaseConfig &phases, const LinkParams &link);

} // namespace irsim

#endif
