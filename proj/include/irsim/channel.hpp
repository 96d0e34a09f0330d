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

#ifndef IRSIM_CHANNEL_HPP
#define IRSIM_CHANNEL_HPP

#include "irsim/numerics.hpp"
#include "irsim/rng.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace irsim
{

// Exponential spatial correlation: [R]_{a,b} = rho^|a-b| * exp(i (a-b) theta).
struct CorrelationSpec
{
    double rho = 0.0;
    double theta = 0.0; // per-element phase progression, radians
    std::size_t size = 1;
};

// One draw of every small-scale link plus the deterministic bulk path phases.
struct ChannelRealization
{
    std::vector<ComplexVector> h_t; // per user, M entries (user -> IRS1)
    ComplexMatrix h_mn;             // M x N (IRS1 -> IRS2)
    ComplexVector h_r;              // N entries (IRS2 -> receiver)
    std::vector<double> omega_k;    // per user, 2 pi r_tk / lambda
    double omega_3 = 0.0;           // 2 pi r_3 / lambda

    std::size_t m() const { return static_cast<std::size_t>(h_mn.rows()); }
    std::size_t n() const { return static_cast<std::size_t>(h_mn.cols()); }
    std::size_t users() const { return h_t.size(); }
};

// Static description of the fading process for one scenario. The correlation
// square roots are factored once here and reused by every draw.
struct ChannelModel
{
    std::size_t m = 0;
    std::size_t n = 0;
    double k1 = 0.0; // Rician factor, user -> IRS1
    double k2 = 0.0; // Rician factor, IRS2 -> receiver
    std::vector<ComplexVector> los_t;
    ComplexVector los_r;
    ComplexMatrix row_sqrt; // psd_sqrt(R_M)
    ComplexMatrix col_sqrt; // psd_sqrt(R_N)
    std::vector<double> omega_k;
    double omega_3 = 0.0;
};

ComplexMatrix correlation_matrix(const CorrelationSpec &spec);

ComplexVector sample_rician(std::size_t length, double k_factor, const ComplexVector &los, RngStream &rng);

// H = S_M G S_N^H with G iid CN(0,1): Kronecker-separable correlated Rayleigh.
ComplexMatrix sample_correlated_rayleigh(std::size_t m, std::size_t n, const CorrelationSpec &row_spec,
                                         const CorrelationSpec &col_spec, RngStream &rng);
ComplexMatrix sample_correlated_rayleigh(const ComplexMatrix &row_sqrt, const ComplexMatrix &col_sqrt,
                                         RngStream &rng);

double path_phase(double distance, double wavelength);

ComplexVector ones_los(std::size_t length);
// Uniform linear array response exp(i 2 pi k d sin(angle)), d in wavelengths.
ComplexVector steering_los(std::size_t length, double angle, double spacing_wavelengths);

ChannelModel make_channel_model(std::size_t m, std::size_t n, double k1, double k2,
                                std::vector<ComplexVector> los_t, ComplexVector los_r,
                                const CorrelationSpec &row_spec, const CorrelationSpec &col_spec,
                                std::vector<double> omega_k, double omega_3);

// Sequential draw from one stream: users' h_t in order, then H, then h_r.
ChannelRealization draw_channel(const ChannelModel &model, RngStream &rng);

// Order-independent draw: each link of trial `trial` gets its own stream.
ChannelRealization draw_channel(const ChannelModel &model, std::uint64_t seed, std::uint64_t trial);

} // namespace irsim

#endif
