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

#include "irsim/channel.hpp"
#include "irsim/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <utility>

namespace irsim
{

ComplexMatrix correlation_matrix(const CorrelationSpec &spec)
{
    if (!(spec.rho >= 0.0 && spec.rho <= 1.0))
        fail(ErrorCode::domain, "correlation_matrix: rho must lie in [0, 1], got " + std::to_string(spec.rho));
    if (!std::isfinite(spec.theta))
        fail(ErrorCode::domain, "correlation_matrix: theta must be finite");
    if (spec.size == 0)
        fail(ErrorCode::shape, "correlation_matrix: size must be >= 1");

    const auto n = static_cast<Eigen::Index>(spec.size);
    ComplexMatrix r(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b)
        {
            const double d = static_cast<double>(a - b);
            const double mag = (a == b) ? 1.0 : std::pow(spec.rho, std::abs(d));
            r(a, b) = std::polar(mag, -d * spec.theta); // exp(i abs(a-b) theta) above the diagonal, conjugate below
        }
    return r;
}

ComplexVector sample_rician(std::size_t length, double k_factor, const ComplexVector &los, RngStream &rng)
{
    if (!(k_factor >= 0.0) || !std::isfinite(k_factor))
        fail(ErrorCode::domain, "sample_rician: k_factor must be finite and >= 0");
    if (static_cast<std::size_t>(los.size()) != length)
        fail(ErrorCode::shape, "sample_rician: los has " + std::to_string(los.size()) + " entries, expected " +
                                   std::to_string(length));
    const double a_los = std::sqrt(k_factor / (k_factor + 1.0));
    const double a_nlos = std::sqrt(1.0 / (k_factor + 1.0));
    ComplexVector h(static_cast<Eigen::Index>(length));
    for (Eigen::Index i = 0; i < h.size(); ++i)
        h(i) = a_los * los(i) + a_nlos * rng.complex_normal();
    return h;
}

ComplexMatrix sample_correlated_rayleigh(const ComplexMatrix &row_sqrt, const ComplexMatrix &col_sqrt, RngStream &rng)
{
    ComplexMatrix g(row_sqrt.cols(), col_sqrt.cols());
    for (Eigen::Index i = 0; i < g.rows(); ++i)
        for (Eigen::Index j = 0; j < g.cols(); ++j)
            g(i, j) = rng.complex_normal();
    return row_sqrt * g * col_sqrt.adjoint();
}

ComplexMatrix sample_correlated_rayleigh(std::size_t m, std::size_t n, const CorrelationSpec &row_spec,
                                         const CorrelationSpec &col_spec, RngStream &rng)
{
    if (row_spec.size != m || col_spec.size != n)
        fail(ErrorCode::shape, "sample_correlated_rayleigh: correlation sizes do not match the channel shape");
    return sample_correlated_rayleigh(psd_sqrt(correlation_matrix(row_spec)), psd_sqrt(correlation_matrix(col_spec)),
                                      rng);
}

double path_phase(double distance, double wavelength)
{
    if (!(wavelength > 0.0))
        fail(ErrorCode::domain, "path_phase: wavelength must be positive");
    if (!(distance >= 0.0))
        fail(ErrorCode::domain, "path_phase: distance must be non-negative");
    return 2.0 * std::numbers::pi * distance / wavelength;
}

ComplexVector ones_los(std::size_t length)
{
    return ComplexVector::Ones(static_cast<Eigen::Index>(length));
}

ComplexVector steering_los(std::size_t length, double angle, double spacing_wavelengths)
{
    ComplexVector v(static_cast<Eigen::Index>(length));
    const double step = 2.0 * std::numbers::pi * spacing_wavelengths * std::sin(angle);
    for (Eigen::Index k = 0; k < v.size(); ++k)
        v(k) = std::polar(1.0, step * static_cast<double>(k));
    return v;
}

ChannelModel make_channel_model(std::size_t m, std::size_t n, double k1, double k2, std::vector<ComplexVector> los_t,
                                ComplexVector los_r, const CorrelationSpec &row_spec, const CorrelationSpec &col_spec,
                                std::vector<double> omega_k, double omega_3)
{
    if (m == 0 || n == 0)
        fail(ErrorCode::shape, "make_channel_model: M and N must be >= 1");
    if (los_t.size() != omega_k.size())
        fail(ErrorCode::shape, "make_channel_model: one LOS vector and one path phase per user");
    for (const auto &v : los_t)
        if (static_cast<std::size_t>(v.size()) != m)
            fail(ErrorCode::shape, "make_channel_model: user LOS vector length differs from M");
    if (static_cast<std::size_t>(los_r.size()) != n)
        fail(ErrorCode::shape, "make_channel_model: receiver LOS vector length differs from N");
    if (row_spec.size != m || col_spec.size != n)
        fail(ErrorCode::shape, "make_channel_model: correlation sizes do not match M, N");

    ChannelModel model;
    model.m = m;
    model.n = n;
    model.k1 = k1;
    model.k2 = k2;
    model.los_t = std::move(los_t);
    model.los_r = std::move(los_r);
    model.row_sqrt = psd_sqrt(correlation_matrix(row_spec));
    model.col_sqrt = psd_sqrt(correlation_matrix(col_spec));
    model.omega_k = std::move(omega_k);
    model.omega_3 = omega_3;
    return model;
}

ChannelRealization draw_channel(const ChannelModel &model, RngStream &rng)
{
    ChannelRealization ch;
    ch.h_t.reserve(model.los_t.size());
    for (const auto &los : model.los_t)
        ch.h_t.push_back(sample_rician(model.m, model.k1, los, rng));
    ch.h_mn = sample_correlated_rayleigh(model.row_sqrt, model.col_sqrt, rng);
    ch.h_r = sample_rician(model.n, model.k2, model.los_r, rng);
    ch.omega_k = model.omega_k;
    ch.omega_3 = model.omega_3;
    return ch;
}

namespace
{
constexpr std::uint64_t kChannelTag = 0xC4A77E1ULL;
enum Link : std::uint64_t
{
    link_user_base = 0,
    link_irs_irs = 1000,
    link_receiver = 1001
};
} // namespace

ChannelRealization draw_channel(const ChannelModel &model, std::uint64_t seed, std::uint64_t trial)
{
    ChannelRealization ch;
    ch.h_t.reserve(model.los_t.size());
    for (std::size_t k = 0; k < model.los_t.size(); ++k)
    {
        RngStream rng(seed, stream_key({kChannelTag, trial, link_user_base + k}));
        ch.h_t.push_back(sample_rician(model.m, model.k1, model.los_t[k], rng));
    }
    {
        RngStream rng(seed, stream_key({kChannelTag, trial, link_irs_irs}));
        ch.h_mn = sample_correlated_rayleigh(model.row_sqrt, model.col_sqrt, rng);
    }
    {
        RngStream rng(seed, stream_key({kChannelTag, trial, link_receiver}));
        ch.h_r = sample_rician(model.n, model.k2, model.los_r, rng);
    }
    ch.omega_k = model.omega_k;
    ch.omega_3 = model.omega_3;
    return ch;
}

} // namespace irsim
