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

#include "irsim/errors.hpp"
#include "irsim/harness.hpp"
#include "irsim/solvers.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace irsim
{

namespace
{

Scenario small_scenario(std::size_t m, std::size_t n, double rho)
{
    ScenarioConfig c;
    c.irs1_elements = m;
    c.irs2_elements = n;
    c.rho = rho;
    return make_scenario(c);
}

SelfTestCheck check_noise()
{
    // -174 dBm/Hz over 2 GHz with a 10 dB figure: -71 dBm.
    const double p = noise_power(-174.0, 2e9, 10.0);
    const double rel = std::abs(p - 7.9621e-8) / 7.9621e-8;
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.6e mW (rel. error %.2e)", p, rel);
    return {"noise power constant", rel <= 1e-3, buf};
}

SelfTestCheck check_power_forms()
{
    double worst = 0.0;
    RngStream rng(11, 0);
    for (int i = 0; i < 20; ++i)
    {
        const Scenario sc = small_scenario(2 + rng.index(5), 2 + rng.index(5), rng.uniform());
        const ChannelRealization ch = draw_channel(sc.channel, rng);
        const PhaseConfig ph = solve_random(rng, sc.m(), sc.n());
        const double a = received_power(ch, ph, 1.0, 1.0, 0);
        const double b = received_power_matrix(ch, ph, 1.0, 1.0, 0);
        worst = std::max(worst, std::abs(a - b) / std::max(std::abs(b), 1e-300));
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "max rel. difference %.2e", worst);
    return {"double sum equals matrix form", worst <= 1e-10, buf};
}

SelfTestCheck check_rank()
{
    std::string bad;
    for (std::size_t m = 2; m <= 6; ++m)
        for (std::size_t n = 2; n <= 6; ++n)
            if (numerical_rank(alignment_matrix(m, n).cast<cplx>()) != m + n - 1)
                bad += " " + std::to_string(m) + "x" + std::to_string(n);
    return {"alignment matrix rank M+N-1", bad.empty(), bad.empty() ? "2 <= M,N <= 6" : "fails at" + bad};
}

SelfTestCheck check_coherent()
{
    double worst = 0.0;
    RngStream rng(12, 0);
    for (int i = 0; i < 20; ++i)
    {
        const Scenario sc = small_scenario(2 + rng.index(5), 1, rng.uniform());
        const ChannelRealization ch = draw_channel(sc.channel, rng);
        const PhaseConfig ph = solve_pinv(assemble_system(ch, 0));
        const double p = received_power(ch, ph, 1.0, 1.0, 0);
        const double c = coherent_power(ch, 1.0, 1.0, 0);
        worst = std::max(worst, std::abs(p - c) / c);
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "max rel. gap %.2e", worst);
    return {"pinv reaches coherent power for N=1", worst <= 1e-6, buf};
}

SelfTestCheck check_dominance()
{
    const Scenario sc = small_scenario(4, 4, 0.9);
    std::size_t violations = 0;
    RngStream rng(13, 0);
    for (int i = 0; i < 1000; ++i)
    {
        const ChannelRealization ch = draw_channel(sc.channel, rng);
        const RatePoint pt = evaluate(ch, solve_random(rng, sc.m(), sc.n()), sc.link);
        violations += pt.sum_rate > pt.upper_bound;
    }
    return {"sum rate below upper bound", violations == 0, std::to_string(violations) + " violations in 1000"};
}

SelfTestCheck check_gradients()
{
    RngStream rng(14, 0);
    const MlpParams net = mlp_init({4, 8, 8, 2}, {Activation::relu, Activation::tanh, Activation::linear}, rng);
    Eigen::MatrixXd x(4, 3), w(2, 3);
    for (Eigen::Index i = 0; i < x.size(); ++i)
        x(i) = rng.uniform(-1.0, 1.0);
    for (Eigen::Index i = 0; i < w.size(); ++i)
        w(i) = rng.uniform(-1.0, 1.0);
    auto loss = [&](const MlpParams &p) { return forward(p, x).cwiseProduct(w).sum(); };

    ForwardCache cache;
    forward(net, x, &cache);
    const std::vector<double> analytic = backward(net, cache, w).params.flatten();
    std::vector<double> theta = net.flatten();
    double worst = 0.0;
    const double h = 1e-5;
    MlpParams probe = net;
    for (std::size_t i = 0; i < theta.size(); ++i)
    {
        const double saved = theta[i];
        theta[i] = saved + h;
        probe.unflatten(theta);
        const double up = loss(probe);
        theta[i] = saved - h;
        probe.unflatten(theta);
        const double down = loss(probe);
        theta[i] = saved;
        const double fd = (up - down) / (2.0 * h);
        worst = std::max(worst, std::abs(fd - analytic[i]) / std::max(1.0, std::abs(fd)));
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "max rel. error %.2e", worst);
    return {"backprop matches finite differences", worst <= 1e-4, buf};
}

SelfTestCheck check_replay()
{
    ReplayBuffer buf(8);
    for (int i = 0; i < 11; ++i)
        buf.push({{}, {}, static_cast<double>(i), {}});
    const bool ok = buf.size() == 8 && buf.at(0).reward == 3.0 && buf.at(7).reward == 10.0;
    return {"replay buffer evicts oldest", ok, "capacity 8, 11 insertions"};
}

SelfTestCheck check_complexity()
{
    ComplexityInput in;
    const ComplexityReport r = complexity_report(in);
    ComplexityInput big;
    big.m = big.n = 64;
    big.n_blk = 6;
    const ComplexityReport rb = complexity_report(big);
    ComplexityInput es;
    es.m = es.n = 4;
    const bool ok = r.drl == 37796.0 && rb.block < rb.pinv && complexity_report(es).exhaustive == 2.0 * std::pow(73.0, 8);
    return {"complexity formulas", ok, "C_DRL = " + std::to_string(static_cast<long long>(r.drl))};
}

SelfTestCheck check_config_roundtrip()
{
    ExperimentConfig c;
    c.scenario.rho = 0.75;
    c.scenario.corr_theta = 0.3;
    c.sweep.ratios = {0.25, 0.5};
    const ExperimentConfig back = parse_config(serialize_config(c));
    return {"config round trip", back == c, "serialize -> parse"};
}

} // namespace

std::vector<SelfTestCheck> run_selftest()
{
    std::vector<SelfTestCheck> out;
    for (auto fn : {check_noise, check_power_forms, check_rank, check_coherent, check_dominance, check_gradients,
                    check_replay, check_complexity, check_config_roundtrip})
    {
        try
        {
            out.push_back(fn());
        }
        catch (const std::exception &e)
        {
            out.push_back({"check threw", false, e.what()});
        }
    }
    return out;
}

std::string format_selftest(const std::vector<SelfTestCheck> &checks)
{
    std::ostringstream os;
    std::size_t failed = 0;
    for (const auto &c : checks)
    {
        os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        failed += !c.passed;
    }
    os << checks.size() - failed << "/" << checks.size() << " checks passed\n";
    return os.str();
}

} // namespace irsim
