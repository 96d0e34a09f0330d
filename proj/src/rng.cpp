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

#include "irsim/rng.hpp"
#include "irsim/errors.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace irsim
{

namespace
{
std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}
} // namespace

std::uint64_t stream_key(std::initializer_list<std::uint64_t> parts)
{
    std::uint64_t h = 0x6A09E667F3BCC908ULL;
    for (auto p : parts)
        h = splitmix64(h ^ splitmix64(p));
    return h;
}

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) : seed_(seed), stream_id_(stream_id)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id), static_cast<std::uint32_t>(stream_id >> 32)};
    engine_.seed(seq);
}

double RngStream::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi)
{
    return lo + (hi - lo) * uniform();
}

std::size_t RngStream::index(std::size_t n)
{
    if (n == 0)
        fail(ErrorCode::domain, "RngStream::index: empty range");
    // Lemire-style rejection keeps the result unbiased.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do
        x = engine_();
    while (x >= limit);
    return static_cast<std::size_t>(x % n);
}

double RngStream::normal()
{
    return complex_normal().real() * std::numbers::sqrt2;
}

std::complex<double> RngStream::complex_normal()
{
    // Box-Muller; u1 in (0, 1] so the log is finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-std::log(u1)); // sqrt(-2 ln u1) / sqrt(2)
    const double a = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
}

std::string RngStream::save_state() const
{
    std::ostringstream os;
    os << seed_ << ' ' << stream_id_ << ' ' << engine_;
    return os.str();
}

void RngStream::load_state(const std::string &state)
{
    std::istringstream is(state);
    std::uint64_t seed = 0, stream = 0;
    std::mt19937_64 eng;
    is >> seed >> stream >> eng;
    if (!is)
        fail(ErrorCode::io, "RngStream::load_state: malformed engine state");
    seed_ = seed;
    stream_id_ = stream;
    engine_ = eng;
}

} // namespace irsim
