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

#ifndef IRSIM_RNG_HPP
#define IRSIM_RNG_HPP

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>

namespace irsim
{

// Mix a list of integers into one 64-bit stream identifier (splitmix64 finalizer chain).
std::uint64_t stream_key(std::initializer_list<std::uint64_t> parts);

// Independent random stream addressed by (seed, stream_id). Two streams built from
// the same pair produce bit-identical draws on every platform with a conforming
// std::mt19937_64; the normal/uniform transforms are written out here so they do
// not depend on library-specific distribution implementations.
class RngStream
{
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_id);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

    std::uint64_t next_u64() { return engine_(); }
    double uniform();                        // [0, 1)
    double uniform(double lo, double hi);    // [lo, hi)
    std::size_t index(std::size_t n);        // [0, n)
    double normal();                         // N(0, 1)
    std::complex<double> complex_normal();   // CN(0, 1): E|z|^2 = 1

    // Full engine state, for checkpoints.
    std::string save_state() const;
    void load_state(const std::string &state);

    bool operator==(const RngStream &other) const { return engine_ == other.engine_; }

private:
    std::uint64_t seed_;
    std::uint64_t stream_id_;
    std::mt19937_64 engine_;
};

} // namespace irsim

#endif
