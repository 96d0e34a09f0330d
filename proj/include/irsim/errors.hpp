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

#ifndef IRSIM_ERRORS_HPP
#define IRSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace irsim
{

// Numeric values are part of the C ABI (see irsim_c.h); append only.
enum class ErrorCode : int
{
    domain = 1,            // argument outside its mathematical domain
    shape = 2,             // dimension mismatch
    numerical = 3,         // factorization failed to converge
    not_psd = 4,           // matrix has a significantly negative eigenvalue
    geometry = 5,          // coincident nodes or degenerate placement
    budget = 6,            // exhaustive search would exceed its evaluation budget
    config_missing = 7,    // configuration file not found
    config_parse = 8,      // malformed configuration line
    config_constraint = 9, // value violates a documented constraint
    io = 10,               // read/write failure
    precondition = 11      // caller violated an operation precondition
};

class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string &what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string &what)
{
    throw Error(code, what);
}

} // namespace irsim

#endif
