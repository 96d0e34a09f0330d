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

#ifndef IRSIM_NUMERICS_HPP
#define IRSIM_NUMERICS_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <optional>

namespace irsim
{

using cplx = std::complex<double>;

// Row-major to match the storage order the rest of the library reasons in.
using ComplexMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;

struct SvdFactors
{
    ComplexMatrix u;                 // rows x r, orthonormal columns
    Eigen::VectorXd singular_values; // descending, >= 0
    ComplexMatrix v;                 // cols x r, orthonormal columns
};

bool all_finite(const ComplexMatrix &a);

// Bessel function of the first kind, order one. Power series for |x| <= 8,
// Miller backward recurrence (normalized by J0 + 2 sum J_2k = 1) beyond.
double bessel_j1(double x);

// Thin SVD. Throws ErrorCode::numerical if the factorization fails.
SvdFactors svd(const ComplexMatrix &a);

// Number of singular values above `rank_tol` (default 1e-10 * sigma_max).
std::size_t numerical_rank(const ComplexMatrix &a, std::optional<double> rank_tol = std::nullopt);

// Moore-Penrose inverse via SVD; singular values at or below rank_tol are dropped.
ComplexMatrix pseudo_inverse(const ComplexMatrix &a, std::optional<double> rank_tol = std::nullopt);

// Factor S with S * S^H == r for a Hermitian PSD r. Eigenvalues in [-clamp_tol, 0)
// are treated as zero so rank-deficient (rho = 1) correlation matrices factor cleanly.
ComplexMatrix psd_sqrt(const ComplexMatrix &r, double clamp_tol = 1e-10);

// Minimum-norm least-squares solution of a * x = c (c may have several columns).
ComplexMatrix least_squares_min_norm(const ComplexMatrix &a, const ComplexMatrix &c);

} // namespace irsim

#endif
