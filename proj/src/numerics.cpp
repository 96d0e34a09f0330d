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

#include "irsim/numerics.hpp"
#include "irsim/errors.hpp"

#include <cmath>
#include <string>

namespace irsim
{

bool all_finite(const ComplexMatrix &a)
{
    for (Eigen::Index i = 0; i < a.size(); ++i)
    {
        const cplx z = a.data()[i];
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            return false;
    }
    return true;
}

namespace
{

double j1_series(double x)
{
    // sum_k (-1)^k (x/2)^(2k+1) / (k! (k+1)!)
    const double h = 0.5 * x;
    const double h2 = h * h;
    double term = h;
    double sum = term;
    for (int k = 1; k < 60; ++k)
    {
        term *= -h2 / (static_cast<double>(k) * static_cast<double>(k + 1));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum))
            break;
    }
    return sum;
}

double j1_miller(double x)
{
    // Start well above x so the seeded minimal solution has converged by k = 1.
    int top = static_cast<int>(x) + 60;
    top += top % 2;

    const double rescale = 1e-200;
    double next = 0.0; // J_{k+1}
    double cur = 1e-30; // J_k (unnormalized)
    double norm = 0.0;  // J_0 + 2 * sum J_{2k}
    double j1 = 0.0;
    for (int k = top; k > 0; --k)
    {
        const double prev = (2.0 * k / x) * cur - next; // J_{k-1}
        next = cur;
        cur = prev;
        if (k - 1 == 1)
            j1 = cur;
        if ((k - 1) % 2 == 0 && k - 1 > 0)
            norm += 2.0 * cur;
        if (std::abs(cur) > 1e200)
        {
            cur *= rescale;
            next *= rescale;
            norm *= rescale;
            j1 *= rescale;
        }
    }
    norm += cur; // J_0
    return j1 / norm;
}

} // namespace

double bessel_j1(double x)
{
    if (!std::isfinite(x))
        fail(ErrorCode::domain, "bessel_j1: non-finite argument");
    const double ax = std::abs(x);
    const double value = ax <= 8.0 ? j1_series(ax) : j1_miller(ax);
    return x < 0.0 ? -value : value;
}

SvdFactors svd(const ComplexMatrix &a)
{
    if (a.size() == 0)
        fail(ErrorCode::shape, "svd: empty matrix");
    if (!all_finite(a))
        fail(ErrorCode::domain, "svd: matrix has non-finite entries");

    Eigen::JacobiSVD<Eigen::MatrixXcd> dec(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (dec.info() != Eigen::Success)
        fail(ErrorCode::numerical, "svd: Jacobi sweeps did not converge for a " + std::to_string(a.rows()) + "x" +
                                       std::to_string(a.cols()) + " matrix");
    return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
}

namespace
{
double default_tol(const SvdFactors &f)
{
    const double smax = f.singular_values.size() ? f.singular_values(0) : 0.0;
    return 1e-10 * smax;
}
} // namespace

std::size_t numerical_rank(const ComplexMatrix &a, std::optional<double> rank_tol)
{
    const SvdFactors f = svd(a);
    const double tol = rank_tol.value_or(default_tol(f));
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < f.singular_values.size(); ++i)
        if (f.singular_values(i) > tol)
            ++r;
    return r;
}

ComplexMatrix pseudo_inverse(const ComplexMatrix &a, std::optional<double> rank_tol)
{
    if (rank_tol && !(*rank_tol > 0.0))
        fail(ErrorCode::domain, "pseudo_inverse: rank_tol must be positive");
    const SvdFactors f = svd(a);
    const double tol = rank_tol.value_or(default_tol(f));

    Eigen::VectorXd inv = Eigen::VectorXd::Zero(f.singular_values.size());
    for (Eigen::Index i = 0; i < inv.size(); ++i)
        if (f.singular_values(i) > tol)
            inv(i) = 1.0 / f.singular_values(i);
    return f.v * inv.asDiagonal() * f.u.adjoint();
}

ComplexMatrix psd_sqrt(const ComplexMatrix &r, double clamp_tol)
{
    if (r.rows() != r.cols() || r.size() == 0)
        fail(ErrorCode::shape, "psd_sqrt: matrix must be square and non-empty");
    if (!all_finite(r))
        fail(ErrorCode::domain, "psd_sqrt: matrix has non-finite entries");
    const double scale = std::max(1.0, r.cwiseAbs().maxCoeff());
    if ((r - r.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        fail(ErrorCode::domain, "psd_sqrt: matrix is not Hermitian");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(r);
    if (eig.info() != Eigen::Success)
        fail(ErrorCode::numerical, "psd_sqrt: eigen-decomposition did not converge");

    Eigen::VectorXd lambda = eig.eigenvalues();
    for (Eigen::Index i = 0; i < lambda.size(); ++i)
    {
        if (lambda(i) < -clamp_tol)
            fail(ErrorCode::not_psd, "psd_sqrt: eigenvalue " + std::to_string(lambda(i)) + " below -" +
                                         std::to_string(clamp_tol));
        lambda(i) = lambda(i) < 0.0 ? 0.0 : std::sqrt(lambda(i));
    }
    const Eigen::MatrixXcd &v = eig.eigenvectors();
    return v * lambda.asDiagonal() * v.adjoint();
}

ComplexMatrix least_squares_min_norm(const ComplexMatrix &a, const ComplexMatrix &c)
{
    if (a.rows() != c.rows())
        fail(ErrorCode::shape, "least_squares_min_norm: a has " + std::to_string(a.rows()) + " rows, c has " +
                                   std::to_string(c.rows()));
    return pseudo_inverse(a) * c;
}

} // namespace irsim
