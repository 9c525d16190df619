// SPDX-License-Identifier: Apache-2.0
//
// nfloc: near-field MIMO radar localization library (CRB and ML estimation)
// Copyright (C) 2026 nfloc contributors
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

#include "nfloc/numerics.hpp"

#include <cmath>

#include "nfloc/errors.hpp"

namespace nfloc::numerics
{

namespace
{

template <typename Matrix>
Eigen::LLT<Matrix> checked_llt(const Matrix &m, const char *what)
{
    if (m.rows() != m.cols())
        throw DimensionError(std::string(what) + ": matrix is not square");
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefiniteError(std::string(what) +
                                       ": Cholesky factorization failed, matrix is not positive definite");
    return llt;
}

template <typename Matrix>
double logdet_impl(const Matrix &m, const char *what)
{
    auto llt = checked_llt(m, what);
    const Matrix factor = llt.matrixL();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < factor.rows(); ++i)
        acc += std::log(std::real(factor(i, i)));
    return 2.0 * acc;
}

template <typename Matrix>
double condition_impl(const Matrix &m, const char *what)
{
    auto llt = checked_llt(m, what);
    const Matrix factor = llt.matrixL();
    double lo = std::real(factor(0, 0)), hi = std::real(factor(0, 0));
    for (Eigen::Index i = 1; i < factor.rows(); ++i)
    {
        lo = std::min(lo, std::real(factor(i, i)));
        hi = std::max(hi, std::real(factor(i, i)));
    }
    double r = hi / lo;
    return r * r;
}

} // namespace

Eigen::MatrixXcd chol_hermitian(const Eigen::MatrixXcd &m)
{
    return checked_llt(m, "chol_hermitian").matrixL();
}

Eigen::MatrixXd chol_symmetric(const Eigen::MatrixXd &m)
{
    return checked_llt(m, "chol_symmetric").matrixL();
}

Eigen::MatrixXcd solve_hermitian(const Eigen::MatrixXcd &m, const Eigen::MatrixXcd &rhs)
{
    if (m.rows() != rhs.rows())
        throw DimensionError("solve_hermitian: rhs row count does not match matrix dimension");
    return checked_llt(m, "solve_hermitian").solve(rhs);
}

Eigen::MatrixXd solve_symmetric(const Eigen::MatrixXd &m, const Eigen::MatrixXd &rhs)
{
    if (m.rows() != rhs.rows())
        throw DimensionError("solve_symmetric: rhs row count does not match matrix dimension");
    return checked_llt(m, "solve_symmetric").solve(rhs);
}

double logdet_hermitian(const Eigen::MatrixXcd &m)
{
    return logdet_impl(m, "logdet_hermitian");
}

double logdet_symmetric(const Eigen::MatrixXd &m)
{
    return logdet_impl(m, "logdet_symmetric");
}

double condition_estimate(const Eigen::MatrixXcd &m)
{
    return condition_impl(m, "condition_estimate");
}

double condition_estimate(const Eigen::MatrixXd &m)
{
    return condition_impl(m, "condition_estimate");
}

} // namespace nfloc::numerics
