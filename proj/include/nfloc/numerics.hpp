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

#ifndef NFLOC_NUMERICS_HPP
#define NFLOC_NUMERICS_HPP

#include <Eigen/Dense>

namespace nfloc::numerics
{

// Shared dense complex/real kernels, all double precision. Every routine
// either succeeds or throws NotPositiveDefiniteError; nothing regularizes
// silently.

/// Lower Cholesky factor L of a Hermitian positive definite matrix (m = L L^H).
Eigen::MatrixXcd chol_hermitian(const Eigen::MatrixXcd &m);
Eigen::MatrixXd chol_symmetric(const Eigen::MatrixXd &m);

/// Solve m * x = rhs for Hermitian positive definite m.
Eigen::MatrixXcd solve_hermitian(const Eigen::MatrixXcd &m, const Eigen::MatrixXcd &rhs);
Eigen::MatrixXd solve_symmetric(const Eigen::MatrixXd &m, const Eigen::MatrixXd &rhs);

/// log(det(m)) for Hermitian positive definite m, via 2 * sum(log(diag(L))).
double logdet_hermitian(const Eigen::MatrixXcd &m);
double logdet_symmetric(const Eigen::MatrixXd &m);

/// Cheap condition bound: squared ratio of the extreme diagonal entries of
/// the Cholesky factor. Exact for diagonal matrices, >= 1 always.
double condition_estimate(const Eigen::MatrixXcd &m);
double condition_estimate(const Eigen::MatrixXd &m);

} // namespace nfloc::numerics

#endif
