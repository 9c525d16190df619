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

#ifndef NFLOC_CRB_HPP
#define NFLOC_CRB_HPP

#include <Eigen/Dense>
#include <vector>

#include "nfloc/channel.hpp"
#include "nfloc/scene.hpp"
#include "nfloc/waveform.hpp"

namespace nfloc
{

// Fisher information for the 5K real parameters
// [x_1..x_K, y_1..y_K, z_1..z_K, Re(b)_1..K, Im(b)_1..K], in that order.

/// The ten complex K x K blocks the real Fisher matrix is assembled from.
struct FisherBlocks
{
    Eigen::MatrixXcd xx, yy, zz; // position auto blocks
    Eigen::MatrixXcd xy, xz, yz; // position cross blocks
    Eigen::MatrixXcd xb, yb, zb; // position-coefficient coupling
    Eigen::MatrixXcd bb;         // coefficient block
};

/// Blocks, assembled 5K x 5K Fisher matrix, its inverse and a cheap
/// condition bound on the Fisher matrix.
struct FisherBundle
{
    FisherBlocks blocks;
    Eigen::MatrixXd fisher;
    Eigen::MatrixXd crb;
    double condition = 0.0;
};

/// Closed-form Fisher blocks for a steering set, coefficient vector b,
/// transmit sample covariance R_X, noise covariance Q and snapshot count L.
/// Each block is a sum of Hadamard products of array-side Gram matrices
/// (through Q^{-1}) and waveform-side Gram matrices (through conj(R_X)).
FisherBlocks fisher_blocks(const SteeringSet &steering, const Eigen::VectorXcd &b,
                           const Eigen::MatrixXcd &rx_cov, const NoiseCovariance &q, int l);

/// Same blocks computed from the transmit block itself: every waveform-side
/// Gram V_a^H conj(R_X) V_b equals (1/L) conj(V_a^T X)(V_b^T X)^T, so the
/// N x N covariance never has to be formed. Exact identity, not an
/// approximation; this is what keeps very large arrays affordable.
FisherBlocks fisher_blocks(const SteeringSet &steering, const Eigen::VectorXcd &b,
                           const SignalBlock &x, const NoiseCovariance &q);

/// Real symmetric 5K x 5K matrix: twice the block layout with real parts on
/// the x/y/z/Re(b) band and negated imaginary parts coupling to Im(b).
Eigen::MatrixXd assemble_fisher(const FisherBlocks &blocks);

/// Inverse of the Fisher matrix. Refuses (IdentifiabilityError naming the
/// offending eigenvalue) when the condition estimate exceeds `condition_cap`
/// or the factorization fails; a regularized inverse would be silently wrong.
Eigen::MatrixXd crb_matrix(const Eigen::MatrixXd &fisher, double condition_cap = 1e12);

/// Sum of the x/y/z CRB diagonal entries of target k (0-based), in m^2.
double position_crb(const Eigen::MatrixXd &crb, int k);

/// position_crb for every target.
std::vector<double> position_crbs(const Eigen::MatrixXd &crb);

/// Full pipeline: steering set for the scene's targets under `model`
/// (Constant maps each coefficient to its reference-path-loss equivalent),
/// closed-form blocks, assembly and inversion.
FisherBundle compute_crb(const Scene &scene, const Eigen::MatrixXcd &rx_cov, int l,
                         AmplitudeModel model = AmplitudeModel::Exact, double condition_cap = 1e12);

/// compute_crb from the transmit block (covariance-free waveform Grams).
FisherBundle compute_crb(const Scene &scene, const SignalBlock &x,
                         AmplitudeModel model = AmplitudeModel::Exact, double condition_cap = 1e12);

/// Reflection coefficients of the constant-amplitude comparison model:
/// b_k * (lambda/(4*pi))^2 / (||l_ref_rx - l_k|| * ||l_ref_tx - l_k||).
Eigen::VectorXcd reference_coefficients(const Scene &scene);

/// Per-target position CRBs of the constant-amplitude comparison model.
std::vector<double> constant_amplitude_crb(const Scene &scene, const Eigen::MatrixXcd &rx_cov, int l,
                                           double condition_cap = 1e12);

/// Fisher matrix for the same 5K parameters computed without the closed
/// forms: central finite differences of the snapshot mean through the
/// Gaussian Fisher identity. Position steps are step * (mean distance to the
/// array references), coefficient steps step * (1 + |b_k|). Serves as the
/// independent anti-regression oracle for the closed-form blocks.
Eigen::MatrixXd numeric_fisher_oracle(const Scene &scene, const SignalBlock &x,
                                      const NoiseCovariance &q, double step = 1e-6);

} // namespace nfloc

#endif
