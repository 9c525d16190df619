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

#ifndef NFLOC_ESTIMATOR_HPP
#define NFLOC_ESTIMATOR_HPP

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "nfloc/channel.hpp"
#include "nfloc/scene.hpp"
#include "nfloc/waveform.hpp"

namespace nfloc
{

/// Axis-aligned search box with the stage-1 grid counts per axis.
struct SearchRegion
{
    Position3 lo;
    Position3 hi;
    std::array<int, 3> grid{21, 21, 21};
};

/// Multi-resolution refinement: stage 1 sweeps the full region; every later
/// stage re-grids a box of +-(previous pitch) around the incumbent with
/// 2*refine_factor+1 points per axis, shrinking the pitch by exactly
/// refine_factor per stage.
struct GridSchedule
{
    int stages = 3;
    int refine_factor = 5;
};

/// Grid pitch per axis after the last refinement stage.
std::array<double, 3> final_grid_pitch(const SearchRegion &region, const GridSchedule &schedule);

struct EstimatorConfig
{
    SearchRegion region;
    GridSchedule schedule;
    double epsilon = 1e-5;  // cyclic-improvement stopping threshold on the objective
    double loading = 1e-9;  // relative diagonal loading of the residual covariance
    int max_updates = 0;    // cap on single-target updates; 0 means 50 * K_max
};

/// One accepted objective evaluation along the cyclic optimization.
struct TraceEntry
{
    int step = 0;      // running update counter
    int target = 0;    // which target was (re-)estimated
    bool cyclic = false; // false for the first estimate of a newly added target
    double objective = 0.0;
};

struct EstimationResult
{
    std::vector<Position3> positions;
    Eigen::VectorXcd coeffs;
    Eigen::MatrixXcd noise_cov;
    std::vector<TraceEntry> trace;
    bool converged = true;
    int cycles = 0;           // single-target updates performed
    double logdet_floor = 0.0; // last diagonal floor used inside the objective
};

/// Approximate ML estimate of the reflection coefficients for the model
/// Y = A diag(b) S + Z: solve the Hadamard system built from A^H J^{-1} A
/// and S S^H, where J is the sample residual covariance of Y after
/// projecting out the row space of S. J receives a diagonal loading of
/// loading*tr(J)/M plus an absolute floor of 1e-12*tr(Y Y^H)/(L*M) so the
/// estimate degrades gracefully to the noiseless limit (where J is exactly
/// singular).
Eigen::VectorXcd aml_coefficients(const Eigen::MatrixXcd &y, const Eigen::MatrixXcd &a,
                                  const Eigen::MatrixXcd &s, double loading = 1e-9);

/// Residual-based noise covariance estimate (1/L) W with
/// W = (Y - A diag(b) S)(Y - A diag(b) S)^H; always Hermitian PSD.
Eigen::MatrixXcd estimate_noise_cov(const Eigen::MatrixXcd &y, const Eigen::MatrixXcd &a,
                                    const Eigen::VectorXcd &b, const Eigen::MatrixXcd &s);

/// Concentrated negative log-likelihood of a candidate target set: builds
/// exact-amplitude steering for the candidates, estimates the coefficients
/// via aml_coefficients and returns L * logdet of the residual Gram matrix
/// (floored by 1e-12*tr(W)/M * I to stay finite when residuals vanish).
/// Holds the per-dataset workspace so repeated evaluations stay cheap.
class ConcentratedNll
{
public:
    ConcentratedNll(const Eigen::MatrixXcd &y, const Eigen::MatrixXcd &x, const ArrayGeometry &tx,
                    const ArrayGeometry &rx, double wavenumber, double loading = 1e-9);

    double operator()(const std::vector<Position3> &candidates) const;
    /// Same, also reporting the AML coefficients at the candidates.
    double evaluate(const std::vector<Position3> &candidates, Eigen::VectorXcd *coeffs_out) const;

    double last_floor() const { return last_floor_; }
    const Eigen::MatrixXcd &received() const { return y_; }
    int symbols() const { return static_cast<int>(y_.cols()); }

private:
    Eigen::MatrixXcd y_;
    Eigen::MatrixXcd x_;
    const ArrayGeometry &tx_;
    const ArrayGeometry &rx_;
    double wavenumber_;
    double loading_;
    Eigen::MatrixXcd yyh_over_l_; // cached (1/L) Y Y^H
    mutable double last_floor_ = 0.0;
};

/// One-shot convenience wrapper around ConcentratedNll.
double concentrated_nll(const Eigen::MatrixXcd &y, const Eigen::MatrixXcd &x,
                        const ArrayGeometry &tx, const ArrayGeometry &rx, double wavenumber,
                        const std::vector<Position3> &candidates, double loading = 1e-9);

/// Multi-resolution 3D grid minimization of `objective`. Stage 1 evaluates
/// the full grid (plus `incumbent` when given); later stages re-grid around
/// the running best, shifted to stay inside the region. Candidates whose
/// evaluation throws or returns a non-finite value are skipped; ties break
/// toward the lexicographically smallest (x, y, z). Throws SearchError when
/// every candidate failed.
Position3 grid_search_single(const std::function<double(const Position3 &)> &objective,
                             const SearchRegion &region, const GridSchedule &schedule,
                             const std::optional<Position3> &incumbent = std::nullopt);

/// Cyclic multi-target localization: estimate one target, then grow the
/// model one target at a time, re-estimating each target in turn (others
/// fixed) until the objective improvement of a single-target update drops
/// to <= epsilon. Returns positions, AML coefficients, the residual noise
/// covariance estimate and the accepted-objective trace.
EstimationResult aco_localize(const SignalBlock &y, const SignalBlock &x, const ArrayGeometry &tx,
                              const ArrayGeometry &rx, double wavenumber, int k_max,
                              const EstimatorConfig &config);

} // namespace nfloc

#endif
