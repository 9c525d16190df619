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

#ifndef NFLOC_MONTECARLO_HPP
#define NFLOC_MONTECARLO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "nfloc/estimator.hpp"
#include "nfloc/scene.hpp"
#include "nfloc/waveform.hpp"

namespace nfloc
{

/// Assignment of estimates to ground-truth targets minimizing the total
/// squared distance; perm[k] is the estimate index matched to truth k.
/// Exhaustive over the K! permutations, refused for K > 8.
std::vector<int> match_targets(const std::vector<Position3> &estimates,
                               const std::vector<Position3> &truth);

struct SweepConfig
{
    std::vector<double> snr_db;
    int trials = 100;
    std::uint64_t master_seed = 1;
    bool noiseless = false; // suppress noise; one quantization-floor row per target
    int threads = 0;        // 0: hardware concurrency
};

/// One localization trial inside a sweep.
struct TrialRecord
{
    int snr_index = 0;
    int trial = 0;
    bool ok = false; // converged and error-free
    bool converged = false;
    std::string error;
    std::vector<double> sq_error_m2; // per matched target
    double empirical_snr_db = 0.0;   // NaN in noiseless mode
};

/// Aggregated per-(SNR, target) row.
struct SweepRow
{
    double snr_db = 0.0;
    int target = 0;
    double mse_m2 = 0.0;
    double crb_m2 = 0.0;
    int trials_ok = 0;
    int trials_failed = 0;
    double mean_empirical_snr_db = 0.0;
};

struct SweepResult
{
    std::vector<SweepRow> rows;
    std::vector<TrialRecord> trials;
};

/// Repeated estimation across the SNR list: per SNR the scene noise is
/// rescaled to hit the requested SNR in expectation, trials draw independent
/// noise (seeds derived from master_seed so any subset reruns identically),
/// estimates are matched to ground truth and squared position errors are
/// aggregated next to the CRB at that noise level. Trials run in parallel;
/// aggregation is a deterministic reduction over trial indices.
SweepResult run_sweep(const Scene &scene, const SignalBlock &x, const EstimatorConfig &estimator,
                      const SweepConfig &config);

/// CSV with header snr_db,target_index,mse_m2,crb_m2,trials_ok,trials_failed.
std::string sweep_csv(const SweepResult &result);

/// Full per-trial records as a JSON array string.
std::string sweep_trials_json(const SweepResult &result);

} // namespace nfloc

#endif
