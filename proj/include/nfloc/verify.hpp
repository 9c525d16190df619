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

#ifndef NFLOC_VERIFY_HPP
#define NFLOC_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "nfloc/scene.hpp"
#include "nfloc/waveform.hpp"

namespace nfloc::verify
{

struct CheckResult
{
    std::string name;
    bool passed = false;
    double worst = 0.0;     // worst observed error/deviation
    double tolerance = 0.0; // the limit it was held against
    std::string detail;
};

struct VerifyOptions
{
    int fisher_scenes = 20;     // randomized closed-form vs finite-difference comparisons
    int derivative_pairs = 100; // randomized element/target derivative checks
    std::uint64_t seed = 20240901;
};

/// Random small scene generator shared by the self-checks and the test
/// suites: M,N in [3,6], K in [1,3], dense random PD noise covariance,
/// random element/target geometry.
Scene random_scene(std::uint64_t seed, int max_targets = 3);

/// Random transmit block (Gaussian entries) for a scene.
SignalBlock random_waveform(const Scene &scene, int symbols, std::uint64_t seed);

/// Closed-form Fisher vs finite-difference oracle over randomized scenes;
/// relative Frobenius error must stay below 1e-5.
CheckResult check_fisher_oracle(const VerifyOptions &options);

/// Analytic steering derivatives vs central finite differences over
/// randomized element/target pairs; relative error below 1e-5.
CheckResult check_steering_derivatives(const VerifyOptions &options);

/// Noise-power and snapshot-count scaling of the position CRB
/// (sigma2-linear and 1/L) to 1e-9 relative.
CheckResult check_scaling_laws(const VerifyOptions &options);

/// Zero cross-information between the model parameters and the noise
/// covariance entries (the block-diagonal split relied on by the CRB).
CheckResult check_noise_block_diagonality(const VerifyOptions &options);

/// All of the above, in order.
std::vector<CheckResult> run_all(const VerifyOptions &options = {});

} // namespace nfloc::verify

#endif
