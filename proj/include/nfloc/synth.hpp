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

#ifndef NFLOC_SYNTH_HPP
#define NFLOC_SYNTH_HPP

#include <cstdint>

#include "nfloc/scene.hpp"
#include "nfloc/waveform.hpp"

namespace nfloc
{

/// M x L block whose columns are i.i.d. circular complex Gaussian with
/// covariance Q (standard normals colored by the Cholesky factor of Q).
SignalBlock draw_noise(const NoiseCovariance &q, int l, std::uint64_t seed);

/// Noise-free received block A diag(b) V^T X under the exact-amplitude model.
Eigen::MatrixXcd noise_free_received(const Scene &scene, const SignalBlock &x);

/// Received snapshots A diag(b) V^T X + Z; `noise_free` suppresses Z.
SignalBlock simulate_received(const Scene &scene, const SignalBlock &x, std::uint64_t seed,
                              bool noise_free = false);

struct SnrEstimate
{
    double linear = 0.0;
    double db = 0.0;
};

/// Ratio of summed squared signal norms to summed squared noise norms over
/// the block: sum_l ||A B V^T x_l||^2 / sum_l ||z_l||^2.
SnrEstimate empirical_snr(const Scene &scene, const SignalBlock &x, const SignalBlock &z);

/// Scale alpha such that replacing Q by alpha*Q gives the requested SNR in
/// expectation: alpha = signal_energy / (snr * L * tr(Q)).
double noise_scale_for_snr(const Scene &scene, const SignalBlock &x, double snr_db);

/// Mixes a master seed with per-trial indices into an independent stream
/// seed; any subset of trials reruns identically.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index);

} // namespace nfloc

#endif
