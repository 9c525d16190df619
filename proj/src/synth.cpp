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

#include "nfloc/synth.hpp"

#include <cmath>
#include <random>

#include "nfloc/channel.hpp"
#include "nfloc/errors.hpp"

namespace nfloc
{

SignalBlock draw_noise(const NoiseCovariance &q, int l, std::uint64_t seed)
{
    if (l < 1)
        throw ConfigError("draw_noise: snapshot count must be >= 1");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    Eigen::MatrixXcd w(q.dim(), l);
    for (int r = 0; r < q.dim(); ++r)
        for (int c = 0; c < l; ++c)
            w(r, c) = std::complex<double>(normal(rng), normal(rng));
    SignalBlock z;
    z.role = SignalRole::Receive;
    z.data = q.color(w);
    return z;
}

Eigen::MatrixXcd noise_free_received(const Scene &scene, const SignalBlock &x)
{
    if (x.ports() != scene.num_tx())
        throw DimensionError("noise_free_received: waveform ports (" + std::to_string(x.ports()) +
                             ") do not match transmit elements (" + std::to_string(scene.num_tx()) + ")");
    SteeringSet set = build_steering_set(scene.tx(), scene.rx(), scene.target_positions(),
                                         scene.wavenumber(), AmplitudeModel::Exact);
    Eigen::VectorXcd b = scene.coeff_vector();
    return set.rx * b.asDiagonal() * set.tx.transpose() * x.data;
}

SignalBlock simulate_received(const Scene &scene, const SignalBlock &x, std::uint64_t seed,
                              bool noise_free)
{
    SignalBlock y;
    y.role = SignalRole::Receive;
    y.data = noise_free_received(scene, x);
    if (!noise_free)
        y.data += draw_noise(scene.noise(), x.symbols(), seed).data;
    return y;
}

SnrEstimate empirical_snr(const Scene &scene, const SignalBlock &x, const SignalBlock &z)
{
    if (z.symbols() != x.symbols())
        throw DimensionError("empirical_snr: signal and noise blocks must share the symbol count");
    const double signal_energy = noise_free_received(scene, x).squaredNorm();
    const double noise_energy = z.data.squaredNorm();
    if (noise_energy == 0.0)
        throw ConfigError("empirical_snr: noise block has zero energy");
    SnrEstimate snr;
    snr.linear = signal_energy / noise_energy;
    snr.db = 10.0 * std::log10(snr.linear);
    return snr;
}

double noise_scale_for_snr(const Scene &scene, const SignalBlock &x, double snr_db)
{
    const double snr = std::pow(10.0, snr_db / 10.0);
    const double signal_energy = noise_free_received(scene, x).squaredNorm();
    if (signal_energy == 0.0)
        throw ConfigError("noise_scale_for_snr: scene has zero signal energy");
    // E[||z_l||^2] = tr(alpha * Q), summed over L snapshots.
    return signal_energy / (snr * x.symbols() * scene.noise().trace());
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index)
{
    auto splitmix = [](std::uint64_t v) {
        v += 0x9E3779B97F4A7C15ULL;
        v = (v ^ (v >> 30)) * 0xBF58476D1CE4E5B9ULL;
        v = (v ^ (v >> 27)) * 0x94D049BB133111EBULL;
        return v ^ (v >> 31);
    };
    return splitmix(splitmix(master ^ splitmix(stream + 1)) ^ splitmix(index + 1));
}

} // namespace nfloc
