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

#ifndef NFLOC_WAVEFORM_HPP
#define NFLOC_WAVEFORM_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>

namespace nfloc
{

enum class SignalRole
{
    Transmit,
    Receive
};

/// A block of complex snapshots: rows are antenna ports, columns the L symbols.
struct SignalBlock
{
    Eigen::MatrixXcd data;
    SignalRole role = SignalRole::Transmit;

    int ports() const { return static_cast<int>(data.rows()); }
    int symbols() const { return static_cast<int>(data.cols()); }
};

enum class WaveformMode
{
    /// Rows drawn from an orthonormal family and scaled so the sample
    /// covariance is exactly power * I. Requires L >= N.
    Unitary,
    /// I.i.d. circular complex Gaussian entries with variance `power`.
    Gaussian
};

/// Deterministic given `seed`.
SignalBlock generate_isotropic(int n, int l, double power, WaveformMode mode, std::uint64_t seed);

/// (1/L) X X^H. Transmit blocks only.
Eigen::MatrixXcd sample_covariance(const SignalBlock &x);

// CSV exchange format for complex snapshot matrices: one header line
// "# rows,cols", then one CSV line per row with interleaved
// real,imag,real,imag,... values, row-major, printed with 17 significant
// digits so doubles round-trip exactly.
SignalBlock load_signal_csv(const std::string &path, SignalRole role);
void save_signal_csv(const std::string &path, const SignalBlock &block);
std::string signal_csv_string(const SignalBlock &block);

} // namespace nfloc

#endif
