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

#include "nfloc/waveform.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "nfloc/errors.hpp"

namespace nfloc
{

namespace
{

Eigen::MatrixXcd random_gaussian_matrix(int rows, int cols, double variance, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
    Eigen::MatrixXcd m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c)
            m(r, c) = std::complex<double>(normal(rng), normal(rng));
    return m;
}

void append_double(std::string &out, double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out += buf;
}

} // namespace

SignalBlock generate_isotropic(int n, int l, double power, WaveformMode mode, std::uint64_t seed)
{
    if (n < 1 || l < 1)
        throw ConfigError("generate_isotropic: port and symbol counts must be >= 1");
    if (!(power > 0.0) || !std::isfinite(power))
        throw ConfigError("generate_isotropic: power must be positive");

    SignalBlock block;
    block.role = SignalRole::Transmit;
    if (mode == WaveformMode::Gaussian)
    {
        block.data = random_gaussian_matrix(n, l, power, seed);
        return block;
    }

    if (l < n)
        throw ConfigError("generate_isotropic: unitary mode requires L >= N (got L=" +
                          std::to_string(l) + ", N=" + std::to_string(n) + ")");
    // Thin QR of a random L x N complex matrix gives L x N with orthonormal
    // columns; X = sqrt(power*L) * Q^H then satisfies (1/L) X X^H = power * I.
    Eigen::MatrixXcd g = random_gaussian_matrix(l, n, 1.0, seed);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(l, n);
    block.data = std::sqrt(power * l) * q.adjoint();
    return block;
}

Eigen::MatrixXcd sample_covariance(const SignalBlock &x)
{
    if (x.role != SignalRole::Transmit)
        throw ConfigError("sample_covariance: defined for transmit blocks");
    if (x.symbols() < 1)
        throw DimensionError("sample_covariance: empty block");
    Eigen::MatrixXcd r = (x.data * x.data.adjoint()) / static_cast<double>(x.symbols());
    // Clean up roundoff asymmetry; the result is Hermitian by construction.
    return 0.5 * (r + r.adjoint().eval());
}

std::string signal_csv_string(const SignalBlock &block)
{
    std::string out;
    out += "# " + std::to_string(block.ports()) + "," + std::to_string(block.symbols()) + "\n";
    for (int r = 0; r < block.ports(); ++r)
    {
        for (int c = 0; c < block.symbols(); ++c)
        {
            if (c > 0)
                out += ",";
            append_double(out, block.data(r, c).real());
            out += ",";
            append_double(out, block.data(r, c).imag());
        }
        out += "\n";
    }
    return out;
}

void save_signal_csv(const std::string &path, const SignalBlock &block)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw ConfigError("save_signal_csv: cannot open '" + path + "' for writing");
    f << signal_csv_string(block);
    if (!f)
        throw ConfigError("save_signal_csv: write to '" + path + "' failed");
}

SignalBlock load_signal_csv(const std::string &path, SignalRole role)
{
    std::ifstream f(path);
    if (!f)
        throw ConfigError("load_signal_csv: cannot open '" + path + "'");
    std::string header;
    if (!std::getline(f, header) || header.size() < 2 || header[0] != '#')
        throw ConfigError("load_signal_csv: '" + path + "' is missing the '# rows,cols' header");

    int rows = 0, cols = 0;
    {
        std::istringstream hs(header.substr(1));
        char comma = 0;
        if (!(hs >> rows >> comma >> cols) || comma != ',' || rows < 1 || cols < 1)
            throw ConfigError("load_signal_csv: malformed header '" + header + "'");
    }

    SignalBlock block;
    block.role = role;
    block.data.resize(rows, cols);
    std::string line;
    for (int r = 0; r < rows; ++r)
    {
        if (!std::getline(f, line))
            throw ConfigError("load_signal_csv: '" + path + "' ended before row " + std::to_string(r));
        std::istringstream ls(line);
        std::string cell;
        for (int c = 0; c < cols; ++c)
        {
            double re = 0.0, im = 0.0;
            if (!std::getline(ls, cell, ','))
                throw ConfigError("load_signal_csv: row " + std::to_string(r) + " is too short");
            re = std::stod(cell);
            if (!std::getline(ls, cell, ','))
                throw ConfigError("load_signal_csv: row " + std::to_string(r) + " is too short");
            im = std::stod(cell);
            block.data(r, c) = std::complex<double>(re, im);
        }
    }
    return block;
}

} // namespace nfloc
