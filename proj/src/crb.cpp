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

#include "nfloc/crb.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <tuple>
#include <utility>

#include "nfloc/errors.hpp"

namespace nfloc
{

namespace
{

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;

// All K x K Gram matrices the block formulas draw from. Index 0 is the
// steering matrix itself, 1..3 its x/y/z derivatives: rx[i][j] is
// A_i^H Q^{-1} A_j, tx[i][j] is V_i^H conj(R_X) V_j.
struct GramTables
{
    std::array<std::array<MatrixXcd, 4>, 4> rx;
    std::array<std::array<MatrixXcd, 4>, 4> tx;
};

void fill_rx_grams(GramTables &g, const SteeringSet &s, const NoiseCovariance &q)
{
    const std::array<const MatrixXcd *, 4> a = {&s.rx, &s.rx_deriv[0], &s.rx_deriv[1], &s.rx_deriv[2]};
    std::array<MatrixXcd, 4> qi;
    for (int j = 0; j < 4; ++j)
        qi[j] = q.solve(*a[j]);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            g.rx[i][j] = a[i]->adjoint() * qi[j];
}

void fill_tx_grams_from_cov(GramTables &g, const SteeringSet &s, const MatrixXcd &rx_cov)
{
    const std::array<const MatrixXcd *, 4> v = {&s.tx, &s.tx_deriv[0], &s.tx_deriv[1], &s.tx_deriv[2]};
    const MatrixXcd conj_cov = rx_cov.conjugate();
    std::array<MatrixXcd, 4> rv;
    for (int j = 0; j < 4; ++j)
        rv[j] = conj_cov * (*v[j]);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            g.tx[i][j] = v[i]->adjoint() * rv[j];
}

void fill_tx_grams_from_waveform(GramTables &g, const SteeringSet &s, const MatrixXcd &x)
{
    // V_a^H conj(R_X) V_b == (1/L) conj(V_a^T X) (V_b^T X)^T, so only the
    // K x L signature matrices are ever formed.
    const std::array<const MatrixXcd *, 4> v = {&s.tx, &s.tx_deriv[0], &s.tx_deriv[1], &s.tx_deriv[2]};
    const double l = static_cast<double>(x.cols());
    std::array<MatrixXcd, 4> sig;
    for (int j = 0; j < 4; ++j)
        sig[j] = v[j]->transpose() * x;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            g.tx[i][j] = sig[i].conjugate() * sig[j].transpose() / l;
}

FisherBlocks blocks_from_grams(const GramTables &g, const VectorXcd &b, double l)
{
    const auto bd = b.asDiagonal();
    const auto bc = b.conjugate().asDiagonal();

    // F_uv: four Hadamard terms over the (steering, derivative) pairings.
    auto position_block = [&](int u, int v) {
        MatrixXcd sum = g.rx[u][v].cwiseProduct(MatrixXcd(bc * g.tx[0][0] * bd)) +
                        g.rx[u][0].cwiseProduct(MatrixXcd(bc * g.tx[0][v] * bd)) +
                        g.rx[0][v].cwiseProduct(MatrixXcd(bc * g.tx[u][0] * bd)) +
                        g.rx[0][0].cwiseProduct(MatrixXcd(bc * g.tx[u][v] * bd));
        return MatrixXcd(l * sum);
    };
    // F_ub: the coefficient side carries no trailing diag(b).
    auto coupling_block = [&](int u) {
        MatrixXcd sum = g.rx[u][0].cwiseProduct(MatrixXcd(bc * g.tx[0][0])) +
                        g.rx[0][0].cwiseProduct(MatrixXcd(bc * g.tx[u][0]));
        return MatrixXcd(l * sum);
    };

    FisherBlocks f;
    f.xx = position_block(1, 1);
    f.yy = position_block(2, 2);
    f.zz = position_block(3, 3);
    f.xy = position_block(1, 2);
    f.xz = position_block(1, 3);
    f.yz = position_block(2, 3);
    f.xb = coupling_block(1);
    f.yb = coupling_block(2);
    f.zb = coupling_block(3);
    f.bb = l * g.rx[0][0].cwiseProduct(g.tx[0][0]);
    return f;
}

void check_fisher_inputs(const SteeringSet &steering, const VectorXcd &b, const NoiseCovariance &q,
                         int l)
{
    if (b.size() != steering.num_targets())
        throw DimensionError("fisher_blocks: coefficient count does not match steering columns");
    if (q.dim() != steering.rx.rows())
        throw DimensionError("fisher_blocks: noise covariance does not match receive dimension");
    if (l < 1)
        throw ConfigError("fisher_blocks: snapshot count must be >= 1");
}

} // namespace

FisherBlocks fisher_blocks(const SteeringSet &steering, const Eigen::VectorXcd &b,
                           const Eigen::MatrixXcd &rx_cov, const NoiseCovariance &q, int l)
{
    check_fisher_inputs(steering, b, q, l);
    if (rx_cov.rows() != steering.tx.rows() || rx_cov.cols() != steering.tx.rows())
        throw DimensionError("fisher_blocks: waveform covariance does not match transmit dimension");

    GramTables g;
    fill_rx_grams(g, steering, q);
    fill_tx_grams_from_cov(g, steering, rx_cov);
    return blocks_from_grams(g, b, static_cast<double>(l));
}

FisherBlocks fisher_blocks(const SteeringSet &steering, const Eigen::VectorXcd &b,
                           const SignalBlock &x, const NoiseCovariance &q)
{
    check_fisher_inputs(steering, b, q, x.symbols());
    if (x.ports() != steering.tx.rows())
        throw DimensionError("fisher_blocks: waveform ports do not match transmit dimension");

    GramTables g;
    fill_rx_grams(g, steering, q);
    fill_tx_grams_from_waveform(g, steering, x.data);
    return blocks_from_grams(g, b, static_cast<double>(x.symbols()));
}

Eigen::MatrixXd assemble_fisher(const FisherBlocks &blocks)
{
    const Eigen::Index k = blocks.xx.rows();
    MatrixXd f(5 * k, 5 * k);

    auto re = [](const MatrixXcd &m) { return m.real(); };
    auto im = [](const MatrixXcd &m) { return m.imag(); };

    // Row blocks follow the parameter order [x, y, z, Re(b), Im(b)]; the
    // lower triangle carries the transposed blocks.
    f.block(0 * k, 0 * k, k, k) = re(blocks.xx);
    f.block(0 * k, 1 * k, k, k) = re(blocks.xy);
    f.block(0 * k, 2 * k, k, k) = re(blocks.xz);
    f.block(0 * k, 3 * k, k, k) = re(blocks.xb);
    f.block(0 * k, 4 * k, k, k) = -im(blocks.xb);

    f.block(1 * k, 0 * k, k, k) = re(blocks.xy).transpose();
    f.block(1 * k, 1 * k, k, k) = re(blocks.yy);
    f.block(1 * k, 2 * k, k, k) = re(blocks.yz);
    f.block(1 * k, 3 * k, k, k) = re(blocks.yb);
    f.block(1 * k, 4 * k, k, k) = -im(blocks.yb);

    f.block(2 * k, 0 * k, k, k) = re(blocks.xz).transpose();
    f.block(2 * k, 1 * k, k, k) = re(blocks.yz).transpose();
    f.block(2 * k, 2 * k, k, k) = re(blocks.zz);
    f.block(2 * k, 3 * k, k, k) = re(blocks.zb);
    f.block(2 * k, 4 * k, k, k) = -im(blocks.zb);

    f.block(3 * k, 0 * k, k, k) = re(blocks.xb).transpose();
    f.block(3 * k, 1 * k, k, k) = re(blocks.yb).transpose();
    f.block(3 * k, 2 * k, k, k) = re(blocks.zb).transpose();
    f.block(3 * k, 3 * k, k, k) = re(blocks.bb);
    f.block(3 * k, 4 * k, k, k) = -im(blocks.bb);

    f.block(4 * k, 0 * k, k, k) = -im(blocks.xb).transpose();
    f.block(4 * k, 1 * k, k, k) = -im(blocks.yb).transpose();
    f.block(4 * k, 2 * k, k, k) = -im(blocks.zb).transpose();
    f.block(4 * k, 3 * k, k, k) = -im(blocks.bb).transpose();
    f.block(4 * k, 4 * k, k, k) = re(blocks.bb);

    return 2.0 * f;
}

namespace
{

// Shared by crb_matrix and compute_crb: inverse plus the condition bound.
std::pair<Eigen::MatrixXd, double> invert_fisher(const Eigen::MatrixXd &fisher, double condition_cap)
{
    auto fail = [&](const std::string &detail) {
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(fisher, Eigen::EigenvaluesOnly);
        const double smallest = es.eigenvalues().minCoeff();
        throw IdentifiabilityError("crb_matrix: Fisher matrix is not invertible (" + detail +
                                   "; smallest eigenvalue " + std::to_string(smallest) + ")");
    };

    Eigen::LLT<MatrixXd> llt(fisher);
    if (llt.info() != Eigen::Success)
        fail("Cholesky factorization failed");
    const Eigen::VectorXd diag = MatrixXd(llt.matrixL()).diagonal();
    const double r = diag.maxCoeff() / diag.minCoeff();
    const double condition = r * r;
    if (!(condition < condition_cap))
        fail("condition estimate " + std::to_string(condition) + " exceeds cap " +
             std::to_string(condition_cap));

    MatrixXd inv = llt.solve(MatrixXd::Identity(fisher.rows(), fisher.cols()));
    return {0.5 * (inv + inv.transpose().eval()), condition};
}

} // namespace

Eigen::MatrixXd crb_matrix(const Eigen::MatrixXd &fisher, double condition_cap)
{
    return invert_fisher(fisher, condition_cap).first;
}

double position_crb(const Eigen::MatrixXd &crb, int k)
{
    if (crb.rows() % 5 != 0)
        throw DimensionError("position_crb: CRB matrix is not 5K x 5K");
    const int kk = static_cast<int>(crb.rows()) / 5;
    if (k < 0 || k >= kk)
        throw ConfigError("position_crb: target index " + std::to_string(k) + " out of range [0, " +
                          std::to_string(kk - 1) + "]");
    return crb(k, k) + crb(k + kk, k + kk) + crb(k + 2 * kk, k + 2 * kk);
}

std::vector<double> position_crbs(const Eigen::MatrixXd &crb)
{
    const int kk = static_cast<int>(crb.rows()) / 5;
    std::vector<double> out(kk);
    for (int k = 0; k < kk; ++k)
        out[k] = position_crb(crb, k);
    return out;
}

Eigen::VectorXcd reference_coefficients(const Scene &scene)
{
    const double lambda = wavelength(scene.carrier_hz());
    const double scale = std::pow(lambda / (4.0 * std::numbers::pi), 2);
    VectorXcd b = scene.coeff_vector();
    for (int k = 0; k < scene.num_targets(); ++k)
    {
        const Position3 &p = scene.targets()[k].position;
        const double dr = distance(scene.rx().reference(), p);
        const double dt = distance(scene.tx().reference(), p);
        if (dr < kMinTargetElementDistance || dt < kMinTargetElementDistance)
            throw SingularityError("reference_coefficients: target " + std::to_string(k) +
                                   " coincides with an array reference point");
        b(k) *= scale / (dr * dt);
    }
    return b;
}

FisherBundle compute_crb(const Scene &scene, const Eigen::MatrixXcd &rx_cov, int l,
                         AmplitudeModel model, double condition_cap)
{
    SteeringSet set = build_steering_set(scene.tx(), scene.rx(), scene.target_positions(),
                                         scene.wavenumber(), model);
    VectorXcd b = model == AmplitudeModel::Exact ? scene.coeff_vector() : reference_coefficients(scene);

    FisherBundle bundle;
    bundle.blocks = fisher_blocks(set, b, rx_cov, scene.noise(), l);
    bundle.fisher = assemble_fisher(bundle.blocks);
    std::tie(bundle.crb, bundle.condition) = invert_fisher(bundle.fisher, condition_cap);
    return bundle;
}

FisherBundle compute_crb(const Scene &scene, const SignalBlock &x, AmplitudeModel model,
                         double condition_cap)
{
    SteeringSet set = build_steering_set(scene.tx(), scene.rx(), scene.target_positions(),
                                         scene.wavenumber(), model);
    VectorXcd b = model == AmplitudeModel::Exact ? scene.coeff_vector() : reference_coefficients(scene);

    FisherBundle bundle;
    bundle.blocks = fisher_blocks(set, b, x, scene.noise());
    bundle.fisher = assemble_fisher(bundle.blocks);
    std::tie(bundle.crb, bundle.condition) = invert_fisher(bundle.fisher, condition_cap);
    return bundle;
}

std::vector<double> constant_amplitude_crb(const Scene &scene, const Eigen::MatrixXcd &rx_cov, int l,
                                           double condition_cap)
{
    return position_crbs(compute_crb(scene, rx_cov, l, AmplitudeModel::Constant, condition_cap).crb);
}

Eigen::MatrixXd numeric_fisher_oracle(const Scene &scene, const SignalBlock &x,
                                      const NoiseCovariance &q, double step)
{
    if (!(step > 0.0))
        throw ConfigError("numeric_fisher_oracle: step must be positive");
    if (x.ports() != scene.num_tx())
        throw DimensionError("numeric_fisher_oracle: waveform ports do not match transmit elements");

    const int k = scene.num_targets();
    const int dim = 5 * k;
    const double wn = scene.wavenumber();

    // Snapshot mean as a function of the packed parameter vector
    // [x_1..x_K, y, z, Re(b), Im(b)].
    std::vector<Position3> base_pos = scene.target_positions();
    VectorXcd base_b = scene.coeff_vector();

    auto mean_matrix = [&](const std::vector<Position3> &pos, const VectorXcd &b) {
        SteeringSet s = build_steering_set(scene.tx(), scene.rx(), pos, wn, AmplitudeModel::Exact);
        return MatrixXcd(s.rx * b.asDiagonal() * s.tx.transpose() * x.data);
    };

    std::vector<MatrixXcd> derivs(dim);
    for (int i = 0; i < dim; ++i)
    {
        const int target = i % k;
        const int kind = i / k; // 0..2 coordinate, 3 Re(b), 4 Im(b)
        std::vector<Position3> pos_p = base_pos, pos_m = base_pos;
        VectorXcd b_p = base_b, b_m = base_b;
        double h;
        if (kind < 3)
        {
            const double char_dist = 0.5 * (distance(base_pos[target], scene.rx().reference()) +
                                            distance(base_pos[target], scene.tx().reference()));
            h = step * char_dist;
            pos_p[target][kind] += h;
            pos_m[target][kind] -= h;
        }
        else
        {
            h = step * (1.0 + std::abs(base_b(target)));
            const std::complex<double> dh = kind == 3 ? std::complex<double>(h, 0.0)
                                                      : std::complex<double>(0.0, h);
            b_p(target) += dh;
            b_m(target) -= dh;
        }
        derivs[i] = (mean_matrix(pos_p, b_p) - mean_matrix(pos_m, b_m)) / (2.0 * h);
    }

    MatrixXd fisher(dim, dim);
    for (int j = 0; j < dim; ++j)
    {
        const MatrixXcd qi_dj = q.solve(derivs[j]);
        for (int i = 0; i <= j; ++i)
        {
            const double fij = 2.0 * derivs[i].conjugate().cwiseProduct(qi_dj).sum().real();
            fisher(i, j) = fij;
            fisher(j, i) = fij;
        }
    }
    return fisher;
}

} // namespace nfloc
