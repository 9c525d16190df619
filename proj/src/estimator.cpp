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

#include "nfloc/estimator.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "nfloc/errors.hpp"
#include "nfloc/numerics.hpp"

namespace nfloc
{

namespace
{

using Eigen::MatrixXcd;
using Eigen::VectorXcd;

constexpr double kAbsoluteFloorScale = 1e-12;

// Residual covariance of Y after projecting out the row space of S, with
// the configured diagonal loading. yyh_over_l is the cached (1/L) Y Y^H.
MatrixXcd loaded_residual_cov(const MatrixXcd &y, const MatrixXcd &s, const MatrixXcd &yyh_over_l,
                              double loading)
{
    const int m = static_cast<int>(y.rows());
    const double l = static_cast<double>(y.cols());

    MatrixXcd gram = s * s.adjoint(); // K x K
    Eigen::LLT<MatrixXcd> llt(gram);
    if (llt.info() != Eigen::Success)
        throw IdentifiabilityError(
            "aml_coefficients: S S^H is rank deficient (more targets than snapshots, or "
            "coincident candidates)");

    MatrixXcd ysh = y * s.adjoint(); // M x K
    MatrixXcd j = yyh_over_l - (ysh * llt.solve(ysh.adjoint())) / l;
    j = 0.5 * (j + j.adjoint().eval());

    const double floor = loading * std::max(j.trace().real(), 0.0) / m +
                         kAbsoluteFloorScale * yyh_over_l.trace().real() / m;
    j.diagonal().array() += floor;
    return j;
}

VectorXcd aml_core(const MatrixXcd &y, const MatrixXcd &a, const MatrixXcd &s,
                   const MatrixXcd &yyh_over_l, double loading)
{
    const Eigen::Index k = a.cols();
    if (a.rows() != y.rows())
        throw DimensionError("aml_coefficients: steering rows do not match received rows");
    if (s.rows() != k || s.cols() != y.cols())
        throw DimensionError("aml_coefficients: signature matrix must be K x L");
    if (!(loading >= 0.0))
        throw ConfigError("aml_coefficients: loading must be >= 0");

    if (yyh_over_l.trace().real() == 0.0)
        return VectorXcd::Zero(k); // zero data: the extracted diagonal is zero

    MatrixXcd j = loaded_residual_cov(y, s, yyh_over_l, loading);
    Eigen::LLT<MatrixXcd> jllt(j);
    if (jllt.info() != Eigen::Success)
        throw IdentifiabilityError("aml_coefficients: loaded residual covariance is not positive definite");

    MatrixXcd ji_a = jllt.solve(a);                               // J^{-1} A
    MatrixXcd lhs = (a.adjoint() * ji_a).cwiseProduct((s * s.adjoint()).transpose());
    VectorXcd rhs = (ji_a.adjoint() * y * s.adjoint()).diagonal();

    Eigen::LLT<MatrixXcd> hllt(lhs);
    if (hllt.info() != Eigen::Success)
        throw IdentifiabilityError("aml_coefficients: Hadamard system is singular (coincident targets?)");
    return hllt.solve(rhs);
}

} // namespace

std::array<double, 3> final_grid_pitch(const SearchRegion &region, const GridSchedule &schedule)
{
    std::array<double, 3> pitch{};
    const double shrink = std::pow(static_cast<double>(schedule.refine_factor),
                                   static_cast<double>(schedule.stages - 1));
    for (int ax = 0; ax < 3; ++ax)
        pitch[ax] = (region.hi[ax] - region.lo[ax]) / (region.grid[ax] - 1) / shrink;
    return pitch;
}

Eigen::VectorXcd aml_coefficients(const Eigen::MatrixXcd &y, const Eigen::MatrixXcd &a,
                                  const Eigen::MatrixXcd &s, double loading)
{
    const MatrixXcd yyh_over_l = (y * y.adjoint()) / static_cast<double>(y.cols());
    return aml_core(y, a, s, yyh_over_l, loading);
}

Eigen::MatrixXcd estimate_noise_cov(const Eigen::MatrixXcd &y, const Eigen::MatrixXcd &a,
                                    const Eigen::VectorXcd &b, const Eigen::MatrixXcd &s)
{
    if (a.cols() != b.size() || s.rows() != b.size() || a.rows() != y.rows() || s.cols() != y.cols())
        throw DimensionError("estimate_noise_cov: inconsistent dimensions");
    MatrixXcd residual = y - a * b.asDiagonal() * s;
    MatrixXcd q = (residual * residual.adjoint()) / static_cast<double>(y.cols());
    return 0.5 * (q + q.adjoint().eval());
}

ConcentratedNll::ConcentratedNll(const Eigen::MatrixXcd &y, const Eigen::MatrixXcd &x,
                                 const ArrayGeometry &tx, const ArrayGeometry &rx, double wavenumber,
                                 double loading)
    : y_(y), x_(x), tx_(tx), rx_(rx), wavenumber_(wavenumber), loading_(loading)
{
    if (y_.rows() != rx_.size())
        throw DimensionError("ConcentratedNll: received rows do not match receive elements");
    if (x_.rows() != tx_.size())
        throw DimensionError("ConcentratedNll: waveform rows do not match transmit elements");
    if (y_.cols() != x_.cols())
        throw DimensionError("ConcentratedNll: received and transmitted blocks differ in symbol count");
    yyh_over_l_ = (y_ * y_.adjoint()) / static_cast<double>(y_.cols());
}

double ConcentratedNll::evaluate(const std::vector<Position3> &candidates,
                                 Eigen::VectorXcd *coeffs_out) const
{
    const int m = static_cast<int>(y_.rows());
    const double l = static_cast<double>(y_.cols());

    const int k = static_cast<int>(candidates.size());
    MatrixXcd a(m, k), v(tx_.size(), k);
    for (int i = 0; i < k; ++i)
    {
        a.col(i) = steering(rx_, candidates[i], wavenumber_, AmplitudeModel::Exact);
        v.col(i) = steering(tx_, candidates[i], wavenumber_, AmplitudeModel::Exact);
    }
    MatrixXcd s = v.transpose() * x_;

    VectorXcd b = aml_core(y_, a, s, yyh_over_l_, loading_);
    if (coeffs_out)
        *coeffs_out = b;

    MatrixXcd residual = y_ - a * b.asDiagonal() * s;
    MatrixXcd w = residual * residual.adjoint();
    w = 0.5 * (w + w.adjoint().eval());

    double floor = kAbsoluteFloorScale * w.trace().real() / m;
    if (!(floor > 0.0))
        floor = std::numeric_limits<double>::min();
    w.diagonal().array() += floor;
    last_floor_ = floor;

    return l * numerics::logdet_hermitian(w);
}

double ConcentratedNll::operator()(const std::vector<Position3> &candidates) const
{
    return evaluate(candidates, nullptr);
}

double concentrated_nll(const Eigen::MatrixXcd &y, const Eigen::MatrixXcd &x,
                        const ArrayGeometry &tx, const ArrayGeometry &rx, double wavenumber,
                        const std::vector<Position3> &candidates, double loading)
{
    return ConcentratedNll(y, x, tx, rx, wavenumber, loading)(candidates);
}

namespace
{

struct BestPoint
{
    Position3 pos;
    double value = std::numeric_limits<double>::infinity();
    bool found = false;
};

void consider(BestPoint &best, const Position3 &p, double value)
{
    if (!std::isfinite(value))
        return;
    if (!best.found || value < best.value || (value == best.value && lex_less(p, best.pos)))
    {
        best.pos = p;
        best.value = value;
        best.found = true;
    }
}

void validate_search(const SearchRegion &region, const GridSchedule &schedule)
{
    for (int ax = 0; ax < 3; ++ax)
    {
        if (!(region.hi[ax] > region.lo[ax]))
            throw ConfigError("grid_search: region max must exceed min on every axis");
        if (region.grid[ax] < 2)
            throw ConfigError("grid_search: grid counts must be >= 2");
    }
    if (schedule.stages < 1)
        throw ConfigError("grid_search: stages must be >= 1");
    if (schedule.refine_factor < 1)
        throw ConfigError("grid_search: refine factor must be >= 1");
}

// Evaluate a full grid over [lo, hi] with the given per-axis counts.
void sweep_grid(const std::function<double(const Position3 &)> &objective, const Position3 &lo,
                const Position3 &hi, const std::array<int, 3> &counts, BestPoint &best)
{
    auto coord = [&](int ax, int i) {
        return lo[ax] + (hi[ax] - lo[ax]) * static_cast<double>(i) / (counts[ax] - 1);
    };
    for (int ix = 0; ix < counts[0]; ++ix)
    {
        for (int iy = 0; iy < counts[1]; ++iy)
        {
            for (int iz = 0; iz < counts[2]; ++iz)
            {
                Position3 p{coord(0, ix), coord(1, iy), coord(2, iz)};
                try
                {
                    consider(best, p, objective(p));
                }
                catch (const std::exception &)
                {
                    // failed candidates are skipped
                }
            }
        }
    }
}

BestPoint grid_search_best(const std::function<double(const Position3 &)> &objective,
                           const SearchRegion &region, const GridSchedule &schedule,
                           const std::optional<Position3> &incumbent)
{
    validate_search(region, schedule);

    BestPoint best;
    if (incumbent)
    {
        try
        {
            consider(best, *incumbent, objective(*incumbent));
        }
        catch (const std::exception &)
        {
        }
    }

    sweep_grid(objective, region.lo, region.hi, region.grid, best);
    if (!best.found)
        throw SearchError("grid_search: every candidate of the initial grid failed");

    std::array<double, 3> pitch{};
    for (int ax = 0; ax < 3; ++ax)
        pitch[ax] = (region.hi[ax] - region.lo[ax]) / (region.grid[ax] - 1);

    const std::array<int, 3> refine_counts{2 * schedule.refine_factor + 1,
                                           2 * schedule.refine_factor + 1,
                                           2 * schedule.refine_factor + 1};
    for (int stage = 2; stage <= schedule.stages; ++stage)
    {
        // Box of +-pitch around the incumbent, shifted (not shrunk) to stay
        // inside the region so the pitch division stays exact.
        Position3 lo, hi;
        for (int ax = 0; ax < 3; ++ax)
        {
            double span = 2.0 * pitch[ax];
            double a = best.pos[ax] - pitch[ax];
            if (a < region.lo[ax])
                a = region.lo[ax];
            if (a + span > region.hi[ax])
                a = std::max(region.lo[ax], region.hi[ax] - span);
            lo[ax] = a;
            hi[ax] = std::min(region.hi[ax], a + span);
            pitch[ax] = (hi[ax] - lo[ax]) / (refine_counts[ax] - 1);
        }
        sweep_grid(objective, lo, hi, refine_counts, best);
    }
    return best;
}

} // namespace

Position3 grid_search_single(const std::function<double(const Position3 &)> &objective,
                             const SearchRegion &region, const GridSchedule &schedule,
                             const std::optional<Position3> &incumbent)
{
    return grid_search_best(objective, region, schedule, incumbent).pos;
}

EstimationResult aco_localize(const SignalBlock &y, const SignalBlock &x, const ArrayGeometry &tx,
                              const ArrayGeometry &rx, double wavenumber, int k_max,
                              const EstimatorConfig &config)
{
    if (k_max < 1)
        throw ConfigError("aco_localize: k_max must be >= 1");
    if (!(config.epsilon > 0.0))
        throw ConfigError("aco_localize: epsilon must be positive");

    const ConcentratedNll nll(y.data, x.data, tx, rx, wavenumber, config.loading);
    const int max_updates = config.max_updates > 0 ? config.max_updates : 50 * k_max;
    const std::array<double, 3> guard = final_grid_pitch(config.region, config.schedule);

    std::vector<Position3> positions;
    positions.reserve(k_max);

    // Candidates falling into the final-pitch cell of an already-placed
    // target are rejected; coincident estimates make the model degenerate.
    auto objective_for = [&](int p) {
        return [&, p](const Position3 &c) {
            for (int i = 0; i < static_cast<int>(positions.size()); ++i)
            {
                if (i == p)
                    continue;
                const Position3 &q = positions[i];
                if (std::abs(c.x - q.x) <= 0.5 * guard[0] && std::abs(c.y - q.y) <= 0.5 * guard[1] &&
                    std::abs(c.z - q.z) <= 0.5 * guard[2])
                    throw SingularityError("aco_localize: candidate coincides with a fixed target");
            }
            std::vector<Position3> candidate = positions;
            if (p < static_cast<int>(candidate.size()))
                candidate[p] = c;
            else
                candidate.push_back(c);
            return nll(candidate);
        };
    };

    EstimationResult result;
    int step = 0;
    int updates = 0;

    // Single-target initialization.
    BestPoint first = grid_search_best(objective_for(0), config.region, config.schedule, std::nullopt);
    positions.push_back(first.pos);
    result.trace.push_back({step++, 0, false, first.value});

    for (int k_hat = 2; k_hat <= k_max; ++k_hat)
    {
        // Bring in target k_hat with the previous ones fixed; even after the
        // update cap is exhausted every target still gets its initial estimate.
        const int newest = k_hat - 1;
        BestPoint added =
            grid_search_best(objective_for(newest), config.region, config.schedule, std::nullopt);
        positions.push_back(added.pos);
        result.trace.push_back({step++, newest, false, added.value});

        double f_new = added.value;
        double f_old = f_new + 2.0 * config.epsilon;
        int p = 0;
        while (f_old - f_new > config.epsilon)
        {
            if (updates >= max_updates)
            {
                result.converged = false;
                break;
            }
            f_old = f_new;
            BestPoint refined =
                grid_search_best(objective_for(p), config.region, config.schedule, positions[p]);
            positions[p] = refined.pos;
            f_new = refined.value;
            result.trace.push_back({step++, p, true, f_new});
            ++updates;
            p = (p + 1) % k_hat;
        }
    }

    // Final coefficient and noise-covariance estimates at the located targets.
    Eigen::VectorXcd b_hat;
    nll.evaluate(positions, &b_hat);

    Eigen::MatrixXcd a(rx.size(), k_max), v(tx.size(), k_max);
    for (int i = 0; i < k_max; ++i)
    {
        a.col(i) = steering(rx, positions[i], wavenumber, AmplitudeModel::Exact);
        v.col(i) = steering(tx, positions[i], wavenumber, AmplitudeModel::Exact);
    }
    Eigen::MatrixXcd s = v.transpose() * x.data;

    result.positions = positions;
    result.coeffs = b_hat;
    result.noise_cov = estimate_noise_cov(y.data, a, b_hat, s);
    result.cycles = updates;
    result.logdet_floor = nll.last_floor();
    return result;
}

} // namespace nfloc
