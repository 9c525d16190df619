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

#include "nfloc/scene.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "nfloc/errors.hpp"
#include "nfloc/numerics.hpp"

namespace nfloc
{

bool Position3::finite() const
{
    return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
}

double distance(const Position3 &a, const Position3 &b)
{
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

bool lex_less(const Position3 &a, const Position3 &b)
{
    if (a.x != b.x)
        return a.x < b.x;
    if (a.y != b.y)
        return a.y < b.y;
    return a.z < b.z;
}

namespace
{

Position3 centroid(const std::vector<Position3> &pts)
{
    Position3 c;
    for (const auto &p : pts)
        c = c + p;
    const double n = static_cast<double>(pts.size());
    return {c.x / n, c.y / n, c.z / n};
}

} // namespace

ArrayGeometry::ArrayGeometry(std::vector<Position3> elements, double gain)
    : elements_(std::move(elements)), gain_(gain)
{
    if (elements_.empty())
        throw ConfigError("ArrayGeometry: at least one element required");
    reference_ = centroid(elements_);
    validate();
}

ArrayGeometry::ArrayGeometry(std::vector<Position3> elements, Position3 reference, double gain)
    : elements_(std::move(elements)), reference_(reference), gain_(gain)
{
    validate();
}

void ArrayGeometry::validate() const
{
    if (elements_.empty())
        throw ConfigError("ArrayGeometry: at least one element required");
    if (!(gain_ >= 0.0) || !std::isfinite(gain_))
        throw ConfigError("ArrayGeometry: gain must be finite and >= 0");
    if (!reference_.finite())
        throw ConfigError("ArrayGeometry: reference point must be finite");
    for (std::size_t i = 0; i < elements_.size(); ++i)
    {
        if (!elements_[i].finite())
            throw ConfigError("ArrayGeometry: element " + std::to_string(i) + " is not finite");
        for (std::size_t j = i + 1; j < elements_.size(); ++j)
            if (distance(elements_[i], elements_[j]) == 0.0)
                throw ConfigError("ArrayGeometry: elements " + std::to_string(i) + " and " +
                                  std::to_string(j) + " coincide");
    }
}

double ArrayGeometry::aperture() const
{
    double best = 0.0;
    for (std::size_t i = 0; i < elements_.size(); ++i)
        for (std::size_t j = i + 1; j < elements_.size(); ++j)
            best = std::max(best, distance(elements_[i], elements_[j]));
    return best;
}

ArrayGeometry build_upa(int rows, int cols, double spacing, const Position3 &center, Plane plane,
                        double gain)
{
    if (rows < 1 || cols < 1)
        throw ConfigError("build_upa: rows and cols must be >= 1");
    if (!(spacing > 0.0) || !std::isfinite(spacing))
        throw ConfigError("build_upa: spacing must be positive");

    int first_axis = 0, second_axis = 1;
    switch (plane)
    {
    case Plane::XY: first_axis = 0; second_axis = 1; break;
    case Plane::XZ: first_axis = 0; second_axis = 2; break;
    case Plane::YZ: first_axis = 1; second_axis = 2; break;
    }

    std::vector<Position3> elements;
    elements.reserve(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
    const double row0 = -0.5 * (rows - 1) * spacing;
    const double col0 = -0.5 * (cols - 1) * spacing;
    for (int r = 0; r < rows; ++r)
    {
        for (int c = 0; c < cols; ++c)
        {
            Position3 p = center;
            p[first_axis] += row0 + r * spacing;
            p[second_axis] += col0 + c * spacing;
            elements.push_back(p);
        }
    }
    return ArrayGeometry(std::move(elements), center, gain);
}

double wavelength(double carrier_hz)
{
    if (!(carrier_hz > 0.0) || !std::isfinite(carrier_hz))
        throw ConfigError("wavelength: carrier frequency must be positive");
    return kSpeedOfLight / carrier_hz;
}

double wavenumber(double carrier_hz)
{
    return 2.0 * std::numbers::pi / wavelength(carrier_hz);
}

NoiseCovariance NoiseCovariance::scaled_identity(double sigma2, int dim)
{
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2))
        throw NotPositiveDefiniteError("NoiseCovariance: sigma2 must be positive");
    if (dim < 1)
        throw ConfigError("NoiseCovariance: dimension must be >= 1");
    NoiseCovariance n;
    n.scaled_ = true;
    n.dim_ = dim;
    n.sigma2_ = sigma2;
    return n;
}

NoiseCovariance NoiseCovariance::dense(Eigen::MatrixXcd q)
{
    if (q.rows() != q.cols() || q.rows() < 1)
        throw DimensionError("NoiseCovariance: covariance must be square and non-empty");
    const double scale = q.norm();
    if ((q - q.adjoint()).norm() > 1e-12 * scale)
        throw ConfigError("NoiseCovariance: covariance is not Hermitian within 1e-12 relative");
    NoiseCovariance n;
    n.scaled_ = false;
    n.dim_ = static_cast<int>(q.rows());
    n.chol_ = numerics::chol_hermitian(q); // throws if not PD
    n.q_ = std::move(q);
    return n;
}

Eigen::MatrixXcd NoiseCovariance::solve(const Eigen::MatrixXcd &rhs) const
{
    if (rhs.rows() != dim_)
        throw DimensionError("NoiseCovariance::solve: rhs rows do not match covariance dimension");
    if (scaled_)
        return rhs / sigma2_;
    // Two triangular solves against the cached factor.
    Eigen::MatrixXcd y = chol_.triangularView<Eigen::Lower>().solve(rhs);
    return chol_.adjoint().triangularView<Eigen::Upper>().solve(y);
}

Eigen::MatrixXcd NoiseCovariance::color(const Eigen::MatrixXcd &rhs) const
{
    if (rhs.rows() != dim_)
        throw DimensionError("NoiseCovariance::color: rhs rows do not match covariance dimension");
    if (scaled_)
        return std::sqrt(sigma2_) * rhs;
    return chol_.triangularView<Eigen::Lower>() * rhs;
}

double NoiseCovariance::trace() const
{
    if (scaled_)
        return sigma2_ * dim_;
    return q_.trace().real();
}

NoiseCovariance NoiseCovariance::scaled(double alpha) const
{
    if (!(alpha > 0.0) || !std::isfinite(alpha))
        throw NotPositiveDefiniteError("NoiseCovariance::scaled: scale must be positive");
    if (scaled_)
        return scaled_identity(alpha * sigma2_, dim_);
    NoiseCovariance n;
    n.scaled_ = false;
    n.dim_ = dim_;
    n.q_ = alpha * q_;
    n.chol_ = std::sqrt(alpha) * chol_;
    return n;
}

Eigen::MatrixXcd NoiseCovariance::matrix() const
{
    if (scaled_)
        return sigma2_ * Eigen::MatrixXcd::Identity(dim_, dim_);
    return q_;
}

Scene::Scene(ArrayGeometry tx, ArrayGeometry rx, std::vector<Target> targets, double carrier_hz,
             NoiseCovariance noise)
    : tx_(std::move(tx)), rx_(std::move(rx)), targets_(std::move(targets)), carrier_hz_(carrier_hz),
      noise_(std::move(noise))
{
    if (!(carrier_hz_ > 0.0) || !std::isfinite(carrier_hz_))
        throw ConfigError("Scene: carrier_hz must be positive");
    if (noise_.dim() != rx_.size())
        throw DimensionError("Scene: noise covariance dimension (" + std::to_string(noise_.dim()) +
                             ") does not match receive element count (" + std::to_string(rx_.size()) + ")");
    for (std::size_t k = 0; k < targets_.size(); ++k)
    {
        const auto &t = targets_[k];
        if (!t.position.finite() || !std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag()))
            throw ConfigError("Scene: target " + std::to_string(k) + " has non-finite parameters");
    }
}

double Scene::wavenumber() const
{
    return nfloc::wavenumber(carrier_hz_);
}

std::vector<Position3> Scene::target_positions() const
{
    std::vector<Position3> out;
    out.reserve(targets_.size());
    for (const auto &t : targets_)
        out.push_back(t.position);
    return out;
}

Eigen::VectorXcd Scene::coeff_vector() const
{
    Eigen::VectorXcd b(targets_.size());
    for (std::size_t k = 0; k < targets_.size(); ++k)
        b(static_cast<Eigen::Index>(k)) = targets_[k].coeff;
    return b;
}

Scene Scene::with_noise(NoiseCovariance noise) const
{
    return Scene(tx_, rx_, targets_, carrier_hz_, std::move(noise));
}

Scene Scene::with_targets(std::vector<Target> targets) const
{
    return Scene(tx_, rx_, std::move(targets), carrier_hz_, noise_);
}

} // namespace nfloc
