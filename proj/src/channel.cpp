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

#include "nfloc/channel.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>

#include "nfloc/errors.hpp"

namespace nfloc
{

namespace
{

double checked_distance(const Position3 &element, const Position3 &target, int index)
{
    const double d = distance(element, target);
    if (d < kMinTargetElementDistance)
        throw SingularityError("steering: target at distance " + std::to_string(d) +
                               " m from element " + std::to_string(index) +
                               " (path-loss model singular below 1e-9 m)");
    return d;
}

} // namespace

Eigen::VectorXcd steering(const ArrayGeometry &array, const Position3 &target, double wavenumber,
                          AmplitudeModel model)
{
    if (!(wavenumber > 0.0) || !std::isfinite(wavenumber))
        throw ConfigError("steering: wavenumber must be positive");
    const double lambda = 2.0 * std::numbers::pi / wavenumber;
    const double amp_scale = lambda * std::sqrt(array.gain()) / (4.0 * std::numbers::pi);

    Eigen::VectorXcd v(array.size());
    for (int m = 0; m < array.size(); ++m)
    {
        const double d = checked_distance(array.elements()[m], target, m);
        const double amp = model == AmplitudeModel::Exact ? amp_scale / d : 1.0;
        v(m) = std::polar(amp, -wavenumber * d);
    }
    return v;
}

Eigen::VectorXcd steering_derivative(const ArrayGeometry &array, const Position3 &target,
                                     double wavenumber, Axis axis, AmplitudeModel model)
{
    Eigen::VectorXcd base = steering(array, target, wavenumber, model);
    const int ax = static_cast<int>(axis);
    for (int m = 0; m < array.size(); ++m)
    {
        const Position3 &el = array.elements()[m];
        const double d = distance(el, target);
        const double offset = el[ax] - target[ax];
        double amp_term = model == AmplitudeModel::Exact ? offset / (d * d) : 0.0;
        base(m) *= std::complex<double>(amp_term, wavenumber * offset / d);
    }
    return base;
}

SteeringSet build_steering_set(const ArrayGeometry &tx, const ArrayGeometry &rx,
                               const std::vector<Position3> &targets, double wavenumber,
                               AmplitudeModel model)
{
    const int k_count = static_cast<int>(targets.size());
    SteeringSet set;
    set.rx.resize(rx.size(), k_count);
    set.tx.resize(tx.size(), k_count);
    for (auto &d : set.rx_deriv)
        d.resize(rx.size(), k_count);
    for (auto &d : set.tx_deriv)
        d.resize(tx.size(), k_count);

    for (int k = 0; k < k_count; ++k)
    {
        set.rx.col(k) = steering(rx, targets[k], wavenumber, model);
        set.tx.col(k) = steering(tx, targets[k], wavenumber, model);
        for (int ax = 0; ax < 3; ++ax)
        {
            set.rx_deriv[ax].col(k) =
                steering_derivative(rx, targets[k], wavenumber, static_cast<Axis>(ax), model);
            set.tx_deriv[ax].col(k) =
                steering_derivative(tx, targets[k], wavenumber, static_cast<Axis>(ax), model);
        }
    }
    return set;
}

} // namespace nfloc
