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

#ifndef NFLOC_CHANNEL_HPP
#define NFLOC_CHANNEL_HPP

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "nfloc/scene.hpp"

namespace nfloc
{

/// Spherical-wavefront amplitude handling.
///  - Exact:    element amplitude lambda*sqrt(G) / (4*pi*d), per-element phase.
///  - Constant: unit amplitude, per-element phase only (the comparison model;
///    round-trip path loss is then carried by the reflection coefficients).
enum class AmplitudeModel
{
    Exact,
    Constant
};

enum class Axis
{
    X = 0,
    Y = 1,
    Z = 2
};

/// Targets closer than this to any element are rejected as singular rather
/// than clamped; a target inside the array is unphysical.
constexpr double kMinTargetElementDistance = 1e-9; // m

/// Per-element complex response of `array` toward a point target:
/// amp(d_m) * exp(-j * k * d_m) with d_m the element-target distance.
Eigen::VectorXcd steering(const ArrayGeometry &array, const Position3 &target, double wavenumber,
                          AmplitudeModel model);

/// Derivative of the steering vector with respect to one target coordinate.
/// Element-wise: steering element times
///   (u_m - u_t)/d_m^2 + j*k*(u_m - u_t)/d_m       (Exact)
///   j*k*(u_m - u_t)/d_m                           (Constant; no amplitude term)
Eigen::VectorXcd steering_derivative(const ArrayGeometry &array, const Position3 &target,
                                     double wavenumber, Axis axis, AmplitudeModel model);

/// Steering matrices for a set of candidate target positions, with their
/// coordinate derivatives. Column k corresponds to target k.
struct SteeringSet
{
    Eigen::MatrixXcd rx; // M x K receive steering matrix
    Eigen::MatrixXcd tx; // N x K transmit steering matrix
    std::array<Eigen::MatrixXcd, 3> rx_deriv; // d(rx)/d{x,y,z}
    std::array<Eigen::MatrixXcd, 3> tx_deriv; // d(tx)/d{x,y,z}

    int num_targets() const { return static_cast<int>(rx.cols()); }
};

SteeringSet build_steering_set(const ArrayGeometry &tx, const ArrayGeometry &rx,
                               const std::vector<Position3> &targets, double wavenumber,
                               AmplitudeModel model);

} // namespace nfloc

#endif
