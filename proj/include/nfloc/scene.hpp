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

#ifndef NFLOC_SCENE_HPP
#define NFLOC_SCENE_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace nfloc
{

constexpr double kSpeedOfLight = 299792458.0; // m/s

/// A point in 3D space, SI meters.
struct Position3
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
    double &operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }

    bool finite() const;
    Eigen::Vector3d vec() const { return {x, y, z}; }
};

inline Position3 operator+(const Position3 &a, const Position3 &b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Position3 operator-(const Position3 &a, const Position3 &b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline bool operator==(const Position3 &a, const Position3 &b) { return a.x == b.x && a.y == b.y && a.z == b.z; }

double distance(const Position3 &a, const Position3 &b);

/// Lexicographic (x, y, z) order; the tie-break used throughout the search code.
bool lex_less(const Position3 &a, const Position3 &b);

/// Antenna array: element positions, a phase/path-loss reference point and a
/// common power gain. Immutable after construction.
class ArrayGeometry
{
public:
    /// Reference defaults to the element centroid when not given.
    explicit ArrayGeometry(std::vector<Position3> elements, double gain = 1.0);
    ArrayGeometry(std::vector<Position3> elements, Position3 reference, double gain = 1.0);

    const std::vector<Position3> &elements() const { return elements_; }
    const Position3 &reference() const { return reference_; }
    double gain() const { return gain_; }
    int size() const { return static_cast<int>(elements_.size()); }

    /// Largest pairwise element distance (the aperture extent).
    double aperture() const;

private:
    void validate() const;

    std::vector<Position3> elements_;
    Position3 reference_;
    double gain_;
};

/// Axis pair spanned by a planar array.
enum class Plane
{
    XY,
    XZ,
    YZ
};

/// Regular rows x cols grid with the given element spacing, centered at
/// `center` and lying in `plane` (rows step the first axis of the pair,
/// columns the second). The reference point is the center.
ArrayGeometry build_upa(int rows, int cols, double spacing, const Position3 &center, Plane plane,
                        double gain = 1.0);

/// c / carrier_hz; rejects nonpositive frequencies.
double wavelength(double carrier_hz);

/// 2*pi / wavelength(carrier_hz).
double wavenumber(double carrier_hz);

/// Point scatterer: position plus complex reflection coefficient.
struct Target
{
    Position3 position;
    std::complex<double> coeff{1.0, 0.0};
};

/// Noise-and-interference covariance of the receive array. Kept either as a
/// scaled identity (sigma2 * I) or as an explicit dense Hermitian positive
/// definite matrix; the scaled-identity form never materializes the full
/// matrix, which keeps very large arrays affordable.
class NoiseCovariance
{
public:
    static NoiseCovariance scaled_identity(double sigma2, int dim);
    /// Validates Hermitian symmetry (1e-12 relative) and positive
    /// definiteness (Cholesky); throws otherwise.
    static NoiseCovariance dense(Eigen::MatrixXcd q);

    int dim() const { return dim_; }
    bool is_scaled_identity() const { return scaled_; }
    /// Only meaningful for the scaled-identity form.
    double sigma2() const { return sigma2_; }

    /// Q^{-1} * rhs.
    Eigen::MatrixXcd solve(const Eigen::MatrixXcd &rhs) const;
    /// L * rhs with Q = L L^H; colors standard complex normals to covariance Q.
    Eigen::MatrixXcd color(const Eigen::MatrixXcd &rhs) const;
    double trace() const;
    /// alpha * Q as a new covariance (alpha > 0).
    NoiseCovariance scaled(double alpha) const;
    /// Materializes the full matrix. Fine for test-sized problems; avoid on
    /// huge scaled-identity covariances.
    Eigen::MatrixXcd matrix() const;

private:
    NoiseCovariance() = default;

    bool scaled_ = true;
    int dim_ = 0;
    double sigma2_ = 1.0;
    Eigen::MatrixXcd q_;      // dense form only
    Eigen::MatrixXcd chol_;   // lower Cholesky factor of the dense form
};

/// Ground-truth scenario: geometry, targets, carrier and noise covariance.
class Scene
{
public:
    Scene(ArrayGeometry tx, ArrayGeometry rx, std::vector<Target> targets, double carrier_hz,
          NoiseCovariance noise);

    const ArrayGeometry &tx() const { return tx_; }
    const ArrayGeometry &rx() const { return rx_; }
    const std::vector<Target> &targets() const { return targets_; }
    double carrier_hz() const { return carrier_hz_; }
    const NoiseCovariance &noise() const { return noise_; }

    int num_targets() const { return static_cast<int>(targets_.size()); }
    int num_rx() const { return rx_.size(); }
    int num_tx() const { return tx_.size(); }
    double wavenumber() const;

    std::vector<Position3> target_positions() const;
    Eigen::VectorXcd coeff_vector() const;

    /// Copy with a different noise covariance (used by SNR sweeps).
    Scene with_noise(NoiseCovariance noise) const;
    /// Copy with different targets (used by CRB distance sweeps).
    Scene with_targets(std::vector<Target> targets) const;

private:
    ArrayGeometry tx_;
    ArrayGeometry rx_;
    std::vector<Target> targets_;
    double carrier_hz_;
    NoiseCovariance noise_;
};

} // namespace nfloc

#endif
