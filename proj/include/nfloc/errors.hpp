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

#ifndef NFLOC_ERRORS_HPP
#define NFLOC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nfloc
{

/// Bad or inconsistent user input (scenario files, CLI arguments, invalid
/// construction parameters). Maps to process exit code 2.
class ConfigError : public std::runtime_error
{
public:
    explicit ConfigError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Matrix/vector dimensions do not line up.
class DimensionError : public std::runtime_error
{
public:
    explicit DimensionError(const std::string &msg) : std::runtime_error(msg) {}
};

/// A matrix required to be Hermitian positive definite failed its Cholesky
/// factorization.
class NotPositiveDefiniteError : public std::runtime_error
{
public:
    explicit NotPositiveDefiniteError(const std::string &msg) : std::runtime_error(msg) {}
};

/// A target coincides (within the minimum-distance guard) with an antenna
/// element, making the path-loss model singular.
class SingularityError : public std::runtime_error
{
public:
    explicit SingularityError(const std::string &msg) : std::runtime_error(msg) {}
};

/// The estimation problem is numerically unidentifiable (singular or
/// hopelessly ill-conditioned information matrix, rank-deficient waveform
/// Gram matrix, ...). Maps to process exit code 3.
class IdentifiabilityError : public std::runtime_error
{
public:
    explicit IdentifiabilityError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Every candidate of a grid search failed to evaluate.
class SearchError : public std::runtime_error
{
public:
    explicit SearchError(const std::string &msg) : std::runtime_error(msg) {}
};

} // namespace nfloc

#endif
