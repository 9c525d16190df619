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

#ifndef NFLOC_SCENARIO_IO_HPP
#define NFLOC_SCENARIO_IO_HPP

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "nfloc/estimator.hpp"
#include "nfloc/montecarlo.hpp"
#include "nfloc/scene.hpp"
#include "nfloc/waveform.hpp"

namespace nfloc
{

/// Waveform section of a scenario: either a generated isotropic block or an
/// explicit file.
struct WaveformConfig
{
    WaveformMode mode = WaveformMode::Unitary;
    int symbols = 1;
    double power = 1.0;
    std::uint64_t seed = 1;
    std::string file; // when non-empty, overrides the generated block

    /// Materialize the transmit block for a given port count.
    SignalBlock realize(int ports) const;
};

/// Everything a scenario file describes: the scene plus the waveform,
/// estimator and sweep configurations.
struct Scenario
{
    Scenario(Scene s) : scene(std::move(s)) {}

    Scene scene;
    WaveformConfig waveform;
    EstimatorConfig estimator;
    SweepConfig sweep;
    bool has_estimator = false;
    bool has_sweep = false;
};

/// Parse a scenario JSON file. Unknown or ill-typed keys raise ConfigError
/// naming the offending key. Relative file references (waveform, noise
/// covariance) resolve against the scenario file's directory.
Scenario parse_scenario(const std::string &path);

/// Parse from an already-loaded JSON document (`base_dir` resolves file
/// references).
Scenario parse_scenario_json(const nlohmann::json &doc, const std::string &base_dir = ".");

/// Serialize back to JSON; parse(serialize(s)) reproduces the same scene
/// and configuration.
nlohmann::json scenario_json(const Scenario &scenario);
std::string scenario_string(const Scenario &scenario);

} // namespace nfloc

#endif
