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

#include "nfloc/scenario_io.hpp"

#include <filesystem>
#include <fstream>

#include "nfloc/errors.hpp"

namespace nfloc
{

using nlohmann::json;

namespace
{

// Strict accessors: every lookup failure names the key and the expected type.

void require_keys(const json &obj, const std::string &where,
                  std::initializer_list<const char *> allowed)
{
    for (auto it = obj.begin(); it != obj.end(); ++it)
    {
        bool known = false;
        for (const char *k : allowed)
            if (it.key() == k)
            {
                known = true;
                break;
            }
        if (!known)
            throw ConfigError("scenario: unknown key '" + where + "." + it.key() + "'");
    }
}

const json &require(const json &obj, const std::string &where, const char *key)
{
    auto it = obj.find(key);
    if (it == obj.end())
        throw ConfigError("scenario: missing key '" + where + "." + key + "'");
    return *it;
}

double get_number(const json &obj, const std::string &where, const char *key)
{
    const json &v = require(obj, where, key);
    if (!v.is_number())
        throw ConfigError("scenario: '" + where + "." + key + "' must be a number");
    return v.get<double>();
}

double get_number_or(const json &obj, const std::string &where, const char *key, double fallback)
{
    if (!obj.contains(key))
        return fallback;
    return get_number(obj, where, key);
}

int get_int(const json &obj, const std::string &where, const char *key)
{
    const json &v = require(obj, where, key);
    if (!v.is_number_integer())
        throw ConfigError("scenario: '" + where + "." + key + "' must be an integer");
    return v.get<int>();
}

int get_int_or(const json &obj, const std::string &where, const char *key, int fallback)
{
    if (!obj.contains(key))
        return fallback;
    return get_int(obj, where, key);
}

std::string get_string(const json &obj, const std::string &where, const char *key)
{
    const json &v = require(obj, where, key);
    if (!v.is_string())
        throw ConfigError("scenario: '" + where + "." + key + "' must be a string");
    return v.get<std::string>();
}

Position3 get_position(const json &v, const std::string &where)
{
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() || !v[2].is_number())
        throw ConfigError("scenario: '" + where + "' must be an array of three numbers");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

Plane parse_plane(const std::string &s, const std::string &where)
{
    if (s == "xy")
        return Plane::XY;
    if (s == "xz")
        return Plane::XZ;
    if (s == "yz")
        return Plane::YZ;
    throw ConfigError("scenario: '" + where + "' must be one of xy, xz, yz");
}

std::uint64_t get_uint64_or(const json &obj, const std::string &where, const char *key,
                            std::uint64_t fallback)
{
    if (!obj.contains(key))
        return fallback;
    const json &v = obj[key];
    if (!v.is_number_unsigned() && !v.is_number_integer())
        throw ConfigError("scenario: '" + where + "." + key + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

ArrayGeometry parse_array(const json &obj, const std::string &where)
{
    if (!obj.is_object())
        throw ConfigError("scenario: '" + where + "' must be an object");
    require_keys(obj, where, {"upa", "elements", "reference", "gain"});
    const double gain = get_number_or(obj, where, "gain", 1.0);

    std::vector<Position3> elements;
    std::optional<Position3> reference;
    if (obj.contains("reference"))
        reference = get_position(obj["reference"], where + ".reference");

    if (obj.contains("upa") == obj.contains("elements"))
        throw ConfigError("scenario: '" + where + "' needs exactly one of 'upa' or 'elements'");

    if (obj.contains("upa"))
    {
        const json &upa = obj["upa"];
        const std::string uw = where + ".upa";
        require_keys(upa, uw, {"rows", "cols", "spacing", "center", "plane"});
        const int rows = get_int(upa, uw, "rows");
        const int cols = get_int(upa, uw, "cols");
        const double spacing = get_number(upa, uw, "spacing");
        const Position3 center = get_position(require(upa, uw, "center"), uw + ".center");
        const Plane plane = parse_plane(get_string(upa, uw, "plane"), uw + ".plane");
        ArrayGeometry g = build_upa(rows, cols, spacing, center, plane, gain);
        if (reference)
            return ArrayGeometry(g.elements(), *reference, gain);
        return g;
    }

    const json &els = obj["elements"];
    if (!els.is_array() || els.empty())
        throw ConfigError("scenario: '" + where + ".elements' must be a non-empty array");
    for (std::size_t i = 0; i < els.size(); ++i)
        elements.push_back(get_position(els[i], where + ".elements[" + std::to_string(i) + "]"));
    if (reference)
        return ArrayGeometry(std::move(elements), *reference, gain);
    return ArrayGeometry(std::move(elements), gain);
}

json array_json(const ArrayGeometry &g)
{
    json out;
    json els = json::array();
    for (const auto &e : g.elements())
        els.push_back({e.x, e.y, e.z});
    out["elements"] = std::move(els);
    out["reference"] = {g.reference().x, g.reference().y, g.reference().z};
    out["gain"] = g.gain();
    return out;
}

Eigen::MatrixXcd load_covariance_csv(const std::string &path)
{
    SignalBlock block = load_signal_csv(path, SignalRole::Receive);
    if (block.ports() != block.symbols())
        throw ConfigError("scenario: covariance file '" + path + "' is not square");
    return block.data;
}

} // namespace

SignalBlock WaveformConfig::realize(int ports) const
{
    if (!file.empty())
    {
        SignalBlock block = load_signal_csv(file, SignalRole::Transmit);
        if (block.ports() != ports)
            throw ConfigError("waveform file '" + file + "' has " + std::to_string(block.ports()) +
                              " ports, scene expects " + std::to_string(ports));
        return block;
    }
    return generate_isotropic(ports, symbols, power, mode, seed);
}

Scenario parse_scenario_json(const json &doc, const std::string &base_dir)
{
    if (!doc.is_object())
        throw ConfigError("scenario: top level must be an object");
    require_keys(doc, "scenario",
                 {"arrays", "targets", "carrier_hz", "noise", "waveform", "estimator", "sweep"});

    auto resolve = [&](const std::string &p) {
        std::filesystem::path fp(p);
        if (fp.is_absolute())
            return p;
        return (std::filesystem::path(base_dir) / fp).string();
    };

    // arrays
    const json &arrays = require(doc, "scenario", "arrays");
    require_keys(arrays, "arrays", {"tx", "rx"});
    ArrayGeometry tx = parse_array(require(arrays, "arrays", "tx"), "arrays.tx");
    ArrayGeometry rx = parse_array(require(arrays, "arrays", "rx"), "arrays.rx");

    // targets
    const json &targets_j = require(doc, "scenario", "targets");
    if (!targets_j.is_array() || targets_j.empty())
        throw ConfigError("scenario: 'targets' must be a non-empty array");
    std::vector<Target> targets;
    for (std::size_t i = 0; i < targets_j.size(); ++i)
    {
        const std::string tw = "targets[" + std::to_string(i) + "]";
        const json &t = targets_j[i];
        require_keys(t, tw, {"position", "coeff"});
        Target target;
        target.position = get_position(require(t, tw, "position"), tw + ".position");
        const json &cf = require(t, tw, "coeff");
        if (!cf.is_array() || cf.size() != 2 || !cf[0].is_number() || !cf[1].is_number())
            throw ConfigError("scenario: '" + tw + ".coeff' must be [real, imag]");
        target.coeff = {cf[0].get<double>(), cf[1].get<double>()};
        targets.push_back(target);
    }

    const double carrier = get_number(doc, "scenario", "carrier_hz");

    // noise
    const json &noise_j = require(doc, "scenario", "noise");
    require_keys(noise_j, "noise", {"sigma2", "q_file"});
    if (noise_j.contains("sigma2") == noise_j.contains("q_file"))
        throw ConfigError("scenario: 'noise' needs exactly one of 'sigma2' or 'q_file'");
    NoiseCovariance noise =
        noise_j.contains("sigma2")
            ? NoiseCovariance::scaled_identity(get_number(noise_j, "noise", "sigma2"), rx.size())
            : NoiseCovariance::dense(load_covariance_csv(resolve(get_string(noise_j, "noise", "q_file"))));

    Scenario scenario(Scene(std::move(tx), std::move(rx), std::move(targets), carrier, std::move(noise)));

    // waveform
    const json &wf = require(doc, "scenario", "waveform");
    require_keys(wf, "waveform", {"mode", "L", "power", "seed", "file"});
    if (wf.contains("file"))
    {
        scenario.waveform.file = resolve(get_string(wf, "waveform", "file"));
    }
    else
    {
        const std::string mode = get_string(wf, "waveform", "mode");
        if (mode == "unitary")
            scenario.waveform.mode = WaveformMode::Unitary;
        else if (mode == "gaussian")
            scenario.waveform.mode = WaveformMode::Gaussian;
        else
            throw ConfigError("scenario: 'waveform.mode' must be 'unitary' or 'gaussian'");
        scenario.waveform.symbols = get_int(wf, "waveform", "L");
        scenario.waveform.power = get_number_or(wf, "waveform", "power", 1.0);
        scenario.waveform.seed = get_uint64_or(wf, "waveform", "seed", 1);
    }

    // estimator (optional)
    if (doc.contains("estimator"))
    {
        const json &est = doc["estimator"];
        require_keys(est, "estimator",
                     {"region", "schedule", "epsilon", "loading", "max_cycles"});
        const json &region = require(est, "estimator", "region");
        require_keys(region, "estimator.region", {"min", "max", "grid"});
        scenario.estimator.region.lo = get_position(require(region, "estimator.region", "min"),
                                                    "estimator.region.min");
        scenario.estimator.region.hi = get_position(require(region, "estimator.region", "max"),
                                                    "estimator.region.max");
        const json &grid = require(region, "estimator.region", "grid");
        if (!grid.is_array() || grid.size() != 3 || !grid[0].is_number_integer() ||
            !grid[1].is_number_integer() || !grid[2].is_number_integer())
            throw ConfigError("scenario: 'estimator.region.grid' must be three integers");
        for (int ax = 0; ax < 3; ++ax)
            scenario.estimator.region.grid[ax] = grid[ax].get<int>();
        if (est.contains("schedule"))
        {
            const json &sched = est["schedule"];
            require_keys(sched, "estimator.schedule", {"stages", "refine_factor"});
            scenario.estimator.schedule.stages = get_int_or(sched, "estimator.schedule", "stages", 3);
            scenario.estimator.schedule.refine_factor =
                get_int_or(sched, "estimator.schedule", "refine_factor", 5);
        }
        scenario.estimator.epsilon = get_number_or(est, "estimator", "epsilon", 1e-5);
        scenario.estimator.loading = get_number_or(est, "estimator", "loading", 1e-9);
        scenario.estimator.max_updates = get_int_or(est, "estimator", "max_cycles", 0);
        scenario.has_estimator = true;
    }

    // sweep (optional)
    if (doc.contains("sweep"))
    {
        const json &sw = doc["sweep"];
        require_keys(sw, "sweep", {"snr_db", "trials", "master_seed", "noiseless", "threads"});
        if (sw.contains("snr_db"))
        {
            const json &list = sw["snr_db"];
            if (!list.is_array())
                throw ConfigError("scenario: 'sweep.snr_db' must be an array of numbers");
            for (const auto &v : list)
            {
                if (!v.is_number())
                    throw ConfigError("scenario: 'sweep.snr_db' must be an array of numbers");
                scenario.sweep.snr_db.push_back(v.get<double>());
            }
        }
        scenario.sweep.trials = get_int_or(sw, "sweep", "trials", 100);
        scenario.sweep.master_seed = get_uint64_or(sw, "sweep", "master_seed", 1);
        if (sw.contains("noiseless"))
        {
            if (!sw["noiseless"].is_boolean())
                throw ConfigError("scenario: 'sweep.noiseless' must be a boolean");
            scenario.sweep.noiseless = sw["noiseless"].get<bool>();
        }
        scenario.sweep.threads = get_int_or(sw, "sweep", "threads", 0);
        scenario.has_sweep = true;
    }

    return scenario;
}

Scenario parse_scenario(const std::string &path)
{
    std::ifstream f(path);
    if (!f)
        throw ConfigError("scenario: cannot open '" + path + "'");
    json doc;
    try
    {
        doc = json::parse(f);
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError("scenario: '" + path + "' is not valid JSON: " + e.what());
    }
    return parse_scenario_json(doc, std::filesystem::path(path).parent_path().string());
}

nlohmann::json scenario_json(const Scenario &scenario)
{
    const Scene &scene = scenario.scene;
    json out;
    out["arrays"]["tx"] = array_json(scene.tx());
    out["arrays"]["rx"] = array_json(scene.rx());

    json targets = json::array();
    for (const auto &t : scene.targets())
    {
        json tj;
        tj["position"] = {t.position.x, t.position.y, t.position.z};
        tj["coeff"] = {t.coeff.real(), t.coeff.imag()};
        targets.push_back(std::move(tj));
    }
    out["targets"] = std::move(targets);
    out["carrier_hz"] = scene.carrier_hz();

    if (scene.noise().is_scaled_identity())
        out["noise"]["sigma2"] = scene.noise().sigma2();
    else
        throw ConfigError("scenario_json: dense noise covariances serialize by file reference only");

    if (!scenario.waveform.file.empty())
    {
        out["waveform"]["file"] = scenario.waveform.file;
    }
    else
    {
        out["waveform"]["mode"] =
            scenario.waveform.mode == WaveformMode::Unitary ? "unitary" : "gaussian";
        out["waveform"]["L"] = scenario.waveform.symbols;
        out["waveform"]["power"] = scenario.waveform.power;
        out["waveform"]["seed"] = scenario.waveform.seed;
    }

    if (scenario.has_estimator)
    {
        const EstimatorConfig &e = scenario.estimator;
        out["estimator"]["region"]["min"] = {e.region.lo.x, e.region.lo.y, e.region.lo.z};
        out["estimator"]["region"]["max"] = {e.region.hi.x, e.region.hi.y, e.region.hi.z};
        out["estimator"]["region"]["grid"] = {e.region.grid[0], e.region.grid[1], e.region.grid[2]};
        out["estimator"]["schedule"]["stages"] = e.schedule.stages;
        out["estimator"]["schedule"]["refine_factor"] = e.schedule.refine_factor;
        out["estimator"]["epsilon"] = e.epsilon;
        out["estimator"]["loading"] = e.loading;
        out["estimator"]["max_cycles"] = e.max_updates;
    }

    if (scenario.has_sweep)
    {
        out["sweep"]["snr_db"] = scenario.sweep.snr_db;
        out["sweep"]["trials"] = scenario.sweep.trials;
        out["sweep"]["master_seed"] = scenario.sweep.master_seed;
        out["sweep"]["noiseless"] = scenario.sweep.noiseless;
        out["sweep"]["threads"] = scenario.sweep.threads;
    }

    return out;
}

std::string scenario_string(const Scenario &scenario)
{
    return scenario_json(scenario).dump(2) + "\n";
}

} // namespace nfloc
