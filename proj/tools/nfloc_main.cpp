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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nfloc/crb.hpp"
#include "nfloc/errors.hpp"
#include "nfloc/estimator.hpp"
#include "nfloc/montecarlo.hpp"
#include "nfloc/scenario_io.hpp"
#include "nfloc/synth.hpp"
#include "nfloc/verify.hpp"

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitNotConverged = 4;

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_output(const std::string &path, const std::string &content)
{
    if (path.empty() || path == "-")
    {
        std::cout << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw nfloc::ConfigError("cannot open '" + path + "' for writing");
    f << content;
    if (!f)
        throw nfloc::ConfigError("write to '" + path + "' failed");
}

nfloc::AmplitudeModel parse_model(const std::string &name)
{
    if (name == "exact")
        return nfloc::AmplitudeModel::Exact;
    if (name == "constant")
        return nfloc::AmplitudeModel::Constant;
    throw nfloc::ConfigError("--amplitude-model must be 'exact' or 'constant'");
}

struct DistanceSweep
{
    double from = 0.0;
    double to = 0.0;
    int count = 0;
};

DistanceSweep parse_distance_sweep(const std::string &spec)
{
    DistanceSweep sweep;
    char colon1 = 0, colon2 = 0;
    std::istringstream is(spec);
    if (!(is >> sweep.from >> colon1 >> sweep.to >> colon2 >> sweep.count) || colon1 != ':' ||
        colon2 != ':' || sweep.count < 1)
        throw nfloc::ConfigError("--sweep-distance expects 'from:to:count' with count >= 1");
    return sweep;
}

std::string matrix_csv(const Eigen::MatrixXd &m)
{
    std::string out;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
    {
        for (Eigen::Index c = 0; c < m.cols(); ++c)
        {
            if (c)
                out += ",";
            out += format_double(m(r, c));
        }
        out += "\n";
    }
    return out;
}

int run_crb(const std::string &scenario_path, const std::string &model_name,
            const std::string &distance_spec, int sweep_target, const std::string &full_matrix_path,
            const std::string &out_path)
{
    nfloc::Scenario scenario = nfloc::parse_scenario(scenario_path);
    const nfloc::AmplitudeModel model = parse_model(model_name);
    const nfloc::SignalBlock x = scenario.waveform.realize(scenario.scene.num_tx());
    const Eigen::MatrixXcd rx_cov = nfloc::sample_covariance(x);
    const int l = x.symbols();

    if (distance_spec.empty())
    {
        nfloc::FisherBundle bundle = nfloc::compute_crb(scenario.scene, rx_cov, l, model);
        std::string out = "target_index,crb_m2\n";
        const std::vector<double> crbs = nfloc::position_crbs(bundle.crb);
        for (std::size_t k = 0; k < crbs.size(); ++k)
            out += std::to_string(k) + "," + format_double(crbs[k]) + "\n";
        write_output(out_path, out);
        if (!full_matrix_path.empty())
            write_output(full_matrix_path, matrix_csv(bundle.crb));
        return kExitOk;
    }

    // Move the designated target along the ray from the receive reference
    // through its configured position and emit one CRB row per distance.
    const DistanceSweep sweep = parse_distance_sweep(distance_spec);
    const auto &targets = scenario.scene.targets();
    if (sweep_target < 0 || sweep_target >= static_cast<int>(targets.size()))
        throw nfloc::ConfigError("--target index out of range");
    const nfloc::Position3 ref = scenario.scene.rx().reference();
    const double base_dist = nfloc::distance(ref, targets[sweep_target].position);
    if (base_dist <= 0.0)
        throw nfloc::ConfigError("designated target coincides with the receive reference point");
    const Eigen::Vector3d dir =
        (targets[sweep_target].position.vec() - ref.vec()) / base_dist;

    std::string out = "distance_m";
    for (std::size_t k = 0; k < targets.size(); ++k)
        out += ",crb_m2_t" + std::to_string(k);
    out += "\n";
    for (int i = 0; i < sweep.count; ++i)
    {
        const double d = sweep.count == 1
                             ? sweep.from
                             : sweep.from + (sweep.to - sweep.from) * i / (sweep.count - 1);
        std::vector<nfloc::Target> moved = targets;
        const Eigen::Vector3d p = ref.vec() + d * dir;
        moved[sweep_target].position = {p.x(), p.y(), p.z()};
        nfloc::Scene scene = scenario.scene.with_targets(std::move(moved));
        const std::vector<double> crbs =
            nfloc::position_crbs(nfloc::compute_crb(scene, rx_cov, l, model).crb);
        out += format_double(d);
        for (double c : crbs)
            out += "," + format_double(c);
        out += "\n";
    }
    write_output(out_path, out);
    return kExitOk;
}

int run_simulate(const std::string &scenario_path, std::uint64_t seed, const std::string &out_path)
{
    nfloc::Scenario scenario = nfloc::parse_scenario(scenario_path);
    const nfloc::SignalBlock x = scenario.waveform.realize(scenario.scene.num_tx());
    const nfloc::SignalBlock y = nfloc::simulate_received(scenario.scene, x, seed);
    write_output(out_path, nfloc::signal_csv_string(y));
    return kExitOk;
}

int run_localize(const std::string &scenario_path, const std::string &y_path,
                 std::optional<std::uint64_t> seed, bool noiseless, int k_max_override,
                 const std::string &out_path)
{
    nfloc::Scenario scenario = nfloc::parse_scenario(scenario_path);
    if (!scenario.has_estimator)
        throw nfloc::ConfigError("scenario has no 'estimator' section");
    const nfloc::SignalBlock x = scenario.waveform.realize(scenario.scene.num_tx());

    nfloc::SignalBlock y;
    if (!y_path.empty())
    {
        y = nfloc::load_signal_csv(y_path, nfloc::SignalRole::Receive);
    }
    else if (seed || noiseless)
    {
        y = nfloc::simulate_received(scenario.scene, x, seed.value_or(0), noiseless);
    }
    else
    {
        throw nfloc::ConfigError("localize needs --y FILE or --seed S (optionally --noiseless)");
    }

    const int k_max = k_max_override > 0 ? k_max_override : scenario.scene.num_targets();
    nfloc::EstimationResult result =
        nfloc::aco_localize(y, x, scenario.scene.tx(), scenario.scene.rx(),
                            scenario.scene.wavenumber(), k_max, scenario.estimator);

    nlohmann::json doc;
    for (const auto &p : result.positions)
        doc["positions"].push_back({p.x, p.y, p.z});
    for (Eigen::Index i = 0; i < result.coeffs.size(); ++i)
        doc["coeffs"].push_back({result.coeffs(i).real(), result.coeffs(i).imag()});
    doc["noise_cov_fro_norm"] = result.noise_cov.norm();
    for (const auto &entry : result.trace)
        doc["objective_trace"].push_back({{"step", entry.step},
                                          {"target", entry.target},
                                          {"cyclic", entry.cyclic},
                                          {"f3", entry.objective}});
    doc["cycles"] = result.cycles;
    doc["converged"] = result.converged;
    doc["logdet_floor"] = result.logdet_floor;
    write_output(out_path, doc.dump(2) + "\n");
    return result.converged ? kExitOk : kExitNotConverged;
}

int run_sweep_cmd(const std::string &scenario_path, const std::string &out_path,
                  const std::string &trials_json_path, int threads_override)
{
    nfloc::Scenario scenario = nfloc::parse_scenario(scenario_path);
    if (!scenario.has_estimator)
        throw nfloc::ConfigError("scenario has no 'estimator' section");
    if (!scenario.has_sweep)
        throw nfloc::ConfigError("scenario has no 'sweep' section");
    if (threads_override > 0)
        scenario.sweep.threads = threads_override;

    const nfloc::SignalBlock x = scenario.waveform.realize(scenario.scene.num_tx());
    nfloc::SweepResult result =
        nfloc::run_sweep(scenario.scene, x, scenario.estimator, scenario.sweep);
    write_output(out_path, nfloc::sweep_csv(result));
    if (!trials_json_path.empty())
        write_output(trials_json_path, nfloc::sweep_trials_json(result));
    return kExitOk;
}

int run_verify(int scenes, int pairs, std::uint64_t seed)
{
    nfloc::verify::VerifyOptions options;
    options.fisher_scenes = scenes;
    options.derivative_pairs = pairs;
    options.seed = seed;

    bool all_ok = true;
    for (const auto &check : nfloc::verify::run_all(options))
    {
        std::printf("[%s] %s (worst %.3e, tolerance %.3e)%s%s\n", check.passed ? "PASS" : "FAIL",
                    check.name.c_str(), check.worst, check.tolerance,
                    check.detail.empty() ? "" : "; ", check.detail.c_str());
        all_ok = all_ok && check.passed;
    }
    return all_ok ? kExitOk : kExitNumerical;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"near-field MIMO radar localization: CRB computation, simulation, "
                 "ML estimation and Monte Carlo benchmarking"};
    app.require_subcommand(1);

    // crb
    std::string crb_scenario, crb_model = "exact", crb_distance, crb_full_matrix, crb_out;
    int crb_target = 0;
    auto *crb = app.add_subcommand("crb", "per-target position CRB of a scenario");
    crb->add_option("scenario", crb_scenario, "scenario JSON file")->required();
    crb->add_option("--amplitude-model", crb_model, "exact|constant (default exact)");
    crb->add_option("--sweep-distance", crb_distance,
                    "from:to:count; move the designated target along its boresight ray");
    crb->add_option("--target", crb_target, "target index for --sweep-distance (default 0)");
    crb->add_option("--full-matrix", crb_full_matrix, "also write the full CRB matrix CSV here");
    crb->add_option("--out", crb_out, "output CSV path (default stdout)");

    // simulate
    std::string sim_scenario, sim_out;
    std::uint64_t sim_seed = 0;
    auto *sim = app.add_subcommand("simulate", "write one simulated received block as CSV");
    sim->add_option("scenario", sim_scenario, "scenario JSON file")->required();
    sim->add_option("--seed", sim_seed, "noise seed")->required();
    sim->add_option("--out", sim_out, "output CSV path (default stdout)");

    // localize
    std::string loc_scenario, loc_y, loc_out;
    std::uint64_t loc_seed = 0;
    bool loc_noiseless = false;
    int loc_kmax = 0;
    auto *loc = app.add_subcommand("localize", "run the cyclic ML localizer on one block");
    loc->add_option("scenario", loc_scenario, "scenario JSON file")->required();
    loc->add_option("--y", loc_y, "received block CSV (as written by 'simulate')");
    loc->add_option("--seed", loc_seed, "self-simulate with this noise seed");
    loc->add_flag("--noiseless", loc_noiseless, "self-simulate without noise");
    loc->add_option("--kmax", loc_kmax, "number of targets to search (default: scenario targets)");
    loc->add_option("--out", loc_out, "output JSON path (default stdout)");

    // sweep
    std::string sweep_scenario, sweep_out, sweep_trials_json_path;
    int sweep_threads = 0;
    auto *sweep = app.add_subcommand("sweep", "Monte Carlo MSE vs CRB across the SNR list");
    sweep->add_option("scenario", sweep_scenario, "scenario JSON file")->required();
    sweep->add_option("--out", sweep_out, "output CSV path (default stdout)");
    sweep->add_option("--trials-json", sweep_trials_json_path, "also write per-trial records here");
    sweep->add_option("--threads", sweep_threads, "worker threads (default: hardware)");

    // verify
    int verify_scenes = 20, verify_pairs = 100;
    std::uint64_t verify_seed = 20240901;
    auto *verify = app.add_subcommand("verify", "run the built-in oracle self-checks");
    verify->add_option("--scenes", verify_scenes, "randomized Fisher comparison scenes (default 20)");
    verify->add_option("--pairs", verify_pairs, "randomized derivative pairs (default 100)");
    verify->add_option("--seed", verify_seed, "randomization seed");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (crb->parsed())
            return run_crb(crb_scenario, crb_model, crb_distance, crb_target, crb_full_matrix, crb_out);
        if (sim->parsed())
            return run_simulate(sim_scenario, sim_seed, sim_out);
        if (loc->parsed())
            return run_localize(loc_scenario, loc_y,
                                loc->count("--seed") > 0 ? std::optional<std::uint64_t>(loc_seed)
                                                         : std::nullopt,
                                loc_noiseless, loc_kmax, loc_out);
        if (sweep->parsed())
            return run_sweep_cmd(sweep_scenario, sweep_out, sweep_trials_json_path, sweep_threads);
        if (verify->parsed())
            return run_verify(verify_scenes, verify_pairs, verify_seed);
    }
    catch (const nfloc::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
    catch (const nfloc::IdentifiabilityError &e)
    {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
    catch (const nfloc::NotPositiveDefiniteError &e)
    {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
    catch (const nfloc::SingularityError &e)
    {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
    catch (const nfloc::SearchError &e)
    {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}
