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

#include "nfloc/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <thread>

#include "nfloc/crb.hpp"
#include "nfloc/errors.hpp"
#include "nfloc/synth.hpp"

namespace nfloc
{

std::vector<int> match_targets(const std::vector<Position3> &estimates,
                               const std::vector<Position3> &truth)
{
    if (estimates.size() != truth.size())
        throw DimensionError("match_targets: estimate and truth counts differ");
    const int k = static_cast<int>(truth.size());
    if (k > 8)
        throw ConfigError("match_targets: exhaustive matching refused for more than 8 targets");

    std::vector<int> perm(k), best(k);
    std::iota(perm.begin(), perm.end(), 0);
    best = perm;
    double best_cost = std::numeric_limits<double>::infinity();
    do
    {
        double cost = 0.0;
        for (int i = 0; i < k; ++i)
        {
            const double d = distance(estimates[perm[i]], truth[i]);
            cost += d * d;
        }
        if (cost < best_cost)
        {
            best_cost = cost;
            best = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

namespace
{

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

TrialRecord run_trial(const Scene &scene, const NoiseCovariance &noise, const SignalBlock &x,
                      const EstimatorConfig &estimator, const SweepConfig &config, int snr_index,
                      int trial)
{
    TrialRecord rec;
    rec.snr_index = snr_index;
    rec.trial = trial;
    try
    {
        SignalBlock y;
        y.role = SignalRole::Receive;
        y.data = noise_free_received(scene, x);
        if (config.noiseless)
        {
            rec.empirical_snr_db = std::numeric_limits<double>::quiet_NaN();
        }
        else
        {
            SignalBlock z = draw_noise(noise, x.symbols(),
                                       derive_seed(config.master_seed, snr_index, trial));
            rec.empirical_snr_db = empirical_snr(scene, x, z).db;
            y.data += z.data;
        }

        EstimationResult est = aco_localize(y, x, scene.tx(), scene.rx(), scene.wavenumber(),
                                            scene.num_targets(), estimator);
        rec.converged = est.converged;

        const std::vector<Position3> truth = scene.target_positions();
        const std::vector<int> perm = match_targets(est.positions, truth);
        rec.sq_error_m2.resize(truth.size());
        for (std::size_t i = 0; i < truth.size(); ++i)
        {
            const double d = distance(est.positions[perm[i]], truth[i]);
            rec.sq_error_m2[i] = d * d;
        }
        rec.ok = est.converged;
    }
    catch (const std::exception &e)
    {
        rec.ok = false;
        rec.error = e.what();
    }
    return rec;
}

} // namespace

SweepResult run_sweep(const Scene &scene, const SignalBlock &x, const EstimatorConfig &estimator,
                      const SweepConfig &config)
{
    if (config.trials < 1)
        throw ConfigError("run_sweep: trials must be >= 1");
    if (config.snr_db.empty() && !config.noiseless)
        throw ConfigError("run_sweep: SNR list is empty");

    const int k = scene.num_targets();
    const Eigen::MatrixXcd rx_cov = sample_covariance(x);
    const int l = x.symbols();

    // Noiseless mode runs a single pseudo-SNR point with the scene noise
    // kept for CRB reporting only.
    const int snr_points = config.noiseless ? 1 : static_cast<int>(config.snr_db.size());

    SweepResult result;
    result.trials.resize(static_cast<std::size_t>(snr_points) * config.trials);

    for (int si = 0; si < snr_points; ++si)
    {
        NoiseCovariance noise = scene.noise();
        double snr_db = std::numeric_limits<double>::quiet_NaN();
        if (!config.noiseless)
        {
            snr_db = config.snr_db[si];
            noise = noise.scaled(noise_scale_for_snr(scene, x, snr_db));
        }
        const std::vector<double> crbs =
            position_crbs(compute_crb(scene.with_noise(noise), rx_cov, l).crb);

        // Trials are independent; each writes its own slot, so the
        // aggregation below is order-independent.
        std::atomic<int> next{0};
        auto worker = [&]() {
            for (;;)
            {
                const int t = next.fetch_add(1);
                if (t >= config.trials)
                    return;
                result.trials[static_cast<std::size_t>(si) * config.trials + t] =
                    run_trial(scene, noise, x, estimator, config, si, t);
            }
        };
        int n_threads = config.threads > 0 ? config.threads
                                           : static_cast<int>(std::thread::hardware_concurrency());
        n_threads = std::max(1, std::min(n_threads, config.trials));
        if (n_threads == 1)
        {
            worker();
        }
        else
        {
            std::vector<std::thread> pool;
            pool.reserve(n_threads);
            for (int i = 0; i < n_threads; ++i)
                pool.emplace_back(worker);
            for (auto &th : pool)
                th.join();
        }

        for (int target = 0; target < k; ++target)
        {
            SweepRow row;
            row.snr_db = snr_db;
            row.target = target;
            row.crb_m2 = crbs[target];
            double acc = 0.0, snr_acc = 0.0;
            int snr_count = 0;
            for (int t = 0; t < config.trials; ++t)
            {
                const TrialRecord &rec = result.trials[static_cast<std::size_t>(si) * config.trials + t];
                if (!rec.ok)
                    continue;
                ++row.trials_ok;
                acc += rec.sq_error_m2[target];
                if (std::isfinite(rec.empirical_snr_db))
                {
                    snr_acc += rec.empirical_snr_db;
                    ++snr_count;
                }
            }
            row.trials_failed = config.trials - row.trials_ok;
            row.mse_m2 = row.trials_ok > 0 ? acc / row.trials_ok
                                           : std::numeric_limits<double>::quiet_NaN();
            row.mean_empirical_snr_db =
                snr_count > 0 ? snr_acc / snr_count : std::numeric_limits<double>::quiet_NaN();
            result.rows.push_back(row);
        }
    }
    return result;
}

std::string sweep_csv(const SweepResult &result)
{
    std::string out = "snr_db,target_index,mse_m2,crb_m2,trials_ok,trials_failed\n";
    for (const auto &row : result.rows)
    {
        out += format_double(row.snr_db) + "," + std::to_string(row.target) + "," +
               format_double(row.mse_m2) + "," + format_double(row.crb_m2) + "," +
               std::to_string(row.trials_ok) + "," + std::to_string(row.trials_failed) + "\n";
    }
    return out;
}

std::string sweep_trials_json(const SweepResult &result)
{
    std::string out = "[";
    bool first_rec = true;
    for (const auto &rec : result.trials)
    {
        if (!first_rec)
            out += ",";
        first_rec = false;
        out += "\n  {\"snr_index\": " + std::to_string(rec.snr_index) +
               ", \"trial\": " + std::to_string(rec.trial) +
               ", \"ok\": " + (rec.ok ? std::string("true") : std::string("false")) +
               ", \"converged\": " + (rec.converged ? std::string("true") : std::string("false"));
        if (!rec.error.empty())
        {
            std::string escaped;
            for (char c : rec.error)
            {
                if (c == '"' || c == '\\')
                    escaped += '\\';
                escaped += c;
            }
            out += ", \"error\": \"" + escaped + "\"";
        }
        out += ", \"sq_error_m2\": [";
        for (std::size_t i = 0; i < rec.sq_error_m2.size(); ++i)
            out += (i ? "," : "") + format_double(rec.sq_error_m2[i]);
        out += "]";
        if (std::isfinite(rec.empirical_snr_db))
            out += ", \"empirical_snr_db\": " + format_double(rec.empirical_snr_db);
        out += "}";
    }
    out += "\n]\n";
    return out;
}

} // namespace nfloc
