// SPDX-License-Identifier: Apache-2.0
//
// hsrbf - hybrid beamforming link-level simulator for mmWave railway downlinks
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


#include "hsrbf/harness.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace hsrbf
{
    using nlohmann::json;

    namespace
    {
        // Stream identifiers for derive_seed.
        constexpr std::uint64_t kPositionStream = 1;
        constexpr std::uint64_t kChannelStream = 2;
        constexpr std::uint64_t kInitStream = 3;
        constexpr std::uint64_t kBaselineStream = 4;
        constexpr std::uint64_t kBlockageStream = 5;

        std::size_t as_count(std::string_view name, double value)
        {
            if (!(value >= 0.0) || value != std::floor(value) || value > 1e9)
                throw std::invalid_argument(std::string(name) + " must be a non-negative integer.");
            return static_cast<std::size_t>(value);
        }

        const char *stop_rule_name(StopRule r) { return r == StopRule::SumMseChange ? "sum_mse" : "objective"; }
        const char *multiplier_rule_name(MultiplierRule r) { return r == MultiplierRule::Bisection ? "bisection" : "subgradient"; }
        const char *normalization_name(Normalization n) { return n == Normalization::Frobenius ? "frobenius" : "literal_squared"; }

        StopRule parse_stop_rule(const std::string &s)
        {
            if (s == "sum_mse")
                return StopRule::SumMseChange;
            if (s == "objective")
                return StopRule::ObjectiveChange;
            throw std::invalid_argument("Unknown stop_rule: " + s);
        }

        MultiplierRule parse_multiplier_rule(const std::string &s)
        {
            if (s == "bisection")
                return MultiplierRule::Bisection;
            if (s == "subgradient")
                return MultiplierRule::Subgradient;
            throw std::invalid_argument("Unknown multiplier_rule: " + s);
        }

        Normalization parse_normalization(const std::string &s)
        {
            if (s == "frobenius")
                return Normalization::Frobenius;
            if (s == "literal_squared")
                return Normalization::LiteralSquared;
            throw std::invalid_argument("Unknown normalization: " + s);
        }

        void reject_unknown_keys(const json &j, std::initializer_list<const char *> known, const char *where)
        {
            if (!j.is_object())
                throw std::invalid_argument(std::string(where) + " must be an object.");
            for (auto it = j.begin(); it != j.end(); ++it)
                if (std::none_of(known.begin(), known.end(), [&](const char *k) { return it.key() == k; }))
                    throw std::invalid_argument(std::string("Unknown key '") + it.key() + "' in " + where + ".");
        }

        template <typename T>
        void read(const json &j, const char *key, T &target)
        {
            if (j.contains(key))
                target = j.at(key).get<T>();
        }

        SweepAxis read_axis(const json &j, const char *where)
        {
            reject_unknown_keys(j, {"parameter", "values"}, where);
            SweepAxis axis;
            read(j, "parameter", axis.parameter);
            read(j, "values", axis.values);
            return axis;
        }

        json axis_json(const SweepAxis &a) { return json{{"parameter", a.parameter}, {"values", a.values}}; }

        MetricsRecord blank_record(const ExperimentSpec &spec)
        {
            MetricsRecord r;
            r.algorithm = to_string(spec.algorithm);
            r.sweep_parameter = spec.sweep.parameter;
            r.series_parameter = spec.series.parameter;
            r.num_mrs = spec.scenario.num_mrs;
            r.tx_power_dbm = spec.scenario.tx_power_dbm;
            r.block_probability = spec.block_probability;
            return r;
        }

        DesignContext design_context(const ExperimentSpec &spec, const ScenarioConfig &scenario, std::uint64_t seed)
        {
            DesignContext ctx = DesignContext::from_scenario(scenario, spec.codebook_size);
            ctx.solver = spec.solver;
            ctx.solver.init_seed = derive_seed(seed, {kInitStream});
            ctx.normalization = spec.normalization;
            return ctx;
        }

        // Runs fn(0..n-1) on `threads` workers; rethrows the lowest-index failure.
        void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)> &fn)
        {
            std::vector<std::exception_ptr> errors(n);
            std::atomic<std::size_t> next{0};
            auto worker = [&]()
            {
                for (std::size_t i = next++; i < n; i = next++)
                {
                    try
                    {
                        fn(i);
                    }
                    catch (...)
                    {
                        errors[i] = std::current_exception();
                    }
                }
            };
            const std::size_t count = std::max<std::size_t>(1, std::min(threads, n));
            if (count == 1)
                worker();
            else
            {
                std::vector<std::thread> pool;
                for (std::size_t t = 0; t < count; ++t)
                    pool.emplace_back(worker);
                for (auto &t : pool)
                    t.join();
            }
            for (auto &e : errors)
                if (e)
                    std::rethrow_exception(e);
        }

        json cell_json(const std::string &column, const std::string &cell)
        {
            if (column == "sinr_per_mr" || column == "rate_per_mr" || column == "outage_per_mr")
            {
                json arr = json::array();
                std::stringstream ss(cell);
                std::string item;
                while (std::getline(ss, item, ';'))
                    arr.push_back(std::strtod(item.c_str(), nullptr));
                return arr;
            }
            char *end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (!cell.empty() && end == cell.c_str() + cell.size() && std::isfinite(v))
                return v;
            return cell;
        }

        json table_json(const std::vector<std::string> &header, const std::vector<std::vector<std::string>> &rows)
        {
            json out = json::array();
            for (const auto &row : rows)
            {
                json obj = json::object();
                for (std::size_t c = 0; c < header.size(); ++c)
                    obj[header[c]] = cell_json(header[c], row[c]);
                out.push_back(std::move(obj));
            }
            return out;
        }

        std::string csv_escape(const std::string &s)
        {
            if (s.find_first_of(",\"\n") == std::string::npos)
                return s;
            std::string q = "\"";
            for (char c : s)
            {
                if (c == '"')
                    q += '"';
                q += c;
            }
            return q + "\"";
        }

    } // namespace

    Algorithm parse_algorithm(std::string_view name)
    {
        for (Algorithm a : all_algorithms())
            if (name == to_string(a))
                return a;
        throw std::invalid_argument("Unknown algorithm: " + std::string(name));
    }

    const char *to_string(Algorithm algorithm)
    {
        switch (algorithm)
        {
        case Algorithm::HbfProposed:
            return "hbf_proposed";
        case Algorithm::HbfBenchmark:
            return "hbf_benchmark";
        case Algorithm::HbfOmp:
            return "hbf_omp";
        case Algorithm::AbfAoaAod:
            return "abf_aoa_aod";
        case Algorithm::AbfCodebook:
            return "abf_codebook";
        case Algorithm::AntiBlockage:
            return "anti_blockage";
        }
        return "?";
    }

    const std::vector<Algorithm> &all_algorithms()
    {
        static const std::vector<Algorithm> list = {Algorithm::HbfProposed, Algorithm::HbfBenchmark, Algorithm::HbfOmp,
                                                    Algorithm::AbfAoaAod, Algorithm::AbfCodebook, Algorithm::AntiBlockage};
        return list;
    }

    const std::vector<std::string> &sweepable_parameters()
    {
        static const std::vector<std::string> names = {
            "none", "num_mrs", "num_tx_antennas", "num_rx_antennas", "num_rf_chains", "tx_power_dbm",
            "train_velocity_kmh", "block_probability", "gamma_th_db", "capacity_threshold_fraction",
            "mr_spacing_m", "cell_radius_m"};
        return names;
    }

    void apply_parameter(ExperimentSpec &spec, std::string_view name, double value)
    {
        ScenarioConfig &s = spec.scenario;
        if (name == "none")
            return;
        if (name == "num_mrs")
            s.num_mrs = as_count(name, value);
        else if (name == "num_tx_antennas")
            s.num_tx_antennas = as_count(name, value);
        else if (name == "num_rx_antennas")
            s.num_rx_antennas = as_count(name, value);
        else if (name == "num_rf_chains")
            s.num_rf_chains = as_count(name, value);
        else if (name == "tx_power_dbm")
            s.tx_power_dbm = value;
        else if (name == "train_velocity_kmh")
            s.train_velocity_kmh = value;
        else if (name == "block_probability")
            spec.block_probability = value;
        else if (name == "gamma_th_db")
            spec.gamma_th_db = value;
        else if (name == "capacity_threshold_fraction")
            spec.capacity_threshold_fraction = value;
        else if (name == "mr_spacing_m")
            s.mr_spacing_m = value;
        else if (name == "cell_radius_m")
            s.cell_radius_m = value;
        else
            throw std::invalid_argument("Unknown sweep parameter: " + std::string(name));
    }

    void ExperimentSpec::validate() const
    {
        if (trials == 0)
            throw std::invalid_argument("trials must be at least 1.");
        for (const SweepAxis *axis : {&sweep, &series})
        {
            if (axis->values.empty())
                throw std::invalid_argument("Sweep values must not be empty.");
            const auto &names = sweepable_parameters();
            if (std::find(names.begin(), names.end(), axis->parameter) == names.end())
                throw std::invalid_argument("Unknown sweep parameter: " + axis->parameter);
            for (double v : axis->values)
            {
                ExperimentSpec probe = *this;
                apply_parameter(probe, axis->parameter, v);
                probe.scenario.validate();
                if (!(probe.block_probability >= 0.0 && probe.block_probability <= 1.0))
                    throw std::invalid_argument("block_probability must lie in [0, 1].");
                if (!(probe.capacity_threshold_fraction >= 0.0))
                    throw std::invalid_argument("capacity_threshold_fraction must be non-negative.");
            }
        }
        if (!(slot_duration_s > 0.0))
            throw std::invalid_argument("slot_duration_s must be strictly positive.");
        if (!(solver.epsilon > 0.0))
            throw std::invalid_argument("solver epsilon must be strictly positive.");
        if (output_format != "csv" && output_format != "json")
            throw std::invalid_argument("output format must be csv or json.");
        if (threads == 0)
            throw std::invalid_argument("threads must be at least 1.");
    }

    ExperimentSpec spec_from_json(std::string_view text)
    {
        json j;
        try
        {
            j = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            throw std::invalid_argument(std::string("Malformed config: ") + e.what());
        }

        ExperimentSpec spec;
        try
        {
            reject_unknown_keys(j, {"scenario", "algorithm", "sweep", "series", "trials", "block_probability",
                                    "gamma_th_db", "capacity_threshold_fraction", "stale_csi", "slot_duration_s",
                                    "codebook_size", "solver", "normalization", "output", "threads",
                                    "class2_drop_streams"},
                                "config");
            if (j.contains("scenario"))
            {
                const json &s = j.at("scenario");
                reject_unknown_keys(s, {"carrier_frequency_hz", "bandwidth_hz", "noise_density_dbm_per_hz", "bs_height_m",
                                        "mr_height_m", "cell_radius_m", "track_offset_m", "num_tx_antennas",
                                        "num_rx_antennas", "num_rf_chains", "num_mrs", "num_subchannels", "num_paths",
                                        "num_reflected", "num_scattered", "tx_power_dbm", "train_velocity_kmh",
                                        "mr_spacing_m", "rng_seed"},
                                    "scenario");
                ScenarioConfig &c = spec.scenario;
                read(s, "carrier_frequency_hz", c.carrier_frequency_hz);
                read(s, "bandwidth_hz", c.bandwidth_hz);
                read(s, "noise_density_dbm_per_hz", c.noise_density_dbm_per_hz);
                read(s, "bs_height_m", c.bs_height_m);
                read(s, "mr_height_m", c.mr_height_m);
                read(s, "cell_radius_m", c.cell_radius_m);
                read(s, "track_offset_m", c.track_offset_m);
                read(s, "num_tx_antennas", c.num_tx_antennas);
                read(s, "num_rx_antennas", c.num_rx_antennas);
                read(s, "num_rf_chains", c.num_rf_chains);
                read(s, "num_mrs", c.num_mrs);
                read(s, "num_subchannels", c.num_subchannels);
                read(s, "num_paths", c.num_paths);
                read(s, "num_reflected", c.num_reflected);
                read(s, "num_scattered", c.num_scattered);
                read(s, "tx_power_dbm", c.tx_power_dbm);
                read(s, "train_velocity_kmh", c.train_velocity_kmh);
                read(s, "mr_spacing_m", c.mr_spacing_m);
                read(s, "rng_seed", c.rng_seed);
            }
            if (j.contains("algorithm"))
                spec.algorithm = parse_algorithm(j.at("algorithm").get<std::string>());
            if (j.contains("sweep"))
                spec.sweep = read_axis(j.at("sweep"), "sweep");
            if (j.contains("series"))
                spec.series = read_axis(j.at("series"), "series");
            read(j, "trials", spec.trials);
            read(j, "block_probability", spec.block_probability);
            read(j, "gamma_th_db", spec.gamma_th_db);
            read(j, "capacity_threshold_fraction", spec.capacity_threshold_fraction);
            read(j, "stale_csi", spec.stale_csi);
            read(j, "slot_duration_s", spec.slot_duration_s);
            read(j, "codebook_size", spec.codebook_size);
            read(j, "threads", spec.threads);
            read(j, "class2_drop_streams", spec.anti_blockage.drop_blocked_streams);
            if (j.contains("solver"))
            {
                const json &s = j.at("solver");
                reject_unknown_keys(s, {"epsilon", "max_iterations", "stop_rule", "multiplier_rule", "step_size"}, "solver");
                read(s, "epsilon", spec.solver.epsilon);
                read(s, "max_iterations", spec.solver.max_iterations);
                read(s, "step_size", spec.solver.step_size);
                if (s.contains("stop_rule"))
                    spec.solver.stop_rule = parse_stop_rule(s.at("stop_rule").get<std::string>());
                if (s.contains("multiplier_rule"))
                    spec.solver.multiplier_rule = parse_multiplier_rule(s.at("multiplier_rule").get<std::string>());
            }
            if (j.contains("normalization"))
                spec.normalization = parse_normalization(j.at("normalization").get<std::string>());
            if (j.contains("output"))
            {
                const json &o = j.at("output");
                reject_unknown_keys(o, {"path", "format"}, "output");
                read(o, "path", spec.output_path);
                read(o, "format", spec.output_format);
            }
        }
        catch (const json::exception &e)
        {
            throw std::invalid_argument(std::string("Bad config value: ") + e.what());
        }
        spec.validate();
        return spec;
    }

    ExperimentSpec load_spec(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw std::runtime_error("Cannot open config file: " + path);
        std::stringstream buf;
        buf << in.rdbuf();
        return spec_from_json(buf.str());
    }

    std::string spec_to_json(const ExperimentSpec &spec)
    {
        const ScenarioConfig &c = spec.scenario;
        json j;
        j["scenario"] = {{"carrier_frequency_hz", c.carrier_frequency_hz},
                         {"bandwidth_hz", c.bandwidth_hz},
                         {"noise_density_dbm_per_hz", c.noise_density_dbm_per_hz},
                         {"bs_height_m", c.bs_height_m},
                         {"mr_height_m", c.mr_height_m},
                         {"cell_radius_m", c.cell_radius_m},
                         {"track_offset_m", c.track_offset_m},
                         {"num_tx_antennas", c.num_tx_antennas},
                         {"num_rx_antennas", c.num_rx_antennas},
                         {"num_rf_chains", c.num_rf_chains},
                         {"num_mrs", c.num_mrs},
                         {"num_subchannels", c.num_subchannels},
                         {"num_paths", c.num_paths},
                         {"num_reflected", c.num_reflected},
                         {"num_scattered", c.num_scattered},
                         {"tx_power_dbm", c.tx_power_dbm},
                         {"train_velocity_kmh", c.train_velocity_kmh},
                         {"mr_spacing_m", c.mr_spacing_m},
                         {"rng_seed", c.rng_seed}};
        j["algorithm"] = to_string(spec.algorithm);
        j["sweep"] = axis_json(spec.sweep);
        j["series"] = axis_json(spec.series);
        j["trials"] = spec.trials;
        j["block_probability"] = spec.block_probability;
        j["gamma_th_db"] = spec.gamma_th_db;
        j["capacity_threshold_fraction"] = spec.capacity_threshold_fraction;
        j["stale_csi"] = spec.stale_csi;
        j["slot_duration_s"] = spec.slot_duration_s;
        j["codebook_size"] = spec.codebook_size;
        j["solver"] = {{"epsilon", spec.solver.epsilon},
                       {"max_iterations", spec.solver.max_iterations},
                       {"stop_rule", stop_rule_name(spec.solver.stop_rule)},
                       {"multiplier_rule", multiplier_rule_name(spec.solver.multiplier_rule)},
                       {"step_size", spec.solver.step_size}};
        j["normalization"] = normalization_name(spec.normalization);
        j["output"] = {{"path", spec.output_path}, {"format", spec.output_format}};
        j["threads"] = spec.threads;
        j["class2_drop_streams"] = spec.anti_blockage.drop_blocked_streams;
        return j.dump(2);
    }

    std::uint64_t trial_seed(std::uint64_t rng_seed, double sweep_value, std::size_t trial_index)
    {
        return derive_seed(rng_seed, {seed_id(sweep_value), static_cast<std::uint64_t>(trial_index)});
    }

    TrialChannels draw_trial_channels(const ExperimentSpec &spec, std::uint64_t seed)
    {
        TrialChannels out;
        out.scenario = spec.scenario;
        out.scenario.rng_seed = derive_seed(seed, {kChannelStream});
        const ScenarioConfig &s = out.scenario;

        const double step = spec.stale_csi ? s.velocity_mps() * spec.slot_duration_s : 0.0;
        const double lo = -s.cell_radius_m;
        const double hi = std::max(lo, s.cell_radius_m - static_cast<double>(s.num_mrs - 1) * s.mr_spacing_m - step);
        Rng rng(derive_seed(seed, {kPositionStream}));
        const double x = uniform(rng, lo, hi);

        std::vector<double> positions = {x};
        if (spec.stale_csi)
            positions.push_back(x + step);
        out.slots = generate_trajectory_channels(s, positions);
        return out;
    }

    MetricsRecord run_point(const ExperimentSpec &base, double sweep_value, std::size_t trial_index,
                            std::string *channel_dump)
    {
        ExperimentSpec spec = base;
        apply_parameter(spec, spec.sweep.parameter, sweep_value);

        const std::uint64_t seed = trial_seed(base.scenario.rng_seed, sweep_value, trial_index);
        const TrialChannels tc = draw_trial_channels(spec, seed);
        const ChannelRealization &design = tc.slots.front();
        const ChannelRealization &current = tc.slots.back();
        const DesignContext ctx = design_context(spec, tc.scenario, seed);
        const std::size_t m_count = tc.scenario.num_mrs;

        MetricsRecord rec = blank_record(spec);
        rec.sweep_value = sweep_value;
        rec.trial = trial_index;
        rec.seed = seed;
        rec.position_m = current.train_position_m;

        HybridBeamformer bf;
        if (spec.algorithm == Algorithm::HbfProposed || spec.algorithm == Algorithm::AntiBlockage)
        {
            TwoStageResult ts = two_stage_beamform(design.per_mr_channels, ctx);
            rec.iterations = ts.mmse.iterations;
            rec.converged = ts.mmse.converged;
            bf = std::move(ts.beamformer);
        }
        else
        {
            const BaselineKind kind = parse_baseline_kind(to_string(spec.algorithm));
            Rng rng(derive_seed(seed, {kBaselineStream}));
            bf = baseline_beamformer(kind, design, ctx, rng);
        }

        const LinkMetrics clear = evaluate_links(current.per_mr_channels, bf, ctx.sigma_sq);

        std::vector<bool> flags(m_count, false);
        if (spec.block_probability > 0.0)
            flags = BlockageProcess(spec.block_probability, derive_seed(seed, {kBlockageStream})).draw(m_count);
        rec.blocked_links = static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true));
        const ChannelRealization blocked = apply_blockage(current, flags);

        HybridBeamformer applied = bf;
        if (spec.algorithm == Algorithm::AntiBlockage)
        {
            const BlockageDecision decision =
                assess_blockage(blocked.per_mr_channels, bf, clear.sinr, ctx.sigma_sq, spec.gamma_th_db,
                                spec.capacity_threshold_fraction * clear.sum_rate);
            AntiBlockageOutcome outcome = anti_blockage_rebeamform(decision, blocked.per_mr_channels, bf, ctx, spec.anti_blockage);
            rec.blockage_class = to_string(decision.blockage_class);
            rec.action = to_string(outcome.action);
            rec.total_outage = outcome.total_outage;
            applied = std::move(outcome.beamformer);
        }

        const LinkMetrics got = evaluate_links(blocked.per_mr_channels, applied, ctx.sigma_sq);
        std::vector<double> success(m_count);
        for (std::size_t m = 0; m < m_count; ++m)
        {
            success[m] = success_indicator_average(std::span<const double>(&got.sinr[m], 1), spec.gamma_th_db);
            rec.outage_per_mr.push_back(1.0 - success[m]);
        }

        rec.power = power(applied.f_recovered);
        rec.free_sum_rate = clear.sum_rate;
        rec.sum_rate = got.sum_rate;
        rec.sum_rate_bps = got.sum_rate * tc.scenario.bandwidth_hz;
        rec.blocked_capacity = blocked_capacity(got.rate, success);
        // A redesign on the surviving links can beat the clear-channel local optimum; the
        // ratio is capped at 1 and the raw capacities stay in their own columns.
        rec.effective_rate_ratio = clear.sum_rate > 0.0 ? std::min(1.0, rec.blocked_capacity / clear.sum_rate) : 0.0;
        rec.success_average = system_outage(success);
        rec.system_outage = 1.0 - rec.success_average;
        rec.zero_combiners = got.num_zero_combiners();
        rec.sinr_per_mr = got.sinr;
        rec.rate_per_mr = got.rate;

        if (channel_dump)
        {
            std::ostringstream os;
            os << "# trial=" << trial_index << " sweep_value=" << format_real(sweep_value) << '\n';
            write_channel_record(os, blocked);
            *channel_dump += os.str();
        }
        return rec;
    }

    const std::vector<std::string> &summary_metrics()
    {
        static const std::vector<std::string> names = {
            "free_sum_rate", "sum_rate", "sum_rate_bps", "blocked_capacity", "effective_rate_ratio",
            "system_outage", "success_average", "power_w", "iterations", "converged", "total_outage",
            "blocked_links"};
        return names;
    }

    std::vector<std::string> summary_columns()
    {
        std::vector<std::string> cols = {"algorithm", "series_parameter", "series_value",
                                         "sweep_parameter", "sweep_value", "trials"};
        for (const auto &m : summary_metrics())
        {
            cols.push_back(m + "_mean");
            cols.push_back(m + "_se");
        }
        return cols;
    }

    std::vector<std::string> summary_row(const SummaryRow &row)
    {
        std::vector<std::string> cells = {row.algorithm, row.series_parameter, format_real(row.series_value),
                                          row.sweep_parameter, format_real(row.sweep_value), std::to_string(row.trials)};
        for (std::size_t i = 0; i < row.mean.size(); ++i)
        {
            cells.push_back(format_real(row.mean[i]));
            cells.push_back(format_real(row.se[i]));
        }
        return cells;
    }

    std::vector<SummaryRow> summarize(const std::vector<MetricsRecord> &records)
    {
        auto values = [](const MetricsRecord &r)
        {
            return std::vector<double>{r.free_sum_rate, r.sum_rate, r.sum_rate_bps, r.blocked_capacity,
                                       r.effective_rate_ratio, r.system_outage, r.success_average, r.power,
                                       static_cast<double>(r.iterations), r.converged ? 1.0 : 0.0,
                                       r.total_outage ? 1.0 : 0.0, static_cast<double>(r.blocked_links)};
        };

        std::vector<SummaryRow> out;
        std::size_t begin = 0;
        while (begin < records.size())
        {
            const MetricsRecord &head = records[begin];
            std::size_t end = begin;
            while (end < records.size() && records[end].algorithm == head.algorithm &&
                   records[end].series_value == head.series_value && records[end].sweep_value == head.sweep_value)
                ++end;

            SummaryRow row;
            row.algorithm = head.algorithm;
            row.series_parameter = head.series_parameter;
            row.series_value = head.series_value;
            row.sweep_parameter = head.sweep_parameter;
            row.sweep_value = head.sweep_value;
            row.trials = end - begin;

            const std::size_t k = summary_metrics().size();
            std::vector<double> sum(k, 0.0), sq(k, 0.0);
            for (std::size_t i = begin; i < end; ++i)
            {
                const auto v = values(records[i]);
                for (std::size_t c = 0; c < k; ++c)
                    sum[c] += v[c];
            }
            const double n = static_cast<double>(row.trials);
            row.mean.resize(k);
            for (std::size_t c = 0; c < k; ++c)
                row.mean[c] = sum[c] / n;
            for (std::size_t i = begin; i < end; ++i)
            {
                const auto v = values(records[i]);
                for (std::size_t c = 0; c < k; ++c)
                    sq[c] += (v[c] - row.mean[c]) * (v[c] - row.mean[c]);
            }
            row.se.resize(k);
            for (std::size_t c = 0; c < k; ++c)
                row.se[c] = row.trials > 1 ? std::sqrt(sq[c] / (n - 1.0) / n) : 0.0;

            out.push_back(std::move(row));
            begin = end;
        }
        return out;
    }

    SweepResult run_sweep(const ExperimentSpec &spec, bool dump_channels)
    {
        spec.validate();
        struct Job
        {
            double series_value;
            double sweep_value;
            std::size_t trial;
        };
        std::vector<Job> jobs;
        for (double s : spec.series.values)
            for (double v : spec.sweep.values)
                for (std::size_t t = 0; t < spec.trials; ++t)
                    jobs.push_back({s, v, t});

        SweepResult result;
        result.records.resize(jobs.size());
        std::vector<std::string> dumps(dump_channels ? jobs.size() : 0);
        parallel_for(jobs.size(), spec.threads, [&](std::size_t i)
                     {
                         ExperimentSpec local = spec;
                         apply_parameter(local, spec.series.parameter, jobs[i].series_value);
                         MetricsRecord rec = run_point(local, jobs[i].sweep_value, jobs[i].trial,
                                                       dump_channels ? &dumps[i] : nullptr);
                         rec.series_value = jobs[i].series_value;
                         result.records[i] = std::move(rec); });
        for (const auto &d : dumps)
            result.channel_dump += d;
        result.summary = summarize(result.records);
        return result;
    }

    std::vector<TraceRow> convergence_trace(const ExperimentSpec &spec)
    {
        spec.validate();
        std::vector<TraceRow> rows;
        for (double v : spec.sweep.values)
        {
            ExperimentSpec local = spec;
            apply_parameter(local, spec.sweep.parameter, v);
            for (std::size_t t = 0; t < spec.trials; ++t)
            {
                const std::uint64_t seed = trial_seed(spec.scenario.rng_seed, 0.0, t);
                const TrialChannels tc = draw_trial_channels(local, seed);
                const DesignContext ctx = design_context(local, tc.scenario, seed);
                const MmseResult res = mmse_stage(tc.slots.front().per_mr_channels, ctx.p0, ctx.sigma_sq, ctx.solver);
                for (const auto &h : res.history)
                    rows.push_back({v, t, seed, h, res.converged});
            }
        }
        return rows;
    }

    std::vector<std::string> trace_columns()
    {
        return {"sweep_parameter", "sweep_value", "trial", "seed", "iteration", "sum_mse",
                "objective", "power_w", "lambda", "converged"};
    }

    std::vector<std::string> trace_row(const ExperimentSpec &spec, const TraceRow &r)
    {
        return {spec.sweep.parameter, format_real(r.sweep_value), std::to_string(r.trial), std::to_string(r.seed),
                std::to_string(r.row.iteration), format_real(r.row.sum_mse), format_real(r.row.objective),
                format_real(r.row.power), format_real(r.row.lambda), r.converged ? "1" : "0"};
    }

    void write_csv(std::ostream &os, const std::vector<std::string> &header,
                   const std::vector<std::vector<std::string>> &rows)
    {
        auto line = [&](const std::vector<std::string> &cells)
        {
            for (std::size_t i = 0; i < cells.size(); ++i)
                os << (i ? "," : "") << csv_escape(cells[i]);
            os << '\n';
        };
        line(header);
        for (const auto &r : rows)
            line(r);
    }

    void write_records_csv(std::ostream &os, const std::vector<MetricsRecord> &records)
    {
        std::vector<std::vector<std::string>> rows;
        rows.reserve(records.size());
        for (const auto &r : records)
            rows.push_back(metrics_row(r));
        write_csv(os, metrics_columns(), rows);
    }

    void write_summary_csv(std::ostream &os, const std::vector<SummaryRow> &summary)
    {
        std::vector<std::vector<std::string>> rows;
        for (const auto &r : summary)
            rows.push_back(summary_row(r));
        write_csv(os, summary_columns(), rows);
    }

    void write_result_json(std::ostream &os, const ExperimentSpec &spec, const SweepResult &result)
    {
        std::vector<std::vector<std::string>> records, summary;
        for (const auto &r : result.records)
            records.push_back(metrics_row(r));
        for (const auto &r : result.summary)
            summary.push_back(summary_row(r));
        json j;
        j["spec"] = json::parse(spec_to_json(spec));
        j["records"] = table_json(metrics_columns(), records);
        j["summary"] = table_json(summary_columns(), summary);
        os << j.dump(2) << '\n';
    }

    void write_trace_json(std::ostream &os, const ExperimentSpec &spec, const std::vector<TraceRow> &trace)
    {
        std::vector<std::vector<std::string>> rows;
        for (const auto &r : trace)
            rows.push_back(trace_row(spec, r));
        json j;
        j["spec"] = json::parse(spec_to_json(spec));
        j["trace"] = table_json(trace_columns(), rows);
        os << j.dump(2) << '\n';
    }

} // namespace hsrbf
