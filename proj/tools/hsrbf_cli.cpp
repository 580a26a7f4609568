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


// Command-line front end: one subcommand per figure family plus a generic `run`.

#include "hsrbf/codebook.hpp"
#include "hsrbf/harness.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace
{
    using namespace hsrbf;

    struct Options
    {
        std::string config;
        std::optional<std::uint64_t> seed;
        std::optional<std::size_t> trials;
        std::string algo;
        std::string out;
        std::string format;
        std::string sweep;
        std::string series;
        std::optional<double> block_probability;
        std::optional<std::size_t> threads;
        bool dump_channels = false;
        bool dump_codebook = false;
        bool literal_normalization = false;
    };

    struct Defaults
    {
        SweepAxis sweep;
        SweepAxis series;
        std::vector<std::string> algorithms;
        std::size_t trials = 500;
        bool stale_csi = false;
    };

    const std::vector<std::string> kAllSchemes = {"hbf_proposed", "hbf_omp", "abf_aoa_aod", "abf_codebook", "hbf_benchmark"};

    std::vector<std::string> split(const std::string &s, char sep)
    {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, sep))
            if (!item.empty())
                parts.push_back(item);
        return parts;
    }

    // "name=v1,v2,..." -> axis
    SweepAxis parse_axis(const std::string &text)
    {
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("Axis must look like name=v1,v2: " + text);
        SweepAxis axis;
        axis.parameter = text.substr(0, eq);
        axis.values.clear();
        for (const auto &v : split(text.substr(eq + 1), ','))
        {
            std::size_t used = 0;
            axis.values.push_back(std::stod(v, &used));
            if (used != v.size())
                throw std::invalid_argument("Bad axis value: " + v);
        }
        return axis;
    }

    std::string with_suffix(const std::string &path, const std::string &suffix)
    {
        const auto slash = path.find_last_of('/');
        const auto dot = path.find_last_of('.');
        if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
            return path + suffix;
        return path.substr(0, dot) + suffix + path.substr(dot);
    }

    std::string stem_of(const std::string &path)
    {
        if (path.empty())
            return "hsrbf";
        const auto slash = path.find_last_of('/');
        const auto dot = path.find_last_of('.');
        if (dot == std::string::npos || (slash != std::string::npos && dot < slash))
            return path;
        return path.substr(0, dot);
    }

    std::ofstream open_out(const std::string &path)
    {
        std::ofstream os(path);
        if (!os)
            throw std::runtime_error("Cannot write output file: " + path);
        return os;
    }

    ExperimentSpec build_spec(const Options &o, const Defaults &d, std::vector<Algorithm> &algorithms)
    {
        ExperimentSpec spec = o.config.empty() ? ExperimentSpec{} : load_spec(o.config);
        const bool from_file = !o.config.empty();
        if (!from_file)
            spec.trials = d.trials;
        if (spec.sweep.parameter == "none")
            spec.sweep = d.sweep;
        if (spec.series.parameter == "none")
            spec.series = d.series;
        spec.stale_csi = spec.stale_csi || d.stale_csi;

        if (o.seed)
            spec.scenario.rng_seed = *o.seed;
        if (o.trials)
            spec.trials = *o.trials;
        if (!o.sweep.empty())
            spec.sweep = parse_axis(o.sweep);
        if (!o.series.empty())
            spec.series = parse_axis(o.series);
        if (o.block_probability)
            spec.block_probability = *o.block_probability;
        if (o.threads)
            spec.threads = *o.threads;
        if (!o.format.empty())
            spec.output_format = o.format;
        if (!o.out.empty())
            spec.output_path = o.out;
        if (o.literal_normalization)
            spec.normalization = Normalization::LiteralSquared;

        std::vector<std::string> names;
        if (!o.algo.empty())
            names = split(o.algo, ',');
        else if (from_file || d.algorithms.empty())
            names = {to_string(spec.algorithm)};
        else
            names = d.algorithms;
        algorithms.clear();
        for (const auto &n : names)
            algorithms.push_back(parse_algorithm(n));
        spec.algorithm = algorithms.front();
        spec.validate();
        return spec;
    }

    void dump_codebook(const ExperimentSpec &spec)
    {
        const std::size_t d = spec.codebook_size > 0 ? spec.codebook_size : 2 * spec.scenario.num_tx_antennas;
        const Codebook cb = build_codebook(spec.scenario.num_tx_antennas, d, spec.scenario.wavelength_m());
        auto os = open_out(stem_of(spec.output_path) + ".codebook.txt");
        write_codebook(os, cb);
    }

    int run_experiment(const Options &o, const Defaults &d)
    {
        std::vector<Algorithm> algorithms;
        ExperimentSpec spec = build_spec(o, d, algorithms);
        if (o.dump_codebook)
            dump_codebook(spec);

        SweepResult all;
        for (Algorithm a : algorithms)
        {
            spec.algorithm = a;
            // Channels are identical across algorithms, so dump them once.
            SweepResult r = run_sweep(spec, o.dump_channels && all.channel_dump.empty());
            all.records.insert(all.records.end(), r.records.begin(), r.records.end());
            all.summary.insert(all.summary.end(), r.summary.begin(), r.summary.end());
            all.channel_dump += r.channel_dump;
        }

        if (!spec.output_path.empty())
        {
            if (spec.output_format == "json")
            {
                auto os = open_out(spec.output_path);
                write_result_json(os, spec, all);
            }
            else
            {
                auto os = open_out(spec.output_path);
                write_records_csv(os, all.records);
                auto ss = open_out(with_suffix(spec.output_path, ".summary"));
                write_summary_csv(ss, all.summary);
            }
        }
        if (o.dump_channels)
        {
            auto os = open_out(stem_of(spec.output_path) + ".channels.txt");
            os << all.channel_dump;
        }
        write_summary_csv(std::cout, all.summary);
        return 0;
    }

    int run_converge(const Options &o, const Defaults &d)
    {
        std::vector<Algorithm> algorithms;
        ExperimentSpec spec = build_spec(o, d, algorithms);
        if (spec.algorithm != Algorithm::HbfProposed)
            throw std::invalid_argument("converge traces the hbf_proposed MMSE stage only.");
        if (o.dump_codebook)
            dump_codebook(spec);
        const auto trace = convergence_trace(spec);

        std::vector<std::vector<std::string>> rows;
        for (const auto &r : trace)
            rows.push_back(trace_row(spec, r));
        if (!spec.output_path.empty())
        {
            auto os = open_out(spec.output_path);
            if (spec.output_format == "json")
                write_trace_json(os, spec, trace);
            else
                write_csv(os, trace_columns(), rows);
        }
        else
            write_csv(std::cout, trace_columns(), rows);
        return 0;
    }

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"hsrbf: hybrid beamforming simulator for mmWave railway downlinks"};
    app.require_subcommand(1);

    Options o;
    auto add_common = [&o](CLI::App *cmd)
    {
        cmd->add_option("--config", o.config, "JSON experiment spec");
        cmd->add_option("--seed", o.seed, "Base RNG seed");
        cmd->add_option("--trials", o.trials, "Trials per sweep point");
        cmd->add_option("--algo", o.algo, "Algorithm or comma-separated list");
        cmd->add_option("--out", o.out, "Output table path");
        cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--sweep", o.sweep, "Sweep axis, name=v1,v2,...");
        cmd->add_option("--series", o.series, "Outer axis, name=v1,v2,...");
        cmd->add_option("--block-prob", o.block_probability, "Link blockage probability");
        cmd->add_option("--threads", o.threads, "Worker threads");
        cmd->add_flag("--dump-channels", o.dump_channels, "Write channel realizations to <out>.channels.txt");
        cmd->add_flag("--dump-codebook", o.dump_codebook, "Write the transmit codebook to <out>.codebook.txt");
        cmd->add_flag("--literal-normalization", o.literal_normalization, "Divide F_BB by the squared norm");
    };

    auto axis = [](const char *name, std::vector<double> values) { return SweepAxis{name, std::move(values)}; };
    const std::vector<double> pb = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};

    struct Command
    {
        CLI::App *app;
        Defaults defaults;
        bool converge;
    };
    std::vector<Command> commands = {
        {app.add_subcommand("converge", "MMSE-stage iteration trace per P_0"),
         {axis("tx_power_dbm", {20, 30, 40}), {}, {"hbf_proposed"}, 1, false}, true},
        {app.add_subcommand("rate-vs-mrs", "Sum rate vs number of MRs, all schemes"),
         {axis("num_mrs", {1, 2, 4, 6, 8}), {}, kAllSchemes, 500, false}, false},
        {app.add_subcommand("rate-vs-velocity", "Sum rate vs train velocity with one-slot-old CSI"),
         {axis("train_velocity_kmh", {100, 200, 300, 360, 400, 500}), {}, kAllSchemes, 500, true}, false},
        {app.add_subcommand("rate-vs-blockage", "Received rate vs blockage probability per M"),
         {axis("block_probability", pb), axis("num_mrs", {1, 2, 4, 6}), {"anti_blockage"}, 500, false}, false},
        {app.add_subcommand("ratio-vs-blockage", "Effective rate ratio vs blockage probability"),
         {axis("block_probability", pb), axis("tx_power_dbm", {20, 30}), {"hbf_proposed", "anti_blockage"}, 500, false}, false},
        {app.add_subcommand("outage-vs-blockage", "Outage probability vs blockage probability per P_0"),
         {axis("block_probability", pb), axis("tx_power_dbm", {20, 30}), {"anti_blockage"}, 500, false}, false},
        {app.add_subcommand("run", "Run the experiment described by --config"), {}, false},
    };
    for (auto &c : commands)
        add_common(c.app);
    commands.back().app->get_option("--config")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        return app.exit(e);
    }

    try
    {
        for (const auto &c : commands)
            if (c.app->parsed())
                return c.converge ? run_converge(o, c.defaults) : run_experiment(o, c.defaults);
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
