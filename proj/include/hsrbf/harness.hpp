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


#ifndef HSRBF_HARNESS_HPP
#define HSRBF_HARNESS_HPP

#include "hsrbf/antiblockage.hpp"
#include "hsrbf/beamformer.hpp"
#include "hsrbf/metrics.hpp"
#include "hsrbf/scenario.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace hsrbf
{
    enum class Algorithm
    {
        HbfProposed,
        HbfBenchmark,
        HbfOmp,
        AbfAoaAod,
        AbfCodebook,
        AntiBlockage
    };

    Algorithm parse_algorithm(std::string_view name);
    const char *to_string(Algorithm algorithm);
    const std::vector<Algorithm> &all_algorithms();

    // A named scalar parameter and the values it takes. "none" leaves the spec untouched.
    struct SweepAxis
    {
        std::string parameter = "none";
        std::vector<double> values = {0.0};
    };

    // Parameters accepted by apply_parameter.
    const std::vector<std::string> &sweepable_parameters();

    struct ExperimentSpec
    {
        ScenarioConfig scenario;
        Algorithm algorithm = Algorithm::HbfProposed;
        SweepAxis sweep;
        SweepAxis series;            // outer axis; trials are paired across its values
        std::size_t trials = 500;    // Q per sweep point
        double block_probability = 0.0;
        double gamma_th_db = 10.0;
        double capacity_threshold_fraction = 0.5; // C_th = fraction * blockage-free C
        bool stale_csi = false;      // design on slot t, evaluate on slot t+1
        double slot_duration_s = 1e-3;
        std::size_t codebook_size = 0; // 0 -> 2 N_tx
        AntiBlockageOptions anti_blockage;
        MmseSolverConfig solver;
        Normalization normalization = Normalization::Frobenius;
        std::string output_path;
        std::string output_format = "csv";
        std::size_t threads = 1;

        // Throws std::invalid_argument.
        void validate() const;
    };

    // Sets one sweepable parameter. Throws std::invalid_argument for unknown names.
    void apply_parameter(ExperimentSpec &spec, std::string_view name, double value);

    ExperimentSpec spec_from_json(std::string_view text);
    ExperimentSpec load_spec(const std::string &path);
    std::string spec_to_json(const ExperimentSpec &spec);

    // Sub-seed of one trial; algorithms and series values share it so comparisons are paired.
    std::uint64_t trial_seed(std::uint64_t rng_seed, double sweep_value, std::size_t trial_index);

    struct TrialChannels
    {
        ScenarioConfig scenario;                 // scenario with the per-trial stochastic seed
        std::vector<ChannelRealization> slots;   // one slot, or two with stale CSI
    };

    // Train position uniform along the cell (whole train inside it), channels at that
    // position and, with stale CSI, one slot later.
    TrialChannels draw_trial_channels(const ExperimentSpec &spec, std::uint64_t seed);

    // `spec` with the sweep value applied is simulated for one trial. When `channel_dump`
    // is non-null the evaluated channel realization is appended to it as text.
    MetricsRecord run_point(const ExperimentSpec &spec, double sweep_value, std::size_t trial_index,
                            std::string *channel_dump = nullptr);

    struct SummaryRow
    {
        std::string algorithm;
        std::string series_parameter;
        double series_value = 0.0;
        std::string sweep_parameter;
        double sweep_value = 0.0;
        std::size_t trials = 0;
        std::vector<double> mean; // summary_metrics() order
        std::vector<double> se;   // standard error of the mean
    };

    const std::vector<std::string> &summary_metrics();
    std::vector<std::string> summary_columns();
    std::vector<std::string> summary_row(const SummaryRow &row);

    // Groups consecutive records by (algorithm, series value, sweep value).
    std::vector<SummaryRow> summarize(const std::vector<MetricsRecord> &records);

    struct SweepResult
    {
        std::vector<MetricsRecord> records; // series-major, then sweep value, then trial
        std::vector<SummaryRow> summary;
        std::string channel_dump;
    };

    // Runs trials on spec.threads workers; records land in a fixed order regardless.
    SweepResult run_sweep(const ExperimentSpec &spec, bool dump_channels = false);

    struct TraceRow
    {
        double sweep_value = 0.0;
        std::size_t trial = 0;
        std::uint64_t seed = 0;
        MmseTraceRow row;
        bool converged = false;
    };

    // MMSE-stage iteration history for every sweep value and trial. Trials share channel
    // draws across sweep values.
    std::vector<TraceRow> convergence_trace(const ExperimentSpec &spec);

    std::vector<std::string> trace_columns();
    std::vector<std::string> trace_row(const ExperimentSpec &spec, const TraceRow &row);

    void write_csv(std::ostream &os, const std::vector<std::string> &header,
                   const std::vector<std::vector<std::string>> &rows);
    void write_records_csv(std::ostream &os, const std::vector<MetricsRecord> &records);
    void write_summary_csv(std::ostream &os, const std::vector<SummaryRow> &summary);
    void write_result_json(std::ostream &os, const ExperimentSpec &spec, const SweepResult &result);
    void write_trace_json(std::ostream &os, const ExperimentSpec &spec, const std::vector<TraceRow> &trace);

} // namespace hsrbf

#endif
