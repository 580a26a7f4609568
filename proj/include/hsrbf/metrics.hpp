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


#ifndef HSRBF_METRICS_HPP
#define HSRBF_METRICS_HPP

#include "hsrbf/beamformer.hpp"
#include "hsrbf/linalg.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hsrbf
{
    // |w^H H F_RF f_BB^m|^2 / (sum_{i != m} |w^H H F_RF f_BB^i|^2 + sigma^2 w^H w).
    // Returns 0 for an all-zero combiner.
    double sinr(const CMatrix &h_m, const CMatrix &f_rf, const CMatrix &f_bb, std::size_t m,
                const CVector &w_m, double sigma_sq);

    // Same ratio for an unconstrained precoder F (F_RF = I).
    double sinr(const CMatrix &h_m, const CMatrix &f_all, std::size_t m, const CVector &w_m, double sigma_sq);

    // SINR reached by the MMSE combiner: a^H R^-1 a, a = H_m f_m, R the
    // interference-plus-noise covariance.
    double mmse_sinr(const CMatrix &h_m, const CMatrix &f_all, std::size_t m, double sigma_sq);

    inline double rate_from_sinr(double gamma) { return std::log2(1.0 + gamma); }

    struct LinkMetrics
    {
        std::vector<double> sinr;       // linear
        std::vector<double> rate;       // bits/s/Hz
        std::vector<bool> zero_combiner;
        double sum_rate = 0.0;

        std::size_t num_zero_combiners() const;
    };

    // Per-MR SINR and rate of `bf` over `channels` (stream m -> MR m).
    LinkMetrics evaluate_links(std::span<const CMatrix> channels, const HybridBeamformer &bf, double sigma_sq);

    // (1/Q) sum_q 1{gamma_q >= gamma_th}. Throws std::invalid_argument when empty.
    double success_indicator_average(std::span<const double> sinrs, double gamma_th_db);

    // Arithmetic mean. Throws std::invalid_argument when empty.
    double system_outage(std::span<const double> per_mr_values);

    // sum_m R_m * weight_m. Throws std::invalid_argument on a length mismatch.
    double blocked_capacity(std::span<const double> rates, std::span<const double> weights);

    // One (trial, position) row. Column order is fixed by metrics_columns().
    struct MetricsRecord
    {
        std::string algorithm;
        std::string sweep_parameter;
        double sweep_value = 0.0;
        std::string series_parameter;
        double series_value = 0.0;
        std::size_t trial = 0;
        std::uint64_t seed = 0;
        double position_m = 0.0;
        std::size_t num_mrs = 0;
        double tx_power_dbm = 0.0;
        double block_probability = 0.0;
        std::size_t blocked_links = 0;
        std::string blockage_class = "-";
        std::string action = "none";
        bool total_outage = false;
        bool converged = true;
        std::size_t iterations = 0;
        double power = 0.0;             // ||F_RF F_BB||_F^2, watts
        double free_sum_rate = 0.0;     // C without blockage, bits/s/Hz
        double sum_rate = 0.0;          // sum_m R_m as received, bits/s/Hz
        double sum_rate_bps = 0.0;      // sum_rate * W
        double blocked_capacity = 0.0;  // sum_m R_m 1{gamma_m >= gamma_th}
        double effective_rate_ratio = 0.0;
        double system_outage = 0.0;     // 1 - success_average
        double success_average = 0.0;   // mean_m 1{gamma_m >= gamma_th}
        std::size_t zero_combiners = 0;
        std::vector<double> sinr_per_mr;
        std::vector<double> rate_per_mr;
        std::vector<double> outage_per_mr;
    };

    const std::vector<std::string> &metrics_columns();

    // Cells in metrics_columns() order; reals use 9 significant digits, per-MR
    // vectors are joined with ';'.
    std::vector<std::string> metrics_row(const MetricsRecord &record);

    std::string format_real(double value);

} // namespace hsrbf

#endif
