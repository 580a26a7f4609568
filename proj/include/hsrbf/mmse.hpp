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

#ifndef HSRBF_MMSE_HPP
#define HSRBF_MMSE_HPP

#include "hsrbf/linalg.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace hsrbf
{
    // ---------- Per-MR building blocks ----------
    //
    // Notation: H_m is N_rx x N_tx, F = [f_1 ... f_M] is N_tx x M, stream m is
    // intended for MR m, sigma_sq is the receiver noise power.

    // MMSE receive combiner w_m = (sum_i H_m f_i f_i^H H_m^H + sigma^2 I)^-1 H_m f_m.
    // For N_rx = 1, or a single stream, this equals
    // H_m f_m / (sum_i ||H_m f_i||^2 + sigma^2), see scalar_normalized_combiner.
    CVector optimal_combiner(const CMatrix &h_m, const CMatrix &f_all, std::size_t m, double sigma_sq);

    // H_m f_m / (sum_i ||H_m f_i||^2 + sigma^2): the scalar-denominator form, which
    // minimizes the MSE only when N_rx = 1 or M = 1.
    CVector scalar_normalized_combiner(const CMatrix &h_m, const CMatrix &f_all, std::size_t m, double sigma_sq);

    // |1 - w^H H f_m|^2 + sigma^2 w^H w + sum_{i != m} |w^H H f_i|^2.
    double mse(const CMatrix &h_m, const CMatrix &f_all, const CVector &w_m, std::size_t m, double sigma_sq);

    // MSE attained by optimal_combiner, evaluated as 1 / (1 + a^H R^-1 a) with
    // a = H_m f_m and R the interference-plus-noise covariance. For N_rx = 1 it is
    // (sum_{i != m} |H f_i|^2 + sigma^2) / (sum_i |H f_i|^2 + sigma^2).
    double optimal_mse(const CMatrix &h_m, const CMatrix &f_all, std::size_t m, double sigma_sq);

    // f_m = (sum_i H_i^H w_i alpha_i w_i^H H_i + lambda I)^+ H_m^H w_m alpha_m.
    CVector update_tx_beamformer(std::span<const CMatrix> channels, std::span<const CVector> combiners,
                                 std::span<const double> alpha, double lambda, std::size_t m);

    // max(0, lambda - xi * (Tr(F^H F) - P_0)).
    double update_multiplier(double lambda, const CMatrix &f_all, double p0, double xi);

    // ---------- Iterative stage ----------

    enum class StopRule
    {
        SumMseChange,   // |sum_m e_m(t) - sum_m e_m(t-1)| < epsilon
        ObjectiveChange // |obj(t) - obj(t-1)| < epsilon, obj = sum_m -log2 e_m
    };

    enum class MultiplierRule
    {
        Bisection,  // lambda solved each iteration so that Tr(F^H F) <= P_0 with slackness
        Subgradient // one projected step of update_multiplier, then scale F back onto the budget
    };

    struct MmseSolverConfig
    {
        double epsilon = 1e-3;
        std::size_t max_iterations = 200;
        StopRule stop_rule = StopRule::SumMseChange;
        MultiplierRule multiplier_rule = MultiplierRule::Bisection;
        double step_size = 0.0; // xi for the subgradient rule; 0 selects 0.1 / P_0
        std::uint64_t init_seed = 0;
    };

    struct MmseTraceRow
    {
        std::size_t iteration = 0;
        double sum_mse = 0.0;
        double objective = 0.0; // sum_m -log2(e_m)
        double power = 0.0;     // Tr(F^H F)
        double lambda = 0.0;
    };

    struct MmseResult
    {
        CMatrix f;                      // N_tx x M
        std::vector<CVector> combiners; // optimal for f
        std::vector<double> alpha;
        std::vector<double> mse;        // e_m for (f, combiners)
        double lambda = 0.0;
        std::size_t iterations = 0;
        bool converged = false;
        std::vector<MmseTraceRow> history; // row 0 is the initial point
    };

    // Alternates combiner, MSE weight and transmit-beamformer updates until the stop
    // rule fires. Exceeding max_iterations is reported through `converged`, never thrown.
    MmseResult mmse_stage(std::span<const CMatrix> channels, double p0, double sigma_sq,
                          const MmseSolverConfig &config = {});

    // Random matched-filter start H_m^H u_m (u_m unit, random), scaled to Tr(F^H F) = P_0.
    CMatrix initial_beamformer(std::span<const CMatrix> channels, double p0, std::uint64_t seed);

    double sum_rate_objective(std::span<const double> mse);

} // namespace hsrbf

#endif
