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

#ifndef HSRBF_BEAMFORMER_HPP
#define HSRBF_BEAMFORMER_HPP

#include "hsrbf/channel.hpp"
#include "hsrbf/codebook.hpp"
#include "hsrbf/mmse.hpp"
#include "hsrbf/omp.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hsrbf
{
    struct HybridBeamformer
    {
        CMatrix f_integrated;           // F from the unconstrained stage (N_tx x M)
        CMatrix f_rf;                   // N_tx x N_rf
        CMatrix f_bb;                   // N_rf x M
        CMatrix f_recovered;            // F_RF F_BB, the precoder actually applied
        std::vector<CVector> combiners; // w_m, length N_rx each

        std::size_t num_streams() const { return static_cast<std::size_t>(f_recovered.cols()); }
    };

    enum class BaselineKind
    {
        HbfBenchmark,
        HbfOmp,
        AbfAoaAod,
        AbfCodebook
    };

    BaselineKind parse_baseline_kind(std::string_view name);
    const char *to_string(BaselineKind kind);

    // Everything a beamformer design needs besides the channels.
    struct DesignContext
    {
        double p0 = 1.0;
        double sigma_sq = 1.0;
        std::size_t n_rf = 1;
        Codebook tx_codebook;
        Codebook rx_codebook;
        MmseSolverConfig solver;
        Normalization normalization = Normalization::Frobenius;

        // Codebooks of size 2 N at the carrier wavelength, solver defaults.
        static DesignContext from_scenario(const ScenarioConfig &scenario, std::size_t d_size = 0);
    };

    // MMSE receive combiners for a given applied precoder.
    std::vector<CVector> mmse_combiners(std::span<const CMatrix> channels, const CMatrix &f, double sigma_sq);

    struct TwoStageResult
    {
        HybridBeamformer beamformer;
        MmseResult mmse;
        OmpResult omp;
    };

    // MMSE stage then OMP stage. Combiners are re-derived against F_recov so that the
    // MRs are matched to the precoder actually transmitted.
    TwoStageResult two_stage_beamform(std::span<const CMatrix> channels, const DesignContext &ctx,
                                      const std::vector<bool> &zeroed_chains = {});

    // Comparison schemes. `realization` supplies the LoS angles for AbfAoaAod;
    // `rng` drives the random draws of HbfBenchmark and HbfOmp.
    HybridBeamformer baseline_beamformer(BaselineKind kind, const ChannelRealization &realization,
                                         const DesignContext &ctx, Rng &rng);

} // namespace hsrbf

#endif
