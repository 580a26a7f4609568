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

#ifndef HSRBF_OMP_HPP
#define HSRBF_OMP_HPP

#include "hsrbf/codebook.hpp"
#include "hsrbf/linalg.hpp"

#include <limits>
#include <vector>

namespace hsrbf
{
    // How F_BB is rescaled after the last atom is chosen.
    enum class Normalization
    {
        Frobenius,      // F_BB *= sqrt(P_0) / ||F_RF F_BB||_F, giving ||F_RF F_BB||_F^2 = P_0
        LiteralSquared  // F_BB *= sqrt(P_0) / ||F_RF F_BB||_F^2
    };

    inline constexpr std::size_t kNoAtom = std::numeric_limits<std::size_t>::max();

    struct OmpResult
    {
        CMatrix f_rf;                         // N_tx x n_rf, atom or zero columns
        CMatrix f_bb;                         // n_rf x N_s
        CMatrix f_recovered;                  // f_rf * f_bb
        std::vector<std::size_t> selected;    // atom per RF chain, kNoAtom for zeroed chains
        std::vector<double> residual_history; // ||F_res||_F, entry 0 is ||F*||_F
    };

    // Greedy factorization F* ~ F_RF F_BB over the enabled atoms of `codebook`.
    // Each step picks argmax_j ||d_j^H F_res||_2, solves F_BB = F_RF^+ F* and sets
    // F_res = F* - F_RF F_BB; chosen atoms are disabled in the working copy.
    // Chains flagged in `zeroed_chains` keep an all-zero RF column and are skipped.
    OmpResult omp_stage(const CMatrix &f_star, Codebook codebook, std::size_t n_rf, double p0,
                        Normalization normalization = Normalization::Frobenius,
                        const std::vector<bool> &zeroed_chains = {});

} // namespace hsrbf

#endif
