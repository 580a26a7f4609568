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


#ifndef HSRBF_ANTIBLOCKAGE_HPP
#define HSRBF_ANTIBLOCKAGE_HPP

#include "hsrbf/beamformer.hpp"
#include "hsrbf/metrics.hpp"

#include <span>
#include <vector>

namespace hsrbf
{
    enum class BlockageClass
    {
        I,   // no link below threshold
        II,  // some link below threshold, capacity still acceptable
        III  // some link below threshold and capacity below C_th
    };

    enum class RecoveryAction
    {
        None,
        OmpRedo,
        FullRedo,
        Remeasure
    };

    const char *to_string(BlockageClass c);
    const char *to_string(RecoveryAction a);

    struct BlockageDecision
    {
        std::vector<bool> per_link_blocked;
        double capacity = 0.0;           // sum_m R_m under the current beamformer, bits/s/Hz
        BlockageClass blockage_class = BlockageClass::I;
        double gamma_threshold_db = 10.0;
        double capacity_threshold = 0.0;

        std::size_t num_blocked() const;
    };

    // flag_m = gamma_m < gamma_th, both in dB; gamma_m == gamma_th is healthy.
    std::vector<bool> detect_link_state(std::span<const double> sinrs_db, double gamma_th_db);

    // I without flags, otherwise II when capacity >= c_th and III below it.
    BlockageClass classify_blockage(const std::vector<bool> &flags, double capacity, double c_th);

    // Link and capacity state of `prior` on the current channels. A link is flagged when
    // it is below gamma_th and worse than `reference_sinrs` (the prior's SINRs before
    // blockage), so links that were already weak on a clear channel do not trigger a
    // redesign. Pass an empty reference to flag on the threshold alone.
    BlockageDecision assess_blockage(std::span<const CMatrix> channels, const HybridBeamformer &prior,
                                     std::span<const double> reference_sinrs, double sigma_sq,
                                     double gamma_th_db, double capacity_threshold);

    struct AntiBlockageOutcome
    {
        HybridBeamformer beamformer;
        RecoveryAction action = RecoveryAction::None;
        bool total_outage = false;
        TwoStageResult redo; // filled when the two-stage design was re-run
    };

    struct AntiBlockageOptions
    {
        // Class II also clears the F* columns of flagged links, so no power is spent on them.
        bool drop_blocked_streams = false;
    };

    // Class I: prior unchanged. Class II: OMP on the prior's integrated F with the RF
    // chains of flagged links zeroed (chain n serves MR n). Class III: flagged channels
    // zeroed, MMSE and OMP re-run with the same chain zeroing; action becomes Remeasure
    // when the redesigned capacity is still below the threshold. All links flagged, or no
    // energy left on any channel once flagged links are cleared, gives an all-zero
    // beamformer with total_outage set.
    AntiBlockageOutcome anti_blockage_rebeamform(const BlockageDecision &decision, std::span<const CMatrix> channels,
                                                 const HybridBeamformer &prior, const DesignContext &ctx,
                                                 const AntiBlockageOptions &options = {});

} // namespace hsrbf

#endif
