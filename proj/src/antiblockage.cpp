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


#include "hsrbf/antiblockage.hpp"

#include <algorithm>
#include <stdexcept>

namespace hsrbf
{
    const char *to_string(BlockageClass c)
    {
        switch (c)
        {
        case BlockageClass::I:
            return "I";
        case BlockageClass::II:
            return "II";
        case BlockageClass::III:
            return "III";
        }
        return "?";
    }

    const char *to_string(RecoveryAction a)
    {
        switch (a)
        {
        case RecoveryAction::None:
            return "none";
        case RecoveryAction::OmpRedo:
            return "omp_redo";
        case RecoveryAction::FullRedo:
            return "full_redo";
        case RecoveryAction::Remeasure:
            return "remeasure";
        }
        return "?";
    }

    std::size_t BlockageDecision::num_blocked() const
    {
        return static_cast<std::size_t>(std::count(per_link_blocked.begin(), per_link_blocked.end(), true));
    }

    std::vector<bool> detect_link_state(std::span<const double> sinrs_db, double gamma_th_db)
    {
        std::vector<bool> flags(sinrs_db.size());
        for (std::size_t m = 0; m < sinrs_db.size(); ++m)
            flags[m] = sinrs_db[m] < gamma_th_db;
        return flags;
    }

    BlockageClass classify_blockage(const std::vector<bool> &flags, double capacity, double c_th)
    {
        if (std::none_of(flags.begin(), flags.end(), [](bool f) { return f; }))
            return BlockageClass::I;
        return capacity >= c_th ? BlockageClass::II : BlockageClass::III;
    }

    BlockageDecision assess_blockage(std::span<const CMatrix> channels, const HybridBeamformer &prior,
                                     std::span<const double> reference_sinrs, double sigma_sq,
                                     double gamma_th_db, double capacity_threshold)
    {
        if (!reference_sinrs.empty() && reference_sinrs.size() != channels.size())
            throw std::invalid_argument("assess_blockage: one reference SINR per link is required.");
        const LinkMetrics now = evaluate_links(channels, prior, sigma_sq);

        std::vector<double> sinrs_db(now.sinr.size());
        std::transform(now.sinr.begin(), now.sinr.end(), sinrs_db.begin(), linear_to_db);

        BlockageDecision d;
        d.per_link_blocked = detect_link_state(sinrs_db, gamma_th_db);
        if (!reference_sinrs.empty())
            for (std::size_t m = 0; m < d.per_link_blocked.size(); ++m)
                d.per_link_blocked[m] = d.per_link_blocked[m] && now.sinr[m] < reference_sinrs[m];
        d.capacity = now.sum_rate;
        d.gamma_threshold_db = gamma_th_db;
        d.capacity_threshold = capacity_threshold;
        d.blockage_class = classify_blockage(d.per_link_blocked, d.capacity, capacity_threshold);
        return d;
    }

    AntiBlockageOutcome anti_blockage_rebeamform(const BlockageDecision &decision, std::span<const CMatrix> channels,
                                                 const HybridBeamformer &prior, const DesignContext &ctx,
                                                 const AntiBlockageOptions &options)
    {
        const std::size_t m_count = channels.size();
        if (decision.per_link_blocked.size() != m_count)
            throw std::invalid_argument("anti_blockage_rebeamform: one flag per link is required.");
        if (m_count > ctx.n_rf)
            throw std::invalid_argument("anti_blockage_rebeamform: more links than RF chains.");

        AntiBlockageOutcome out;
        if (decision.blockage_class == BlockageClass::I)
        {
            out.beamformer = prior;
            return out;
        }

        std::vector<bool> zeroed(ctx.n_rf, false);
        for (std::size_t n = 0; n < m_count; ++n)
            zeroed[n] = decision.per_link_blocked[n];

        std::vector<CMatrix> cleared(channels.begin(), channels.end());
        for (std::size_t m = 0; m < m_count; ++m)
            if (decision.per_link_blocked[m])
                cleared[m].setZero();
        const bool no_signal = std::all_of(cleared.begin(), cleared.end(), [](const CMatrix &h)
                                           { return h.squaredNorm() == 0.0; });

        if (decision.num_blocked() == m_count || no_signal)
        {
            HybridBeamformer &bf = out.beamformer;
            const Eigen::Index n_tx = prior.f_rf.rows();
            const Eigen::Index n_rf = static_cast<Eigen::Index>(ctx.n_rf);
            const Eigen::Index ms = static_cast<Eigen::Index>(m_count);
            bf.f_integrated = CMatrix::Zero(n_tx, ms);
            bf.f_rf = CMatrix::Zero(n_tx, n_rf);
            bf.f_bb = CMatrix::Zero(n_rf, ms);
            bf.f_recovered = CMatrix::Zero(n_tx, ms);
            for (const auto &h : channels)
                bf.combiners.push_back(CVector::Zero(h.rows()));
            out.action = RecoveryAction::Remeasure;
            out.total_outage = true;
            return out;
        }

        if (decision.blockage_class == BlockageClass::II)
        {
            CMatrix target = prior.f_integrated;
            if (options.drop_blocked_streams)
                for (std::size_t m = 0; m < m_count; ++m)
                    if (decision.per_link_blocked[m])
                        target.col(static_cast<Eigen::Index>(m)).setZero();
            const OmpResult omp = omp_stage(target, ctx.tx_codebook, ctx.n_rf, ctx.p0, ctx.normalization, zeroed);
            HybridBeamformer &bf = out.beamformer;
            bf.f_integrated = target;
            bf.f_rf = omp.f_rf;
            bf.f_bb = omp.f_bb;
            bf.f_recovered = omp.f_recovered;
            bf.combiners = mmse_combiners(channels, bf.f_recovered, ctx.sigma_sq);
            out.action = RecoveryAction::OmpRedo;
            return out;
        }

        out.redo = two_stage_beamform(cleared, ctx, zeroed);
        out.beamformer = out.redo.beamformer;

        const LinkMetrics after = evaluate_links(channels, out.beamformer, ctx.sigma_sq);
        out.action = after.sum_rate < decision.capacity_threshold ? RecoveryAction::Remeasure : RecoveryAction::FullRedo;
        return out;
    }

} // namespace hsrbf
