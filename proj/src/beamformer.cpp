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

#include "hsrbf/beamformer.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hsrbf
{
    namespace
    {
        CMatrix complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng &rng)
        {
            CMatrix x(rows, cols);
            for (Eigen::Index c = 0; c < cols; ++c)
                for (Eigen::Index r = 0; r < rows; ++r)
                    x(r, c) = cdouble(standard_normal(rng), standard_normal(rng)) * std::sqrt(0.5);
            return x;
        }

        // Partial Fisher-Yates: `count` distinct indices out of [0, n).
        std::vector<std::size_t> sample_distinct(std::size_t n, std::size_t count, Rng &rng)
        {
            std::vector<std::size_t> idx(n);
            std::iota(idx.begin(), idx.end(), 0);
            for (std::size_t i = 0; i < count; ++i)
            {
                const std::size_t span = n - i;
                const std::size_t j = i + std::min(span - 1, static_cast<std::size_t>(uniform(rng) * static_cast<double>(span)));
                std::swap(idx[i], idx[j]);
            }
            idx.resize(count);
            return idx;
        }

        void scale_to_budget(HybridBeamformer &bf, double p0)
        {
            const double norm = (bf.f_rf * bf.f_bb).norm();
            if (norm > 0.0)
                bf.f_bb *= std::sqrt(p0) / norm;
            bf.f_recovered = bf.f_rf * bf.f_bb;
        }

        // Equal power, stream m carried by RF chain m.
        CMatrix equal_power_selection(std::size_t n_rf, std::size_t m, double p0)
        {
            CMatrix f_bb = CMatrix::Zero(static_cast<Eigen::Index>(n_rf), static_cast<Eigen::Index>(m));
            for (std::size_t i = 0; i < m; ++i)
                f_bb(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = std::sqrt(p0 / static_cast<double>(m));
            return f_bb;
        }

    } // namespace

    BaselineKind parse_baseline_kind(std::string_view name)
    {
        if (name == "hbf_benchmark")
            return BaselineKind::HbfBenchmark;
        if (name == "hbf_omp")
            return BaselineKind::HbfOmp;
        if (name == "abf_aoa_aod")
            return BaselineKind::AbfAoaAod;
        if (name == "abf_codebook")
            return BaselineKind::AbfCodebook;
        throw std::invalid_argument("Unknown baseline kind: " + std::string(name));
    }

    const char *to_string(BaselineKind kind)
    {
        switch (kind)
        {
        case BaselineKind::HbfBenchmark:
            return "hbf_benchmark";
        case BaselineKind::HbfOmp:
            return "hbf_omp";
        case BaselineKind::AbfAoaAod:
            return "abf_aoa_aod";
        case BaselineKind::AbfCodebook:
            return "abf_codebook";
        }
        return "?";
    }

    DesignContext DesignContext::from_scenario(const ScenarioConfig &scenario, std::size_t d_size)
    {
        DesignContext ctx;
        ctx.p0 = scenario.tx_power_w();
        ctx.sigma_sq = scenario.noise_power_w();
        ctx.n_rf = scenario.num_rf_chains;
        const double lambda = scenario.wavelength_m();
        const std::size_t d_tx = d_size > 0 ? d_size : 2 * scenario.num_tx_antennas;
        ctx.tx_codebook = build_codebook(scenario.num_tx_antennas, d_tx, lambda);
        ctx.rx_codebook = build_codebook(scenario.num_rx_antennas, 2 * scenario.num_rx_antennas, lambda);
        return ctx;
    }

    std::vector<CVector> mmse_combiners(std::span<const CMatrix> channels, const CMatrix &f, double sigma_sq)
    {
        std::vector<CVector> w;
        w.reserve(channels.size());
        for (std::size_t m = 0; m < channels.size(); ++m)
            w.push_back(optimal_combiner(channels[m], f, m, sigma_sq));
        return w;
    }

    TwoStageResult two_stage_beamform(std::span<const CMatrix> channels, const DesignContext &ctx,
                                      const std::vector<bool> &zeroed_chains)
    {
        TwoStageResult out;
        out.mmse = mmse_stage(channels, ctx.p0, ctx.sigma_sq, ctx.solver);
        out.omp = omp_stage(out.mmse.f, ctx.tx_codebook, ctx.n_rf, ctx.p0, ctx.normalization, zeroed_chains);

        HybridBeamformer &bf = out.beamformer;
        bf.f_integrated = out.mmse.f;
        bf.f_rf = out.omp.f_rf;
        bf.f_bb = out.omp.f_bb;
        bf.f_recovered = out.omp.f_recovered;
        bf.combiners = mmse_combiners(channels, bf.f_recovered, ctx.sigma_sq);
        return out;
    }

    HybridBeamformer baseline_beamformer(BaselineKind kind, const ChannelRealization &realization,
                                         const DesignContext &ctx, Rng &rng)
    {
        const auto &channels = realization.per_mr_channels;
        if (channels.empty())
            throw std::invalid_argument("baseline_beamformer: no channels.");
        const std::size_t m = channels.size();
        const Eigen::Index n_tx = channels.front().cols();
        const Eigen::Index n_rx = channels.front().rows();
        const Eigen::Index n_rf = static_cast<Eigen::Index>(ctx.n_rf);
        if (m > ctx.n_rf)
            throw std::invalid_argument("baseline_beamformer: more streams than RF chains.");

        HybridBeamformer bf;
        switch (kind)
        {
        case BaselineKind::HbfBenchmark:
        {
            const auto picks = sample_distinct(ctx.tx_codebook.d_size(), ctx.n_rf, rng);
            bf.f_rf = CMatrix(n_tx, n_rf);
            for (Eigen::Index n = 0; n < n_rf; ++n)
                bf.f_rf.col(n) = ctx.tx_codebook.atoms().col(static_cast<Eigen::Index>(picks[static_cast<std::size_t>(n)]));
            bf.f_bb = complex_gaussian(n_rf, static_cast<Eigen::Index>(m), rng);
            scale_to_budget(bf, ctx.p0);
            for (std::size_t i = 0; i < m; ++i)
            {
                const std::size_t j = std::min(ctx.rx_codebook.d_size() - 1,
                                               static_cast<std::size_t>(uniform(rng) * static_cast<double>(ctx.rx_codebook.d_size())));
                bf.combiners.push_back(ctx.rx_codebook.atoms().col(static_cast<Eigen::Index>(j)));
            }
            bf.f_integrated = bf.f_recovered;
            break;
        }
        case BaselineKind::HbfOmp:
        {
            // The MMSE stage's own random start, with the iterations skipped.
            const CMatrix f = initial_beamformer(channels, ctx.p0, rng());
            OmpResult omp = omp_stage(f, ctx.tx_codebook, ctx.n_rf, ctx.p0, ctx.normalization);
            bf.f_integrated = f;
            bf.f_rf = std::move(omp.f_rf);
            bf.f_bb = std::move(omp.f_bb);
            bf.f_recovered = std::move(omp.f_recovered);
            bf.combiners = mmse_combiners(channels, bf.f_recovered, ctx.sigma_sq);
            break;
        }
        case BaselineKind::AbfAoaAod:
        {
            const double lambda = ctx.tx_codebook.wavelength_m();
            bf.f_rf = CMatrix::Zero(n_tx, n_rf);
            for (std::size_t i = 0; i < m; ++i)
            {
                const auto &paths = realization.paths.at(i);
                const auto los = std::find_if(paths.begin(), paths.end(), [](const PathComponent &p)
                                              { return p.kind == PathKind::LoS; });
                if (los == paths.end())
                    throw std::invalid_argument("baseline_beamformer: abf_aoa_aod needs a LoS path per MR.");
                bf.f_rf.col(static_cast<Eigen::Index>(i)) =
                    array_response(los->aod_rad, lambda, static_cast<std::size_t>(n_tx), 0.5 * lambda);
                bf.combiners.push_back(array_response(los->aoa_rad, lambda, static_cast<std::size_t>(n_rx), 0.5 * lambda));
            }
            bf.f_bb = equal_power_selection(ctx.n_rf, m, ctx.p0);
            bf.f_recovered = bf.f_rf * bf.f_bb;
            bf.f_integrated = bf.f_recovered;
            break;
        }
        case BaselineKind::AbfCodebook:
        {
            const CMatrix &tx = ctx.tx_codebook.atoms();
            const CMatrix &rx = ctx.rx_codebook.atoms();
            bf.f_rf = CMatrix::Zero(n_tx, n_rf);
            for (std::size_t i = 0; i < m; ++i)
            {
                // |r_a^H H d_b|^2 over every (receive, transmit) atom pair
                const Eigen::MatrixXd gain = (rx.adjoint() * channels[i] * tx).cwiseAbs2();
                Eigen::Index best_rx = 0, best_tx = 0;
                gain.maxCoeff(&best_rx, &best_tx);
                bf.f_rf.col(static_cast<Eigen::Index>(i)) = tx.col(best_tx);
                bf.combiners.push_back(rx.col(best_rx));
            }
            bf.f_bb = equal_power_selection(ctx.n_rf, m, ctx.p0);
            bf.f_recovered = bf.f_rf * bf.f_bb;
            bf.f_integrated = bf.f_recovered;
            break;
        }
        }
        return bf;
    }

} // namespace hsrbf
