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
#include "hsrbf/metrics.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace hsrbf;

namespace
{
    ScenarioConfig compact_scenario(std::size_t m)
    {
        ScenarioConfig sc;
        sc.num_tx_antennas = 16;
        sc.num_rx_antennas = 4;
        sc.num_rf_chains = 4;
        sc.num_mrs = m;
        sc.num_subchannels = 2;
        return sc;
    }

    ChannelRealization realization(const ScenarioConfig &sc, double pos)
    {
        const std::vector<double> p{pos};
        return generate_trajectory_channels(sc, p).front();
    }
} // namespace

TEST(Baselines, ParseAndName)
{
    for (const char *n : {"hbf_benchmark", "hbf_omp", "abf_aoa_aod", "abf_codebook"})
        EXPECT_STREQ(to_string(parse_baseline_kind(n)), n);
    EXPECT_THROW(parse_baseline_kind("mystery"), std::invalid_argument);
}

TEST(Baselines, DesignContextDefaults)
{
    const ScenarioConfig sc;
    const DesignContext ctx = DesignContext::from_scenario(sc);
    EXPECT_EQ(ctx.tx_codebook.d_size(), 64u);
    EXPECT_EQ(ctx.rx_codebook.d_size(), 32u);
    EXPECT_EQ(ctx.n_rf, 8u);
    EXPECT_NEAR(ctx.p0, 1.0, 1e-15);
    EXPECT_EQ(DesignContext::from_scenario(sc, 40).tx_codebook.d_size(), 40u);
}

TEST(Baselines, AllMeetPowerBudgetAndAreDeterministic)
{
    const ScenarioConfig sc = compact_scenario(3);
    const auto r = realization(sc, -50.0);
    const DesignContext ctx = DesignContext::from_scenario(sc);
    for (auto kind : {BaselineKind::HbfBenchmark, BaselineKind::HbfOmp, BaselineKind::AbfAoaAod, BaselineKind::AbfCodebook})
    {
        Rng a(3), b(3);
        const HybridBeamformer x = baseline_beamformer(kind, r, ctx, a);
        const HybridBeamformer y = baseline_beamformer(kind, r, ctx, b);
        EXPECT_EQ(x.f_recovered, y.f_recovered) << to_string(kind);
        EXPECT_NEAR(power(x.f_rf * x.f_bb), ctx.p0, 1e-9 * ctx.p0) << to_string(kind);
        EXPECT_EQ(x.combiners.size(), 3u);
        EXPECT_EQ(x.f_rf.cols(), 4);
        for (Eigen::Index n = 0; n < x.f_rf.cols(); ++n)
        {
            const double norm = x.f_rf.col(n).norm();
            EXPECT_TRUE(norm == 0.0 || std::abs(norm - 1.0) < 1e-12);
        }
    }
}

TEST(Baselines, AoaAodSingleLinkLineOfSight)
{
    ScenarioConfig sc = compact_scenario(1);
    sc.num_paths = 1;
    sc.num_reflected = 0;
    sc.num_scattered = 0;
    sc.num_subchannels = 1;
    const auto r = realization(sc, -80.0);
    const DesignContext ctx = DesignContext::from_scenario(sc);
    Rng rng(1);
    const HybridBeamformer bf = baseline_beamformer(BaselineKind::AbfAoaAod, r, ctx, rng);
    const CMatrix &h = r.per_mr_channels[0];
    const double got = sinr(h, bf.f_recovered, 0, bf.combiners[0], ctx.sigma_sq);
    EXPECT_NEAR(got / (ctx.p0 * h.squaredNorm() / ctx.sigma_sq), 1.0, 1e-9);
}

TEST(Baselines, CodebookBeatsBenchmarkOnAverage)
{
    const ScenarioConfig sc = compact_scenario(2);
    const DesignContext ctx = DesignContext::from_scenario(sc);
    double cb = 0.0, bench = 0.0;
    for (std::uint64_t s = 0; s < 100; ++s)
    {
        ScenarioConfig trial = sc;
        trial.rng_seed = s + 1;
        const auto r = realization(trial, -100.0 + static_cast<double>(s));
        Rng rng(s);
        cb += evaluate_links(r.per_mr_channels, baseline_beamformer(BaselineKind::AbfCodebook, r, ctx, rng), ctx.sigma_sq).sum_rate;
        bench += evaluate_links(r.per_mr_channels, baseline_beamformer(BaselineKind::HbfBenchmark, r, ctx, rng), ctx.sigma_sq).sum_rate;
    }
    EXPECT_GT(cb, bench);
}

TEST(TwoStage, MeetsBudgetAndUsesMmseCombiners)
{
    const ScenarioConfig sc = compact_scenario(3);
    const auto r = realization(sc, 10.0);
    const DesignContext ctx = DesignContext::from_scenario(sc);
    const TwoStageResult res = two_stage_beamform(r.per_mr_channels, ctx);
    const HybridBeamformer &bf = res.beamformer;
    EXPECT_NEAR(power(bf.f_recovered), ctx.p0, 1e-9 * ctx.p0);
    EXPECT_EQ(bf.f_integrated, res.mmse.f);
    for (std::size_t m = 0; m < 3; ++m)
    {
        const CVector w = optimal_combiner(r.per_mr_channels[m], bf.f_recovered, m, ctx.sigma_sq);
        EXPECT_LT((bf.combiners[m] - w).norm(), 1e-12 * (w.norm() + 1e-300));
    }
}

TEST(TwoStage, RejectsTooManyStreamsForBaselines)
{
    ScenarioConfig sc = compact_scenario(3);
    const auto r = realization(sc, 0.0);
    DesignContext ctx = DesignContext::from_scenario(sc);
    ctx.n_rf = 2;
    Rng rng(1);
    EXPECT_THROW(baseline_beamformer(BaselineKind::AbfCodebook, r, ctx, rng), std::invalid_argument);
}
