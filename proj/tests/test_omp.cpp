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

#include "hsrbf/omp.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

using namespace hsrbf;
using hsrbf::test::random_cmatrix;

TEST(Omp, SingleAtomRecovery)
{
    const Codebook cb = build_codebook(8, 16, 0.01);
    const CMatrix f_star = cb.atoms().col(6) * cdouble(0.0, 2.0);
    const OmpResult r = omp_stage(f_star, cb, 1, 4.0);
    EXPECT_EQ(r.selected[0], 6u);
    EXPECT_LT((r.f_recovered - f_star).norm(), 1e-12);
    EXPECT_NEAR(power(r.f_recovered), 4.0, 1e-12);
}

TEST(Omp, PlantedSupportRecoveredOnOrthonormalCodebook)
{
    Rng rng(21);
    const Codebook cb = build_codebook(16, 16, 0.01);
    for (int trial = 0; trial < 20; ++trial)
    {
        std::vector<std::size_t> idx(16);
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng);
        idx.resize(4);
        CMatrix d(16, 4);
        for (int k = 0; k < 4; ++k)
            d.col(k) = cb.atoms().col(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(k)]));
        const CMatrix f_star = d * random_cmatrix(4, 3, rng);
        const double p0 = power(f_star);
        const OmpResult r = omp_stage(f_star, cb, 4, p0);
        std::vector<std::size_t> got = r.selected, want = idx;
        std::sort(got.begin(), got.end());
        std::sort(want.begin(), want.end());
        EXPECT_EQ(got, want);
        EXPECT_LT((r.f_recovered - f_star).norm(), 1e-9 * f_star.norm());
        EXPECT_LT(r.residual_history.back(), 1e-9 * f_star.norm());
    }
}

TEST(Omp, SeparatedAtomsRecoveredOnOversampledCodebook)
{
    Rng rng(24);
    const Codebook cb = build_codebook(16, 32, 0.01);
    for (int trial = 0; trial < 20; ++trial)
    {
        // Every fourth atom from a random offset: pairwise orthogonal on this grid.
        const std::size_t offset = static_cast<std::size_t>(uniform(rng) * 4.0);
        std::vector<std::size_t> idx;
        for (std::size_t k = 0; k < 3; ++k)
            idx.push_back(offset + 4 * (2 * k + static_cast<std::size_t>(uniform(rng) * 2.0)));
        CMatrix d(16, 3);
        for (int k = 0; k < 3; ++k)
            d.col(k) = cb.atoms().col(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(k)]));
        const CMatrix f_star = d * random_cmatrix(3, 2, rng);
        const OmpResult r = omp_stage(f_star, cb, 3, power(f_star));
        std::vector<std::size_t> got = r.selected;
        std::sort(got.begin(), got.end());
        EXPECT_EQ(got, idx);
        EXPECT_LT((r.f_recovered - f_star).norm(), 1e-9 * f_star.norm());
    }
}

TEST(Omp, ResidualNeverGrows)
{
    Rng rng(22);
    const Codebook cb = build_codebook(12, 24, 0.01);
    for (int trial = 0; trial < 50; ++trial)
    {
        const CMatrix f_star = random_cmatrix(12, 4, rng);
        const OmpResult r = omp_stage(f_star, cb, 6, 1.0);
        ASSERT_EQ(r.residual_history.size(), 7u);
        EXPECT_NEAR(r.residual_history.front(), f_star.norm(), 1e-12);
        for (std::size_t t = 1; t < r.residual_history.size(); ++t)
            EXPECT_LE(r.residual_history[t], r.residual_history[t - 1] * (1.0 + 1e-12));
        EXPECT_NEAR(power(r.f_recovered), 1.0, 1e-9);
        std::vector<std::size_t> sel = r.selected;
        std::sort(sel.begin(), sel.end());
        EXPECT_EQ(std::adjacent_find(sel.begin(), sel.end()), sel.end());
    }
}

TEST(Omp, ZeroedChainsStayEmpty)
{
    Rng rng(23);
    const Codebook cb = build_codebook(8, 16, 0.01);
    const CMatrix f_star = random_cmatrix(8, 3, rng);
    const OmpResult r = omp_stage(f_star, cb, 4, 2.0, Normalization::Frobenius, {false, true, false, true});
    EXPECT_EQ(r.selected[1], kNoAtom);
    EXPECT_EQ(r.selected[3], kNoAtom);
    EXPECT_NE(r.selected[0], kNoAtom);
    EXPECT_EQ(r.f_rf.col(1).norm(), 0.0);
    EXPECT_EQ(r.f_rf.col(3).norm(), 0.0);
    EXPECT_LT(r.f_bb.row(1).norm(), 1e-12);
    EXPECT_LT(r.f_bb.row(3).norm(), 1e-12);
    EXPECT_EQ(r.residual_history.size(), 3u);
    EXPECT_NEAR(power(r.f_recovered), 2.0, 1e-9);
}

TEST(Omp, LiteralSquaredNormalization)
{
    const Codebook cb = build_codebook(4, 8, 0.01);
    const CMatrix f_star = cb.atoms().col(2) * 3.0;
    const OmpResult r = omp_stage(f_star, cb, 1, 4.0, Normalization::LiteralSquared);
    // sqrt(P0) / ||F||^2 = 2 / 9 on a norm-3 matrix
    EXPECT_NEAR(r.f_recovered.norm(), 3.0 * 2.0 / 9.0, 1e-12);
}

TEST(Omp, ZeroTargetLeavesZeroPrecoder)
{
    const Codebook cb = build_codebook(4, 8, 0.01);
    const OmpResult r = omp_stage(CMatrix::Zero(4, 2), cb, 2, 1.0);
    EXPECT_EQ(r.f_recovered.norm(), 0.0);
}

TEST(Omp, InputValidation)
{
    Codebook cb = build_codebook(4, 4, 0.01);
    const CMatrix f = CMatrix::Ones(4, 1);
    EXPECT_THROW(omp_stage(f, cb, 0, 1.0), std::invalid_argument);
    EXPECT_THROW(omp_stage(CMatrix::Ones(5, 1), cb, 1, 1.0), std::invalid_argument);
    EXPECT_THROW(omp_stage(f, cb, 2, 1.0, Normalization::Frobenius, {true}), std::invalid_argument);
    cb.disable(0);
    cb.disable(1);
    cb.disable(2);
    EXPECT_THROW(omp_stage(f, cb, 2, 1.0), CodebookExhausted);
    EXPECT_NO_THROW(omp_stage(f, cb, 2, 1.0, Normalization::Frobenius, {false, true}));
}

TEST(Omp, CallerCodebookUntouched)
{
    const Codebook cb = build_codebook(4, 8, 0.01);
    omp_stage(CMatrix::Ones(4, 2), cb, 3, 1.0);
    EXPECT_EQ(cb.num_enabled(), 8u);
}
