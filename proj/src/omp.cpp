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

#include <stdexcept>

namespace hsrbf
{
    OmpResult omp_stage(const CMatrix &f_star, Codebook codebook, std::size_t n_rf, double p0,
                        Normalization normalization, const std::vector<bool> &zeroed_chains)
    {
        if (n_rf == 0)
            throw std::invalid_argument("omp_stage: n_rf must be at least 1.");
        if (static_cast<std::size_t>(f_star.rows()) != codebook.n_elements())
            throw std::invalid_argument("omp_stage: beamformer rows do not match the codebook.");
        if (!zeroed_chains.empty() && zeroed_chains.size() != n_rf)
            throw std::invalid_argument("omp_stage: zeroed_chains needs one entry per RF chain.");

        auto zeroed = [&](std::size_t n) { return !zeroed_chains.empty() && zeroed_chains[n]; };

        std::size_t active = 0;
        for (std::size_t n = 0; n < n_rf; ++n)
            active += zeroed(n) ? 0 : 1;
        if (codebook.num_enabled() < active)
            throw CodebookExhausted("omp_stage: fewer enabled atoms than active RF chains.");

        const Eigen::Index n_tx = f_star.rows();
        OmpResult out;
        out.f_rf = CMatrix::Zero(n_tx, static_cast<Eigen::Index>(n_rf));
        out.f_bb = CMatrix::Zero(static_cast<Eigen::Index>(n_rf), f_star.cols());
        out.selected.assign(n_rf, kNoAtom);

        CMatrix residual = f_star;
        out.residual_history.push_back(residual.norm());

        for (std::size_t n = 0; n < n_rf; ++n)
        {
            if (zeroed(n))
                continue;
            const std::size_t j = codebook.most_correlated(residual);
            out.f_rf.col(static_cast<Eigen::Index>(n)) = codebook.atoms().col(static_cast<Eigen::Index>(j));
            out.selected[n] = j;
            codebook.disable(j);

            out.f_bb = pinv(out.f_rf) * f_star;
            residual = f_star - out.f_rf * out.f_bb;
            out.residual_history.push_back(residual.norm());
        }

        const double norm = (out.f_rf * out.f_bb).norm();
        if (norm > 0.0)
        {
            const double denom = normalization == Normalization::Frobenius ? norm : norm * norm;
            out.f_bb *= std::sqrt(p0) / denom;
        }
        out.f_recovered = out.f_rf * out.f_bb;
        return out;
    }

} // namespace hsrbf
