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

#ifndef HSRBF_TEST_UTIL_HPP
#define HSRBF_TEST_UTIL_HPP

#include "hsrbf/linalg.hpp"
#include "hsrbf/rng.hpp"

#include <vector>

namespace hsrbf::test
{
    inline CMatrix random_cmatrix(Eigen::Index rows, Eigen::Index cols, Rng &rng, double scale = 1.0)
    {
        CMatrix x(rows, cols);
        for (Eigen::Index c = 0; c < cols; ++c)
            for (Eigen::Index r = 0; r < rows; ++r)
                x(r, c) = cdouble(standard_normal(rng), standard_normal(rng)) * scale;
        return x;
    }

    inline CVector random_cvector(Eigen::Index n, Rng &rng, double scale = 1.0)
    {
        return random_cmatrix(n, 1, rng, scale).col(0);
    }

    inline std::vector<CMatrix> random_channels(std::size_t m, Eigen::Index n_rx, Eigen::Index n_tx, Rng &rng,
                                                double scale = 1.0)
    {
        std::vector<CMatrix> h;
        for (std::size_t i = 0; i < m; ++i)
            h.push_back(random_cmatrix(n_rx, n_tx, rng, scale));
        return h;
    }

} // namespace hsrbf::test

#endif
