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

#include "hsrbf/linalg.hpp"

#include <Eigen/SVD>

namespace hsrbf
{
    CMatrix pinv(const CMatrix &a, double tol)
    {
        if (a.size() == 0)
            return CMatrix::Zero(a.cols(), a.rows());

        Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const RVector &s = svd.singularValues();
        const double cutoff = s.size() > 0 ? tol * s(0) : 0.0;

        RVector s_inv = RVector::Zero(s.size());
        for (Eigen::Index i = 0; i < s.size(); ++i)
            if (s(i) > cutoff && s(i) > 0.0)
                s_inv(i) = 1.0 / s(i);

        return svd.matrixV() * s_inv.asDiagonal() * svd.matrixU().adjoint();
    }

    std::size_t numerical_rank(const CMatrix &a, double tol)
    {
        if (a.size() == 0)
            return 0;
        Eigen::JacobiSVD<CMatrix> svd(a);
        const RVector &s = svd.singularValues();
        std::size_t rank = 0;
        for (Eigen::Index i = 0; i < s.size(); ++i)
            if (s(i) > tol * s(0))
                ++rank;
        return rank;
    }

} // namespace hsrbf
