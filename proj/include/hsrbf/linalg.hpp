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

#ifndef HSRBF_LINALG_HPP
#define HSRBF_LINALG_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <vector>

namespace hsrbf
{
    using cdouble = std::complex<double>;
    using CVector = Eigen::VectorXcd;
    using CMatrix = Eigen::MatrixXcd;
    using RVector = Eigen::VectorXd;

    inline constexpr double kSpeedOfLight = 299792458.0;
    inline constexpr double kPi = 3.14159265358979323846;
    inline constexpr double kTwoPi = 2.0 * kPi;

    // Relative singular-value cutoff used wherever a pseudo-inverse appears.
    inline constexpr double kPinvTolerance = 1e-10;

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
    inline double linear_to_db(double x) { return 10.0 * std::log10(x); }
    inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
    inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

    // Moore-Penrose pseudo-inverse; singular values below tol * sigma_max are dropped.
    CMatrix pinv(const CMatrix &a, double tol = kPinvTolerance);

    // Tr(F^H F), i.e. the squared Frobenius norm.
    inline double power(const CMatrix &f) { return f.squaredNorm(); }

    std::size_t numerical_rank(const CMatrix &a, double tol = 1e-9);

} // namespace hsrbf

#endif
