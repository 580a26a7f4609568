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

#include "hsrbf/codebook.hpp"
#include "hsrbf/channel.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

namespace hsrbf
{
    Codebook::Codebook(CMatrix atoms, double wavelength_m)
        : atoms_(std::move(atoms)), wavelength_m_(wavelength_m), disabled_(static_cast<std::size_t>(atoms_.cols()), false)
    {
    }

    bool Codebook::is_enabled(std::size_t index) const
    {
        return index < disabled_.size() && !disabled_[index];
    }

    std::size_t Codebook::num_enabled() const
    {
        return static_cast<std::size_t>(std::count(disabled_.begin(), disabled_.end(), false));
    }

    void Codebook::disable(std::size_t index)
    {
        if (index >= disabled_.size())
            throw std::invalid_argument("Codebook::disable: atom index out of range.");
        disabled_[index] = true;
    }

    std::size_t Codebook::most_correlated(const CMatrix &target) const
    {
        if (target.rows() != atoms_.rows())
            throw std::invalid_argument("Codebook::most_correlated: target row count does not match the atoms.");

        // ||d_j^H T||_2 for every atom at once
        const RVector scores = (atoms_.adjoint() * target).rowwise().norm();

        std::size_t best = disabled_.size();
        double best_score = -1.0;
        for (std::size_t j = 0; j < disabled_.size(); ++j)
        {
            if (disabled_[j])
                continue;
            const double s = scores(static_cast<Eigen::Index>(j));
            if (s > best_score)
            {
                best_score = s;
                best = j;
            }
        }
        if (best == disabled_.size())
            throw CodebookExhausted("Codebook::most_correlated: all atoms are disabled.");
        return best;
    }

    Codebook build_codebook(std::size_t n_tx, std::size_t d_size, double wavelength_m)
    {
        if (d_size < 1)
            throw std::invalid_argument("build_codebook: d_size must be at least 1.");
        if (n_tx < 1)
            throw std::invalid_argument("build_codebook: n_tx must be at least 1.");

        CMatrix atoms(static_cast<Eigen::Index>(n_tx), static_cast<Eigen::Index>(d_size));
        for (std::size_t j = 0; j < d_size; ++j)
        {
            const double s = -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(d_size);
            atoms.col(static_cast<Eigen::Index>(j)) = array_response(std::asin(s), wavelength_m, n_tx, 0.5 * wavelength_m);
        }
        return Codebook(std::move(atoms), wavelength_m);
    }

    Codebook disable_atom(Codebook codebook, std::size_t index)
    {
        codebook.disable(index);
        return codebook;
    }

    void write_codebook(std::ostream &os, const Codebook &codebook)
    {
        char buf[64];
        const CMatrix &a = codebook.atoms();
        for (Eigen::Index j = 0; j < a.cols(); ++j)
        {
            for (Eigen::Index i = 0; i < a.rows(); ++i)
            {
                std::snprintf(buf, sizeof(buf), "%.17g %.17g", a(i, j).real(), a(i, j).imag());
                if (i > 0)
                    os << ' ';
                os << buf;
            }
            os << '\n';
        }
    }

} // namespace hsrbf
