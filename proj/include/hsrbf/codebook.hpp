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

#ifndef HSRBF_CODEBOOK_HPP
#define HSRBF_CODEBOOK_HPP

#include "hsrbf/linalg.hpp"

#include <iosfwd>
#include <stdexcept>
#include <vector>

namespace hsrbf
{
    // Thrown when every atom of a codebook has been disabled.
    class CodebookExhausted : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Analog beam dictionary. Columns of `atoms` are unit-norm ULA steering vectors;
    // disabled atoms are skipped by correlation searches but stay in the matrix.
    class Codebook
    {
    public:
        Codebook() = default;
        Codebook(CMatrix atoms, double wavelength_m);

        const CMatrix &atoms() const { return atoms_; }
        std::size_t d_size() const { return static_cast<std::size_t>(atoms_.cols()); }
        std::size_t n_elements() const { return static_cast<std::size_t>(atoms_.rows()); }
        double wavelength_m() const { return wavelength_m_; }

        bool is_enabled(std::size_t index) const;
        std::size_t num_enabled() const;
        const std::vector<bool> &disabled_mask() const { return disabled_; }

        // Set semantics: disabling twice is a no-op.
        void disable(std::size_t index);

        // Index of the enabled atom maximizing ||d_j^H target||_2 (ties -> lowest index).
        std::size_t most_correlated(const CMatrix &target) const;

    private:
        CMatrix atoms_;
        double wavelength_m_ = 0.0;
        std::vector<bool> disabled_;
    };

    // D atoms on a grid uniform in sin(angle) over [-1, 1), half-wavelength spacing.
    Codebook build_codebook(std::size_t n_tx, std::size_t d_size, double wavelength_m);

    // Functional form of Codebook::disable.
    Codebook disable_atom(Codebook codebook, std::size_t index);

    // One row per atom: interleaved real/imag decimal values.
    void write_codebook(std::ostream &os, const Codebook &codebook);

} // namespace hsrbf

#endif
