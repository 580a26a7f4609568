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

#include "hsrbf/scenario.hpp"

#include <stdexcept>
#include <string>

namespace hsrbf
{
    void ScenarioConfig::validate() const
    {
        auto require_positive = [](double v, const char *name)
        {
            if (!(v > 0.0))
                throw std::invalid_argument(std::string(name) + " must be strictly positive.");
        };

        require_positive(carrier_frequency_hz, "carrier_frequency_hz");
        require_positive(bandwidth_hz, "bandwidth_hz");
        require_positive(bs_height_m, "bs_height_m");
        require_positive(mr_height_m, "mr_height_m");
        require_positive(cell_radius_m, "cell_radius_m");
        require_positive(track_offset_m, "track_offset_m");
        require_positive(mr_spacing_m, "mr_spacing_m");
        require_positive(train_velocity_kmh, "train_velocity_kmh");

        if (bandwidth_hz >= 2.0 * carrier_frequency_hz)
            throw std::invalid_argument("bandwidth_hz must be below twice the carrier frequency.");
        if (num_tx_antennas == 0 || num_rx_antennas == 0)
            throw std::invalid_argument("Antenna counts must be at least 1.");
        if (num_subchannels == 0)
            throw std::invalid_argument("num_subchannels must be at least 1.");
        if (num_mrs == 0)
            throw std::invalid_argument("num_mrs must be at least 1.");
        if (!(num_mrs <= num_rf_chains && num_rf_chains <= num_tx_antennas))
            throw std::invalid_argument("Require num_mrs <= num_rf_chains <= num_tx_antennas.");
        if (num_paths != 1 + num_reflected + num_scattered)
            throw std::invalid_argument("num_paths must equal 1 + num_reflected + num_scattered.");
    }

    std::vector<double> ScenarioConfig::subchannel_frequencies() const
    {
        const double spacing = bandwidth_hz / static_cast<double>(num_subchannels);
        const double centre = 0.5 * static_cast<double>(num_subchannels - 1);
        std::vector<double> f(num_subchannels);
        for (std::size_t k = 0; k < num_subchannels; ++k)
            f[k] = carrier_frequency_hz + (static_cast<double>(k) - centre) * spacing;
        return f;
    }

} // namespace hsrbf
