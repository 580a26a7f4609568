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

#ifndef HSRBF_SCENARIO_HPP
#define HSRBF_SCENARIO_HPP

#include "hsrbf/linalg.hpp"

#include <cstdint>
#include <vector>

namespace hsrbf
{
    // Single-cell railway downlink: one track-side BS, M rooftop mobile relays (MRs).
    // Defaults reproduce the reference parameter table; track_offset_m, mr_spacing_m
    // and num_subchannels are not part of that table.
    struct ScenarioConfig
    {
        double carrier_frequency_hz = 32e9;
        double bandwidth_hz = 500e6;
        double noise_density_dbm_per_hz = -174.0;
        double bs_height_m = 10.0;
        double mr_height_m = 2.5;
        double cell_radius_m = 600.0;
        double track_offset_m = 5.0;   // perpendicular BS-to-track distance
        std::size_t num_tx_antennas = 32;
        std::size_t num_rx_antennas = 16;
        std::size_t num_rf_chains = 8;
        std::size_t num_mrs = 6;       // equals the number of streams
        std::size_t num_subchannels = 8;
        std::size_t num_paths = 5;     // 1 LoS + reflected + scattered
        std::size_t num_reflected = 2;
        std::size_t num_scattered = 2;
        double tx_power_dbm = 30.0;
        double train_velocity_kmh = 360.0;
        double mr_spacing_m = 25.0;    // one MR per carriage
        std::uint64_t rng_seed = 1;

        // Throws std::invalid_argument on the first violated invariant.
        void validate() const;

        double wavelength_m() const { return kSpeedOfLight / carrier_frequency_hz; }
        double tx_power_w() const { return dbm_to_watt(tx_power_dbm); }
        double velocity_mps() const { return train_velocity_kmh / 3.6; }

        // sigma^2 = N_0 * W in watts, identical for all MRs.
        double noise_power_w() const { return dbm_to_watt(noise_density_dbm_per_hz) * bandwidth_hz; }

        // K frequencies uniformly spaced across the band, centred on the carrier.
        std::vector<double> subchannel_frequencies() const;
    };

} // namespace hsrbf

#endif
