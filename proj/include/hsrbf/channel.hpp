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

#ifndef HSRBF_CHANNEL_HPP
#define HSRBF_CHANNEL_HPP

#include "hsrbf/linalg.hpp"
#include "hsrbf/rng.hpp"
#include "hsrbf/scenario.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace hsrbf
{
    enum class PathKind
    {
        LoS,
        Reflected,
        Scattered
    };

    const char *to_string(PathKind kind);

    // One propagation path. Only the distance fields matching `kind` are used:
    // LoS -> d_tr_m, Reflected -> d_p_m, Scattered -> d_tq_m * d_rq_m.
    struct PathComponent
    {
        PathKind kind = PathKind::LoS;
        double d_tr_m = 0.0; // TX-RX distance
        double d_p_m = 0.0;  // reflected path length
        double d_tq_m = 0.0; // TX-scatterer distance
        double d_rq_m = 0.0; // RX-scatterer distance
        double attenuation = 1.0;
        double phase_rad = 0.0;
        double aod_rad = 0.0;
        double aoa_rad = 0.0;
    };

    struct ChannelRealization
    {
        std::vector<CMatrix> per_mr_channels;             // M x (N_rx x N_tx)
        std::vector<std::vector<PathComponent>> paths;    // M x L
        std::vector<CMatrix> subchannel_gains;            // M x (K x L)
        double train_position_m = 0.0;
        double timestamp_s = 0.0;

        std::size_t num_mrs() const { return per_mr_channels.size(); }
    };

    // ULA steering vector, unit Euclidean norm:
    // a_i = exp(j * i * 2pi/lambda * spacing * sin(angle)) / sqrt(n).
    CVector array_response(double angle_rad, double wavelength_m, std::size_t n_elements,
                           double element_spacing_m);

    // Complex amplitude of one path on a sub-channel centred at f_k_hz.
    cdouble subchannel_gain(const PathComponent &path, double f_k_hz, double t_s = 0.0);

    // sqrt(N_tx N_rx / L) * sum_k sum_l g_{k,l} a_R(aoa_l, lambda_k) a_T(aod_l, lambda_k)^H.
    // Element spacing is half the carrier wavelength on both arrays. When `gains` is
    // non-null it receives the K x L gain matrix used in the sum.
    CMatrix channel_matrix(std::span<const PathComponent> paths, std::span<const double> subchannel_freqs,
                           const ScenarioConfig &scenario, CMatrix *gains = nullptr);

    // Same sum evaluated from precomputed gains (K x L); channel_matrix delegates here,
    // so recomputation from a stored realization is bit-identical.
    CMatrix channel_matrix_from_gains(std::span<const PathComponent> paths, const CMatrix &gains,
                                      std::span<const double> subchannel_freqs, const ScenarioConfig &scenario);

    // Channel realizations along the track. Stochastic path parameters (attenuations,
    // phases, reflector excess length, scatterer placement, angular offsets) are drawn
    // once per MR from a stream derived from scenario.rng_seed and held fixed along
    // the trajectory; geometry is re-evaluated at every position.
    std::vector<ChannelRealization> generate_trajectory_channels(const ScenarioConfig &scenario,
                                                                 std::span<const double> positions);

    // Flagged MRs get an all-zero channel matrix; everything else is copied as is.
    ChannelRealization apply_blockage(const ChannelRealization &realization, const std::vector<bool> &flags);

    // I.i.d. Bernoulli link blockage.
    class BlockageProcess
    {
    public:
        BlockageProcess(double block_probability, std::uint64_t seed);

        std::vector<bool> draw(std::size_t num_links);
        double block_probability() const { return block_probability_; }

    private:
        double block_probability_;
        Rng rng_;
    };

    // Text record, one block per (position, MR):
    //   channel position_m=<p> timestamp_s=<t> mr=<m> rows=<N_rx> cols=<N_tx>
    //   path kind=<LoS|Reflected|Scattered> d_tr=.. d_p=.. d_tq=.. d_rq=.. attenuation=.. phase=.. aod=.. aoa=..
    //   h re im re im ...   (row-major)
    void write_channel_record(std::ostream &os, const ChannelRealization &realization);

} // namespace hsrbf

#endif
