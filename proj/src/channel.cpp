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

#include "hsrbf/channel.hpp"

#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace hsrbf
{
    namespace
    {
        // Reflect an angle into [-pi/2, pi/2] without changing its sine.
        double fold_angle(double a)
        {
            if (a > 0.5 * kPi)
                return kPi - a;
            if (a < -0.5 * kPi)
                return -kPi - a;
            return a;
        }

        struct Vec3
        {
            double x, y, z;
        };

        double distance(const Vec3 &a, const Vec3 &b)
        {
            const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
            return std::sqrt(dx * dx + dy * dy + dz * dz);
        }

        // Per-MR stochastic draws, fixed along one trajectory.
        struct PathDraws
        {
            std::vector<double> ref_excess, ref_atten, ref_phase, ref_aod_offset, ref_aoa_offset;
            std::vector<double> sca_radius, sca_bearing, sca_atten, sca_phase, sca_aod_offset, sca_aoa_offset;
        };

        constexpr double kMaxAngularOffset = kPi / 6.0;
        constexpr double kScatterDiscRadius = 50.0;
        constexpr double kScatterMinRadius = 1.0;

        PathDraws draw_paths(const ScenarioConfig &sc, Rng &rng)
        {
            PathDraws d;
            for (std::size_t p = 0; p < sc.num_reflected; ++p)
            {
                d.ref_excess.push_back(uniform(rng, 0.05, 0.5));
                d.ref_atten.push_back(uniform(rng, 0.3, 0.9));
                d.ref_phase.push_back(uniform(rng, 0.0, kTwoPi));
                d.ref_aod_offset.push_back(uniform(rng, -kMaxAngularOffset, kMaxAngularOffset));
                d.ref_aoa_offset.push_back(uniform(rng, -kMaxAngularOffset, kMaxAngularOffset));
            }
            for (std::size_t q = 0; q < sc.num_scattered; ++q)
            {
                // uniform in the disc (area-uniform radius), away from the MR itself
                const double r2_lo = kScatterMinRadius * kScatterMinRadius;
                const double r2_hi = kScatterDiscRadius * kScatterDiscRadius;
                d.sca_radius.push_back(std::sqrt(uniform(rng, r2_lo, r2_hi)));
                d.sca_bearing.push_back(uniform(rng, 0.0, kTwoPi));
                d.sca_atten.push_back(uniform(rng, 0.1, 0.5));
                d.sca_phase.push_back(uniform(rng, 0.0, kTwoPi));
                d.sca_aod_offset.push_back(uniform(rng, -kMaxAngularOffset, kMaxAngularOffset));
                d.sca_aoa_offset.push_back(uniform(rng, -kMaxAngularOffset, kMaxAngularOffset));
            }
            return d;
        }

        std::vector<PathComponent> evaluate_paths(const ScenarioConfig &sc, const PathDraws &d, double mr_x)
        {
            const Vec3 bs{0.0, sc.track_offset_m, sc.bs_height_m};
            const Vec3 mr{mr_x, 0.0, sc.mr_height_m};

            // Both arrays lie along the track: sin(angle) is the direction cosine on x.
            const double d_tr = distance(bs, mr);
            const double los_aod = fold_angle(std::asin((mr.x - bs.x) / d_tr));
            const double los_aoa = fold_angle(std::asin((bs.x - mr.x) / d_tr));

            std::vector<PathComponent> paths;
            paths.reserve(sc.num_paths);

            PathComponent los;
            los.kind = PathKind::LoS;
            los.d_tr_m = d_tr;
            los.attenuation = 1.0;
            los.aod_rad = los_aod;
            los.aoa_rad = los_aoa;
            paths.push_back(los);

            for (std::size_t p = 0; p < sc.num_reflected; ++p)
            {
                PathComponent ref;
                ref.kind = PathKind::Reflected;
                ref.d_tr_m = d_tr;
                ref.d_p_m = d_tr * (1.0 + d.ref_excess[p]);
                ref.attenuation = d.ref_atten[p];
                ref.phase_rad = d.ref_phase[p];
                ref.aod_rad = fold_angle(los_aod + d.ref_aod_offset[p]);
                ref.aoa_rad = fold_angle(los_aoa + d.ref_aoa_offset[p]);
                paths.push_back(ref);
            }

            for (std::size_t q = 0; q < sc.num_scattered; ++q)
            {
                const Vec3 s{mr.x + d.sca_radius[q] * std::cos(d.sca_bearing[q]),
                             mr.y + d.sca_radius[q] * std::sin(d.sca_bearing[q]), mr.z};
                PathComponent sca;
                sca.kind = PathKind::Scattered;
                sca.d_tr_m = d_tr;
                sca.d_tq_m = distance(bs, s);
                sca.d_rq_m = distance(mr, s);
                sca.attenuation = d.sca_atten[q];
                sca.phase_rad = d.sca_phase[q];
                sca.aod_rad = fold_angle(los_aod + d.sca_aod_offset[q]);
                sca.aoa_rad = fold_angle(los_aoa + d.sca_aoa_offset[q]);
                paths.push_back(sca);
            }
            return paths;
        }

    } // namespace

    const char *to_string(PathKind kind)
    {
        switch (kind)
        {
        case PathKind::LoS:
            return "LoS";
        case PathKind::Reflected:
            return "Reflected";
        case PathKind::Scattered:
            return "Scattered";
        }
        return "?";
    }

    CVector array_response(double angle_rad, double wavelength_m, std::size_t n_elements, double element_spacing_m)
    {
        if (n_elements < 1)
            throw std::invalid_argument("array_response: n_elements must be at least 1.");
        if (!(wavelength_m > 0.0))
            throw std::invalid_argument("array_response: wavelength must be strictly positive.");

        const double step = kTwoPi / wavelength_m * element_spacing_m * std::sin(angle_rad);
        const double scale = 1.0 / std::sqrt(static_cast<double>(n_elements));
        CVector a(static_cast<Eigen::Index>(n_elements));
        for (std::size_t i = 0; i < n_elements; ++i)
            a(static_cast<Eigen::Index>(i)) = std::polar(scale, static_cast<double>(i) * step);
        return a;
    }

    cdouble subchannel_gain(const PathComponent &path, double f_k_hz, double /*t_s*/)
    {
        if (!(f_k_hz > 0.0))
            throw std::invalid_argument("subchannel_gain: frequency must be strictly positive.");

        const double base = kSpeedOfLight / (4.0 * kPi * f_k_hz);
        switch (path.kind)
        {
        case PathKind::LoS:
        {
            if (!(path.d_tr_m > 0.0))
                throw std::invalid_argument("subchannel_gain: LoS distance must be strictly positive.");
            const double tau = path.d_tr_m / kSpeedOfLight;
            return std::polar(base / path.d_tr_m, -kTwoPi * f_k_hz * tau);
        }
        case PathKind::Reflected:
            if (!(path.d_p_m > 0.0))
                throw std::invalid_argument("subchannel_gain: reflected path length must be strictly positive.");
            return std::polar(base * path.attenuation / path.d_p_m, path.phase_rad);
        case PathKind::Scattered:
            if (!(path.d_tq_m > 0.0) || !(path.d_rq_m > 0.0))
                throw std::invalid_argument("subchannel_gain: scatterer distances must be strictly positive.");
            return std::polar(base * path.attenuation / (path.d_tq_m * path.d_rq_m), path.phase_rad);
        }
        throw std::invalid_argument("subchannel_gain: unknown path kind.");
    }

    CMatrix channel_matrix_from_gains(std::span<const PathComponent> paths, const CMatrix &gains,
                                      std::span<const double> subchannel_freqs, const ScenarioConfig &scenario)
    {
        const std::size_t n_tx = scenario.num_tx_antennas, n_rx = scenario.num_rx_antennas;
        if (paths.size() != scenario.num_paths)
            throw std::invalid_argument("channel_matrix: number of paths does not match the scenario.");
        if (subchannel_freqs.size() != scenario.num_subchannels)
            throw std::invalid_argument("channel_matrix: number of sub-channels does not match the scenario.");
        if (gains.rows() != static_cast<Eigen::Index>(subchannel_freqs.size()) ||
            gains.cols() != static_cast<Eigen::Index>(paths.size()))
            throw std::invalid_argument("channel_matrix: gain matrix must be K x L.");

        const double spacing = 0.5 * scenario.wavelength_m();
        CMatrix h = CMatrix::Zero(static_cast<Eigen::Index>(n_rx), static_cast<Eigen::Index>(n_tx));
        for (std::size_t k = 0; k < subchannel_freqs.size(); ++k)
        {
            const double lambda_k = kSpeedOfLight / subchannel_freqs[k];
            for (std::size_t l = 0; l < paths.size(); ++l)
            {
                const CVector a_r = array_response(paths[l].aoa_rad, lambda_k, n_rx, spacing);
                const CVector a_t = array_response(paths[l].aod_rad, lambda_k, n_tx, spacing);
                h.noalias() += gains(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) * (a_r * a_t.adjoint());
            }
        }
        h *= std::sqrt(static_cast<double>(n_tx * n_rx) / static_cast<double>(paths.size()));
        return h;
    }

    CMatrix channel_matrix(std::span<const PathComponent> paths, std::span<const double> subchannel_freqs,
                           const ScenarioConfig &scenario, CMatrix *gains)
    {
        CMatrix g(static_cast<Eigen::Index>(subchannel_freqs.size()), static_cast<Eigen::Index>(paths.size()));
        for (std::size_t k = 0; k < subchannel_freqs.size(); ++k)
            for (std::size_t l = 0; l < paths.size(); ++l)
                g(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l)) = subchannel_gain(paths[l], subchannel_freqs[k]);

        CMatrix h = channel_matrix_from_gains(paths, g, subchannel_freqs, scenario);
        if (gains)
            *gains = std::move(g);
        return h;
    }

    std::vector<ChannelRealization> generate_trajectory_channels(const ScenarioConfig &scenario,
                                                                 std::span<const double> positions)
    {
        scenario.validate();
        if (positions.empty())
            throw std::invalid_argument("generate_trajectory_channels: positions must not be empty.");
        for (double p : positions)
            if (p < -scenario.cell_radius_m || p > scenario.cell_radius_m)
                throw std::invalid_argument("generate_trajectory_channels: position outside the cell.");

        const std::size_t m = scenario.num_mrs;
        std::vector<PathDraws> draws;
        draws.reserve(m);
        for (std::size_t i = 0; i < m; ++i)
        {
            Rng rng(derive_seed(scenario.rng_seed, {0x6368616eULL, i}));
            draws.push_back(draw_paths(scenario, rng));
        }

        const std::vector<double> freqs = scenario.subchannel_frequencies();
        const double v = scenario.velocity_mps();

        std::vector<ChannelRealization> out;
        out.reserve(positions.size());
        for (double pos : positions)
        {
            ChannelRealization r;
            r.train_position_m = pos;
            r.timestamp_s = (pos - positions.front()) / v;
            for (std::size_t i = 0; i < m; ++i)
            {
                const double mr_x = pos + static_cast<double>(i) * scenario.mr_spacing_m;
                std::vector<PathComponent> paths = evaluate_paths(scenario, draws[i], mr_x);
                CMatrix gains;
                r.per_mr_channels.push_back(channel_matrix(paths, freqs, scenario, &gains));
                r.subchannel_gains.push_back(std::move(gains));
                r.paths.push_back(std::move(paths));
            }
            out.push_back(std::move(r));
        }
        return out;
    }

    ChannelRealization apply_blockage(const ChannelRealization &realization, const std::vector<bool> &flags)
    {
        if (flags.size() != realization.num_mrs())
            throw std::invalid_argument("apply_blockage: one flag per MR is required.");
        ChannelRealization out = realization;
        for (std::size_t i = 0; i < flags.size(); ++i)
            if (flags[i])
                out.per_mr_channels[i].setZero();
        return out;
    }

    BlockageProcess::BlockageProcess(double block_probability, std::uint64_t seed)
        : block_probability_(block_probability), rng_(seed)
    {
        if (!(block_probability >= 0.0 && block_probability <= 1.0))
            throw std::invalid_argument("BlockageProcess: probability must lie in [0, 1].");
    }

    std::vector<bool> BlockageProcess::draw(std::size_t num_links)
    {
        std::vector<bool> flags(num_links);
        for (std::size_t i = 0; i < num_links; ++i)
            flags[i] = bernoulli(rng_, block_probability_);
        return flags;
    }

    void write_channel_record(std::ostream &os, const ChannelRealization &realization)
    {
        char buf[64];
        auto num = [&buf](double v)
        {
            std::snprintf(buf, sizeof(buf), "%.17g", v);
            return std::string(buf);
        };

        for (std::size_t i = 0; i < realization.num_mrs(); ++i)
        {
            const CMatrix &h = realization.per_mr_channels[i];
            os << "channel position_m=" << num(realization.train_position_m)
               << " timestamp_s=" << num(realization.timestamp_s) << " mr=" << i << " rows=" << h.rows()
               << " cols=" << h.cols() << '\n';
            if (i < realization.paths.size())
                for (const auto &p : realization.paths[i])
                    os << "path kind=" << to_string(p.kind) << " d_tr=" << num(p.d_tr_m) << " d_p=" << num(p.d_p_m)
                       << " d_tq=" << num(p.d_tq_m) << " d_rq=" << num(p.d_rq_m)
                       << " attenuation=" << num(p.attenuation) << " phase=" << num(p.phase_rad)
                       << " aod=" << num(p.aod_rad) << " aoa=" << num(p.aoa_rad) << '\n';
            os << 'h';
            for (Eigen::Index r = 0; r < h.rows(); ++r)
                for (Eigen::Index c = 0; c < h.cols(); ++c)
                    os << ' ' << num(h(r, c).real()) << ' ' << num(h(r, c).imag());
            os << '\n';
        }
    }

} // namespace hsrbf
