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

#ifndef HSRBF_RNG_HPP
#define HSRBF_RNG_HPP

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace hsrbf
{
    using Rng = std::mt19937_64;

    inline std::uint64_t splitmix64(std::uint64_t x)
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    // Order-sensitive mix of a base seed and any number of stream identifiers.
    inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> ids)
    {
        std::uint64_t h = splitmix64(base);
        for (auto id : ids)
            h = splitmix64(h ^ splitmix64(id));
        return h;
    }

    inline std::uint64_t seed_id(double value) { return std::bit_cast<std::uint64_t>(value); }

    // Uniform draw on [lo, hi); avoids std::uniform_real_distribution so streams
    // are identical across standard library implementations.
    inline double uniform(Rng &rng, double lo = 0.0, double hi = 1.0)
    {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    inline bool bernoulli(Rng &rng, double p) { return uniform(rng) < p; }

    // Standard normal by Box-Muller (one value per call).
    double standard_normal(Rng &rng);

} // namespace hsrbf

#endif
