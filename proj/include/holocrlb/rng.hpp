// SPDX-License-Identifier: Apache-2.0
//
// holo-crlb: multi-band holographic-surface positioning simulator and
// beamforming optimizer
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

#ifndef HOLOCRLB_RNG_HPP
#define HOLOCRLB_RNG_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace holocrlb {

// splitmix64 finalizer, used to derive independent sub-stream seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag)
{
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (tag + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Seeded generator with distributions implemented in-house so that a
// (config, seed) pair reproduces bit-identical streams on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(mix_seed(seed, 0)) {}

    std::uint64_t seed() const { return seed_; }

    /// Independent sub-stream; pure function of (seed, tag), not of the
    /// draws already consumed.
    Rng fork(std::uint64_t tag) const { return Rng(mix_seed(seed_, tag ^ 0xA5A5A5A5A5A5A5A5ULL)); }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return (double)(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Standard normal via Box-Muller (two uniforms per call, no caching).
    double gaussian()
    {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }

    /// Circularly-symmetric complex normal with unit variance,
    /// Re and Im each N(0, 1/2).
    std::complex<double> cgaussian()
    {
        const double s = std::sqrt(0.5);
        const double re = gaussian();
        const double im = gaussian();
        return {s * re, s * im};
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace holocrlb

#endif
