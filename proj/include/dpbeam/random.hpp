// SPDX-License-Identifier: Apache-2.0
//
// dpbeam: hybrid beam codebook design for dual-polarized planar arrays
// Copyright (C) 2026 The dpbeam Authors
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

#pragma once

#include "common.hpp"

#include <cstdint>
#include <random>

namespace dpbeam
{
    // SplitMix64 finalizer; used to derive independent stream seeds
    constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
    {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    // Seedable generator with a portable output sequence.
    //
    // Only the raw mt19937_64 stream (whose sequence the standard fixes) is used;
    // uniform and Gaussian variates are derived here rather than through
    // std::*_distribution, whose algorithms are implementation-defined.
    class Rng
    {
    public:
        explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

        // Stream for Monte-Carlo trial `index` under `master`; independent of call order
        static Rng derive(std::uint64_t master, std::uint64_t index)
        {
            return Rng(splitmix64(master ^ splitmix64(index + 0x632BE59BD9B4E019ULL)));
        }

        // Uniform on the open interval (0, 1)
        double uniform()
        {
            return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
        }

        // Uniform on the open interval (lo, hi)
        double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

        double gaussian()
        {
            if (has_spare_)
            {
                has_spare_ = false;
                return spare_;
            }
            const double r = std::sqrt(-2.0 * std::log(uniform()));
            const double t = 2.0 * pi * uniform();
            spare_ = r * std::sin(t);
            has_spare_ = true;
            return r * std::cos(t);
        }

        // Circularly-symmetric complex Gaussian with E|z|^2 = variance
        cplx complex_gaussian(double variance = 1.0)
        {
            const double s = std::sqrt(variance / 2.0);
            const double re = gaussian();
            const double im = gaussian();
            return {s * re, s * im};
        }

    private:
        std::mt19937_64 engine_;
        double spare_ = 0.0;
        bool has_spare_ = false;
    };
}
