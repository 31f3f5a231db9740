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

// Designs the codeword of one region and compares it with the matched narrow beam.
#include <dpbeam/simulation.hpp>

#include <chrono>
#include <cstdio>

int main()
{
    using namespace dpbeam;
    const ArrayConfig array{8, 16};
    const RegionGrid grid{6, 6, 7, 7};
    const PolarizationParams pol; // chi = 0.3, phi = pi/4, unit gains

    const auto t0 = std::chrono::steady_clock::now();
    const DesignContext ctx(grid, pol, array, DesignOptions{});
    const auto cw = design_region_codeword(ctx, 3, 3);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const auto baseline = baseline_dft_codebook(grid, pol, array);
    const auto ideal = ideal_pattern_vector(3, 3, grid, array);
    const double base_se = squared_error(ideal, pattern_vector(baseline.at(3, 3), ctx.steering(), pol, array));

    std::printf("region (3,3): hybrid SE %.4f (closed form %.4f), baseline SE %.4f  [%.2f s]\n", cw.se,
                cw.closed_form_se, base_se, secs);
    std::printf("min in-region gain: proposed %.4f, baseline %.4f (ideal %.4f)\n",
                min_region_gain(cw.c, 3, 3, ctx.steering(), pol, array),
                min_region_gain(baseline.at(3, 3), 3, 3, ctx.steering(), pol, array), ideal_gain(grid, array));
    return 0;
}
