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


#include "oracles.hpp"

#include <dpbeam/simulation.hpp>

#include <gtest/gtest.h>

using namespace dpbeam;

namespace
{
    Codebook random_codebook(const RegionGrid &g, const ArrayConfig &cfg, oracle::Rand &r)
    {
        Codebook cb{"random", g, {}};
        for (int k = 0; k < g.regions(); ++k)
            cb.codewords.push_back(oracle::to_eigen(r.unit(static_cast<std::size_t>(cfg.total_elements()))));
        return cb;
    }
}

TEST(BeamAlign, NoiseFreeEqualsExhaustiveArgmax)
{
    oracle::Rand r(61);
    const RegionGrid g{4, 3, 1, 1};
    const ArrayConfig cfg{3, 4};
    Rng rng(1);
    for (int t = 0; t < 200; ++t)
    {
        const auto cb = random_codebook(g, cfg, r);
        const auto h = r.unit(24);
        std::size_t best = 0;
        double bp = -1.0;
        for (std::size_t k = 0; k < cb.size(); ++k)
        {
            const double v = std::norm(oracle::inner(h, oracle::from_eigen(cb.codewords[k])));
            if (v > bp)
            {
                bp = v;
                best = k;
            }
        }
        const auto sel = beam_align(oracle::to_eigen(h), cb, 10.0, false, rng);
        EXPECT_EQ(sel, cb.region_of(best));
        // positive scaling of h leaves the choice unchanged
        EXPECT_EQ(beam_align(3.7 * oracle::to_eigen(h), cb, 10.0, false, rng), sel);
    }
}

TEST(BeamAlign, SingleCodewordAndTies)
{
    const RegionGrid one{1, 1, 1, 1};
    Codebook cb{"one", one, {CVec::Ones(8) / std::sqrt(8.0)}};
    Rng rng(2);
    EXPECT_EQ(beam_align(CVec::Ones(8), cb, 1.0, true, rng), (RegionIndex{1, 1}));

    const RegionGrid two{1, 2, 1, 1};
    Codebook tie{"tie", two, {CVec::Ones(8) / std::sqrt(8.0), CVec::Ones(8) / std::sqrt(8.0)}};
    EXPECT_EQ(beam_align(CVec::Ones(8), tie, 1.0, false, rng), (RegionIndex{1, 1}));
    Codebook empty{"e", two, {}};
    EXPECT_THROW(beam_align(CVec::Ones(8), empty, 1.0, false, rng), std::invalid_argument);
}

TEST(BeamAlign, LosAtRegionCenterPicksThatRegion)
{
    const RegionGrid g{4, 4, 5, 5};
    const ArrayConfig cfg{6, 8};
    const PolarizationParams p;
    const auto cb = make_codebook("proposed", g, design_codebook(g, p, cfg));
    Rng rng(3);
    for (int pp = 1; pp <= 4; ++pp)
        for (int qq = 1; qq <= 4; ++qq)
        {
            const auto sf = region_center(pp, qq, g);
            const CVec h = dual_pol_beamformer(upa_response_unpaired(sf, cfg), p);
            EXPECT_EQ(beam_align(h, cb, 1.0, false, rng), (RegionIndex{pp, qq}));
        }
}

TEST(Baseline, UnitNormMatchedAtCenter)
{
    const RegionGrid g{6, 6, 7, 7};
    const ArrayConfig cfg{8, 16};
    const PolarizationParams p;
    const auto cb = baseline_dft_codebook(g, p, cfg);
    ASSERT_EQ(cb.size(), 36u);
    for (std::size_t k = 0; k < cb.size(); ++k)
    {
        EXPECT_NEAR(cb.codewords[k].norm(), 1.0, 1e-12);
        const auto [pp, qq] = cb.region_of(k);
        EXPECT_NEAR(reference_gain(region_center(pp, qq, g), cb.codewords[k], p, cfg), 1.0, 1e-12);
    }
}

TEST(Metrics, IdealPatternAndRipple)
{
    const RegionGrid g{3, 3, 2, 2};
    const ArrayConfig cfg{4, 4};
    const auto ideal = ideal_pattern_vector(2, 2, g, cfg);
    EXPECT_DOUBLE_EQ(min_region_gain(ideal, 2, 2), ideal_gain(g, cfg));
    EXPECT_DOUBLE_EQ(ripple(ideal, 2, 2), 1.0);
    oracle::Rand r(62);
    const auto d = build_steering_matrices(g, cfg);
    const PolarizationParams p;
    for (int t = 0; t < 20; ++t)
        EXPECT_GE(ripple(oracle::to_eigen(r.unit(32)), 1, 3, d, p, cfg), 1.0);
}

TEST(Metrics, WideBeamBeatsMatchedBeamOnMinGain)
{
    const RegionGrid g{6, 6, 7, 7};
    const ArrayConfig cfg{8, 16};
    const PolarizationParams p;
    const auto d = build_steering_matrices(g, cfg);
    const auto prop = design_region_codeword(3, 3, g, p, cfg);
    const auto base = baseline_dft_codebook(g, p, cfg);
    EXPECT_GT(min_region_gain(prop.c, 3, 3, d, p, cfg), min_region_gain(base.at(3, 3), 3, 3, d, p, cfg));
    const double base_se = squared_error(ideal_pattern_vector(3, 3, g, cfg), pattern_vector(base.at(3, 3), d, p, cfg));
    EXPECT_GT(base_se, prop.se);
}

TEST(SimulateRate, ZeroSnrGivesZeroRate)
{
    const RegionGrid g{2, 2, 1, 1};
    const ArrayConfig cfg{2, 2};
    const PolarizationParams p;
    SimulationConfig sim;
    sim.snr_db = {-std::numeric_limits<double>::infinity()};
    sim.n_trials = 50;
    const auto rc = simulate_rate(baseline_dft_codebook(g, p, cfg), sim, p, cfg);
    EXPECT_EQ(rc.mean_rate[0], 0.0);
    EXPECT_EQ(rc.upper_bound[0], 0.0);
}

TEST(SimulateRate, MonotoneInSnrAndBelowBound)
{
    const RegionGrid g{5, 4, 7, 7};
    const ArrayConfig cfg{4, 8};
    const PolarizationParams p;
    SimulationConfig sim;
    sim.n_trials = 300;
    for (bool noisy : {false, true})
    {
        sim.noisy_training = noisy;
        const auto rc = simulate_rate(baseline_dft_codebook(g, p, cfg), sim, p, cfg);
        ASSERT_EQ(rc.mean_rate.size(), 7u);
        for (std::size_t s = 0; s < 7; ++s)
        {
            EXPECT_LE(rc.mean_rate[s], rc.upper_bound[s] + 3 * rc.rate_std_error[s]);
            EXPECT_NEAR(rc.upper_bound[s], rate_upper_bound(db_to_linear(sim.snr_db[s]), rc.mean_h_norm_sq, g, cfg), 1e-12);
            if (s > 0 && !noisy)
            {
                for (int t = 0; t < sim.n_trials; ++t) // same channel, same beam, higher SNR
                    EXPECT_GE(rc.trial_rates[s][t], rc.trial_rates[s - 1][t]);
            }
            if (s > 0)
            {
                EXPECT_GT(rc.mean_rate[s], rc.mean_rate[s - 1]);
            }
        }
    }
}

TEST(SimulateRate, BitIdenticalForFixedSeed)
{
    const RegionGrid g{3, 3, 1, 1};
    const ArrayConfig cfg{2, 4};
    const PolarizationParams p;
    SimulationConfig sim;
    sim.n_trials = 200;
    sim.rng_seed = 99;
    const auto cb = baseline_dft_codebook(g, p, cfg);
    const auto a = simulate_rate(cb, sim, p, cfg), b = simulate_rate(cb, sim, p, cfg);
    EXPECT_EQ(a.mean_rate, b.mean_rate);
    EXPECT_EQ(a.mean_h_norm_sq, b.mean_h_norm_sq);
    sim.rng_seed = 100;
    EXPECT_NE(simulate_rate(cb, sim, p, cfg).mean_rate, a.mean_rate);
}

TEST(SimulateRate, GapStepsArePaired)
{
    const RegionGrid g{2, 2, 1, 1};
    const ArrayConfig cfg{2, 2};
    const PolarizationParams p;
    SimulationConfig sim;
    sim.n_trials = 100;
    const auto cb = baseline_dft_codebook(g, p, cfg);
    const auto a = simulate_rate(cb, sim, p, cfg);
    for (const auto &s : gap_steps(a, a))
    {
        EXPECT_EQ(s.delta, 0.0);
        EXPECT_EQ(s.std_error, 0.0);
    }
    sim.rng_seed = 5;
    EXPECT_THROW(gap_steps(a, simulate_rate(cb, sim, p, cfg)), std::invalid_argument);
}
