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

#include "codeword_design.hpp"
#include "polarization_channel.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace dpbeam
{
    struct RegionIndex
    {
        int p = 1;
        int q = 1;

        bool operator==(const RegionIndex &) const = default;
    };

    // Q unit-norm codewords, codeword k serving region (k / q_v + 1, k % q_v + 1)
    struct Codebook
    {
        std::string id;
        RegionGrid grid;
        std::vector<CVec> codewords;

        std::size_t size() const { return codewords.size(); }
        RegionIndex region_of(std::size_t k) const
        {
            const auto qv = static_cast<std::size_t>(grid.q_v);
            return {static_cast<int>(k / qv) + 1, static_cast<int>(k % qv) + 1};
        }
        const CVec &at(int p, int q) const
        {
            grid.check_region(p, q);
            return codewords.at(static_cast<std::size_t>((p - 1) * grid.q_v + (q - 1)));
        }
    };

    inline Codebook make_codebook(std::string id, const RegionGrid &grid, const std::vector<DesignedCodeword> &designed)
    {
        Codebook cb{std::move(id), grid, {}};
        for (const auto &d : designed)
            cb.codewords.push_back(d.c);
        return cb;
    }

    // Matched dual-pol narrow beam at each region center
    inline Codebook baseline_dft_codebook(const RegionGrid &grid, const PolarizationParams &params, const ArrayConfig &cfg)
    {
        grid.validate();
        cfg.validate();
        Codebook cb{"baseline", grid, {}};
        for (int p = 1; p <= grid.q_h; ++p)
            for (int q = 1; q <= grid.q_v; ++q)
                cb.codewords.push_back(dual_pol_beamformer(upa_response_unpaired(region_center(p, q, grid), cfg), params));
        return cb;
    }

    // Codeword with the largest received training power |sqrt(snr) h^H c + n|^2 (noise in sigma units).
    // Ties resolve to the lowest (p,q).
    inline RegionIndex beam_align(const CVec &h, const Codebook &codebook, double snr_linear, bool noisy, Rng &rng)
    {
        require(codebook.size() > 0, "beam_align: empty codebook");
        const double amp = std::sqrt(snr_linear);
        std::size_t best = 0;
        double best_power = -1.0;
        for (std::size_t k = 0; k < codebook.size(); ++k)
        {
            cplx y = h.dot(codebook.codewords[k]);
            double power;
            if (noisy)
                power = std::norm(amp * y + rng.complex_gaussian());
            else
                power = std::norm(y);
            if (power > best_power)
            {
                best_power = power;
                best = k;
            }
        }
        return codebook.region_of(best);
    }

    inline double min_region_gain(const PatternVector &g, int p, int q) { return g.region(p, q).minCoeff(); }

    // max / min of the in-region section gains
    inline double ripple(const PatternVector &g, int p, int q)
    {
        const RVec r = g.region(p, q);
        const double lo = r.minCoeff();
        return lo > 0.0 ? r.maxCoeff() / lo : std::numeric_limits<double>::infinity();
    }

    inline double min_region_gain(const CVec &c, int p, int q, const SteeringMatrices &d, const PolarizationParams &params,
                                  const ArrayConfig &cfg)
    {
        return min_region_gain(pattern_vector(c, d, params, cfg), p, q);
    }

    inline double ripple(const CVec &c, int p, int q, const SteeringMatrices &d, const PolarizationParams &params,
                         const ArrayConfig &cfg)
    {
        return ripple(pattern_vector(c, d, params, cfg), p, q);
    }

    struct SimulationConfig
    {
        std::vector<double> snr_db{0, 5, 10, 15, 20, 25, 30};
        int n_trials = 2000;
        ChannelConfig channel;
        bool noisy_training = true;
        std::uint64_t rng_seed = 1;

        void validate() const
        {
            require(!snr_db.empty(), "simulation.snr_db must not be empty");
            require(n_trials >= 1, "simulation.n_trials must be >= 1");
            channel.validate();
        }
    };

    struct RateCurve
    {
        std::string codebook_id;
        std::vector<double> snr_db;
        std::vector<double> mean_rate;
        std::vector<double> rate_std_error; // standard error of mean_rate
        std::vector<double> upper_bound;    // bound at the trial-averaged |h|^2
        double mean_h_norm_sq = 0.0;
        int n_trials = 0;
        std::uint64_t seed = 0;
        std::vector<std::vector<double>> trial_rates; // [snr][trial]
    };

    // Sample mean and its standard error (two-pass)
    inline std::pair<double, double> mean_and_std_error(const std::vector<double> &x)
    {
        if (x.empty())
            return {0.0, 0.0};
        const double n = static_cast<double>(x.size());
        double mean = 0.0;
        for (double v : x)
            mean += v;
        mean /= n;
        if (x.size() < 2)
            return {mean, 0.0};
        double ss = 0.0;
        for (double v : x)
            ss += (v - mean) * (v - mean);
        return {mean, std::sqrt(ss / (n - 1.0) / n)};
    }

    // Monte-Carlo data rate E[log2(1 + snr |h^H c|^2)] with beam training per trial.
    //
    // Channel draws and training noise depend only on (seed, trial): every SNR point and every
    // codebook of the same size sees the same randomness.
    inline RateCurve simulate_rate(const Codebook &codebook, const SimulationConfig &sim, const PolarizationParams &params,
                                   const ArrayConfig &cfg)
    {
        sim.validate();
        params.validate();
        cfg.validate();
        const std::size_t n_snr = sim.snr_db.size();
        std::vector<double> snr(n_snr);
        for (std::size_t s = 0; s < n_snr; ++s)
            snr[s] = db_to_linear(sim.snr_db[s]);

        std::vector<std::vector<double>> rates(n_snr, std::vector<double>(static_cast<std::size_t>(sim.n_trials)));
        double h_sum = 0.0;
        const std::uint64_t noise_master = splitmix64(sim.rng_seed ^ 0xA5A5A5A5DEADBEEFULL);
        for (int t = 0; t < sim.n_trials; ++t)
        {
            Rng rng = Rng::derive(sim.rng_seed, static_cast<std::uint64_t>(t));
            const auto ch = sample_channel(sim.channel, params, cfg, rng);
            h_sum += ch.h.squaredNorm();
            for (std::size_t s = 0; s < n_snr; ++s)
            {
                Rng noise = Rng::derive(noise_master, static_cast<std::uint64_t>(t));
                const auto sel = beam_align(ch.h, codebook, snr[s], sim.noisy_training, noise);
                rates[s][static_cast<std::size_t>(t)] =
                    std::log2(1.0 + snr[s] * std::norm(ch.h.dot(codebook.at(sel.p, sel.q))));
            }
        }

        RateCurve out;
        out.codebook_id = codebook.id;
        out.snr_db = sim.snr_db;
        out.n_trials = sim.n_trials;
        out.seed = sim.rng_seed;
        const double n = sim.n_trials;
        out.mean_h_norm_sq = h_sum / n;
        for (std::size_t s = 0; s < n_snr; ++s)
        {
            const auto [mean, se] = mean_and_std_error(rates[s]);
            out.mean_rate.push_back(mean);
            out.rate_std_error.push_back(se);
            out.upper_bound.push_back(rate_upper_bound(snr[s], out.mean_h_norm_sq, codebook.grid, cfg));
        }
        out.trial_rates = std::move(rates);
        return out;
    }

    // Change of the paired rate gap (a - b) between consecutive SNR points, with its
    // standard error over trials. Both curves must come from the same seed and trial count.
    struct GapStep
    {
        double delta = 0.0;
        double std_error = 0.0;
    };

    inline std::vector<GapStep> gap_steps(const RateCurve &a, const RateCurve &b)
    {
        require(a.snr_db == b.snr_db && a.n_trials == b.n_trials && a.seed == b.seed,
                "gap_steps: curves are not paired");
        require(a.trial_rates.size() == a.snr_db.size() && b.trial_rates.size() == b.snr_db.size(),
                "gap_steps: per-trial rates missing");
        std::vector<GapStep> out;
        std::vector<double> d(static_cast<std::size_t>(a.n_trials));
        for (std::size_t s = 1; s < a.snr_db.size(); ++s)
        {
            for (std::size_t t = 0; t < d.size(); ++t)
                d[t] = (a.trial_rates[s][t] - b.trial_rates[s][t]) - (a.trial_rates[s - 1][t] - b.trial_rates[s - 1][t]);
            const auto [mean, se] = mean_and_std_error(d);
            out.push_back({mean, se});
        }
        return out;
    }
}
