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

#include "hybrid_factorization.hpp"
#include "ideal_pattern.hpp"

#include <algorithm>
#include <cstdint>
#include <queue>
#include <string>
#include <tuple>
#include <vector>

namespace dpbeam
{
    // Family of unit-modulus phase vectors (q_Lh, q_Lv) enumerated per axis.
    //   ramp:        q_i = e^{j theta_l (i-1)}, theta_l = -pi + 2 pi l / B, l = 1..B
    //   elementwise: every q_i independently on the B-point grid e^{j(-pi + 2 pi l / B)};
    //                q_1 is pinned to the first grid point since a common phase does not
    //                change the pattern, leaving B^(L-1) vectors
    enum class CandidateFamily
    {
        ramp,
        elementwise,
    };

    inline std::string to_string(CandidateFamily f) { return f == CandidateFamily::ramp ? "ramp" : "elementwise"; }

    inline CandidateFamily candidate_family_from_string(const std::string &s)
    {
        if (s == "ramp")
            return CandidateFamily::ramp;
        if (s == "elementwise")
            return CandidateFamily::elementwise;
        throw std::invalid_argument("unknown candidate family '" + s + "' (expected ramp or elementwise)");
    }

    inline constexpr std::int64_t max_candidates_per_axis = 1'000'000;

    inline std::vector<CVec> candidate_phase_vectors(CandidateFamily family, int b_grid, int l)
    {
        require(b_grid >= 1, "candidate_phase_vectors: b_grid must be >= 1");
        require(l >= 1, "candidate_phase_vectors: length must be >= 1");
        auto grid_phase = [b_grid](int ell) { return -pi + 2.0 * pi * ell / b_grid; };

        std::vector<CVec> out;
        if (family == CandidateFamily::ramp)
        {
            for (int ell = 1; ell <= b_grid; ++ell)
            {
                CVec q(l);
                for (int i = 0; i < l; ++i)
                    q(i) = std::polar(1.0, grid_phase(ell) * i);
                out.push_back(std::move(q));
            }
            return out;
        }

        std::int64_t count = 1;
        for (int i = 1; i < l; ++i)
        {
            count *= b_grid;
            require(count <= max_candidates_per_axis, "candidate_phase_vectors: elementwise family too large (B^(L-1) > 1e6)");
        }
        out.reserve(static_cast<std::size_t>(count));
        for (std::int64_t k = 0; k < count; ++k)
        {
            CVec q(l);
            q(0) = std::polar(1.0, grid_phase(1));
            std::int64_t rem = k;
            for (int i = l - 1; i >= 1; --i) // entry 2 is the most significant digit
            {
                q(i) = std::polar(1.0, grid_phase(1 + static_cast<int>(rem % b_grid)));
                rem /= b_grid;
            }
            out.push_back(std::move(q));
        }
        return out;
    }

    struct PhaseVectorCandidate
    {
        CVec q_lh;
        CVec q_lv;
        int index_h = 0; // position in the horizontal candidate list
        int index_v = 0;
    };

    // (D_{h,p} q_Lh (x) D_{v,q} q_Lv) / |.|
    inline CVec single_pol_beamformer(const PhaseVectorCandidate &cand, int p, int q, const SteeringMatrices &d)
    {
        d.grid.check_region(p, q);
        require(cand.q_lh.size() == d.grid.l_h && cand.q_lv.size() == d.grid.l_v,
                "single_pol_beamformer: candidate lengths must equal (l_h, l_v)");
        const CVec x = kron(CVec(d.region_h(p) * cand.q_lh), CVec(d.region_v(q) * cand.q_lv));
        const double n = x.norm();
        if (!(n > 1e-300))
            throw numerical_error("single_pol_beamformer: candidate yields a zero beamformer");
        return x / n;
    }

    inline CVec single_pol_beamformer(const PhaseVectorCandidate &cand, int p, int q, const RegionGrid &grid,
                                      const ArrayConfig &cfg)
    {
        return single_pol_beamformer(cand, p, q, build_steering_matrices(grid, cfg));
    }

    // b R(phi) ([rho_pv; rho_ph] (x) c_single)
    inline CVec dual_pol_beamformer(const CVec &c_single, const PolarizationParams &params)
    {
        require_unit_norm(c_single, "dual_pol_beamformer");
        double b = 0.0;
        try
        {
            b = params.b();
        }
        catch (const std::invalid_argument &)
        {
            throw std::invalid_argument("dual_pol_beamformer: both polarization gains are zero");
        }
        CVec stacked(2 * c_single.size());
        stacked.head(c_single.size()) = params.rho_pv() * c_single;
        stacked.tail(c_single.size()) = params.rho_ph() * c_single;
        return rotate(params.phi, b * stacked);
    }

    // Ideal amplitude vector sqrt(G) (e_p (x) q_Lh (x) e_q (x) q_Lv), in D order
    inline CVec ideal_amplitude_vector(int p, int q, const PhaseVectorCandidate &cand, const RegionGrid &grid,
                                       const ArrayConfig &cfg)
    {
        const auto cols = grid.region_columns(p, q);
        const double s = std::sqrt(ideal_gain(grid, cfg));
        CVec a = CVec::Zero(grid.total_sections());
        std::size_t k = 0;
        for (int lh = 0; lh < grid.l_h; ++lh)
            for (int lv = 0; lv < grid.l_v; ++lv)
                a(cols[k++]) = s * cand.q_lh(lh) * cand.q_lv(lv);
        return a;
    }

    // Complex section response b ([rho_pv; rho_ph] (x) D)^H R(phi)^H c = D^H u
    inline CVec section_response(const CVec &c, const SteeringMatrices &d, const PolarizationParams &params)
    {
        const CVec u = polarization_projection(c, params);
        return d.full.adjoint() * u;
    }

    // Least-squares scale aligning the section response of c with the ideal amplitude vector
    inline cplx gamma_constant(const CVec &response, const CVec &ideal_amplitude)
    {
        require(response.size() == ideal_amplitude.size(), "gamma_constant: length mismatch");
        const double n2 = response.squaredNorm();
        if (!(n2 > 0.0))
            throw numerical_error("gamma_constant: section response is identically zero");
        return response.dot(ideal_amplitude) / n2; // Eigen dot conjugates the left operand
    }

    inline cplx gamma_constant(const CVec &c, int p, int q, const SteeringMatrices &d, const PolarizationParams &params,
                               const ArrayConfig &cfg, const PhaseVectorCandidate &cand)
    {
        return gamma_constant(section_response(c, d, params), ideal_amplitude_vector(p, q, cand, d.grid, cfg));
    }

    // Generators of the zero-gain set Omega and its complement Gamma, in the effective
    // (R(phi)^H-rotated) codeword domain; column l uses the l-th unit vector.
    struct OmegaGammaBasis
    {
        CMat omega; // [-rho_ph^* e_l; rho_pv^* e_l]
        CMat gamma; // [ rho_pv  e_l; rho_ph   e_l]
    };

    inline OmegaGammaBasis omega_gamma_diagnostics(const PolarizationParams &params, const ArrayConfig &cfg)
    {
        params.validate();
        const int h = cfg.half_elements();
        OmegaGammaBasis out{CMat::Zero(2 * h, h), CMat::Zero(2 * h, h)};
        for (int l = 0; l < h; ++l)
        {
            out.omega(l, l) = -std::conj(params.rho_ph());
            out.omega(h + l, l) = std::conj(params.rho_pv());
            out.gamma(l, l) = params.rho_pv();
            out.gamma(h + l, l) = params.rho_ph();
        }
        return out;
    }

    inline double squared_error(const PatternVector &ideal, const PatternVector &g)
    {
        require(ideal.gains.size() == g.gains.size(), "squared_error: pattern lengths differ");
        require(ideal.grid == g.grid, "squared_error: patterns use different grids");
        return (ideal.gains - g.gains).squaredNorm();
    }

    // Correlation objective |sqrt(G) a^H D^H mu|^2 / |D^H mu|^2 of the closed form
    inline double correlation_objective(const CVec &c_single, const CVec &ideal_amplitude, const SteeringMatrices &d)
    {
        const CVec r = d.full.adjoint() * c_single;
        return std::norm(ideal_amplitude.dot(r)) / r.squaredNorm();
    }

    // omp:         greedy OMP over the stacked-UPA dictionary (lossy for N < M)
    // phase_split: exact two-chain decomposition of the closed form
    enum class HybridMethod
    {
        omp,
        phase_split,
    };

    inline std::string to_string(HybridMethod m)
    {
        return m == HybridMethod::omp ? "omp" : "phase_split";
    }

    inline HybridMethod hybrid_method_from_string(const std::string &s)
    {
        if (s == "omp")
            return HybridMethod::omp;
        if (s == "phase_split")
            return HybridMethod::phase_split;
        throw std::invalid_argument("unknown hybrid method '" + s + "' (expected omp or phase_split)");
    }

    struct DesignOptions
    {
        CandidateFamily family = CandidateFamily::elementwise;
        int b_grid = 3;
        int n_rf = 4;
        int oversample_h = 2;
        int oversample_v = 2;
        int pol_phases = 4;
        int hybrid_shortlist = 128; // closed-form pairs factorized, lowest closed-form SE first
        HybridMethod hybrid = HybridMethod::phase_split;

        void validate() const
        {
            require(b_grid >= 1, "design.b_grid must be >= 1");
            require(n_rf >= 1, "design.n_rf must be >= 1");
            require(oversample_h >= 1, "design.oversample_h must be >= 1");
            require(oversample_v >= 1, "design.oversample_v must be >= 1");
            require(pol_phases >= 1, "design.pol_phases must be >= 1");
            require(hybrid_shortlist >= 1, "design.hybrid_shortlist must be >= 1");
            require(hybrid != HybridMethod::phase_split || n_rf >= 2, "design.n_rf must be >= 2 for phase_split");
        }
    };

    struct DesignedCodeword
    {
        int p = 1;
        int q = 1;
        CVec c;                         // unit-norm hybrid codeword F v
        HybridBeamformer hybrid;
        PhaseVectorCandidate candidate; // selected (q_Lh, q_Lv)
        double se = 0.0;                // SE of the hybrid codeword vs the ideal pattern
        double closed_form_se = 0.0;    // SE of the unconstrained closed form for the same candidate
    };

    // Everything shared between the regions of one design run
    class DesignContext
    {
    public:
        DesignContext(const RegionGrid &grid, const PolarizationParams &params, const ArrayConfig &cfg,
                      const DesignOptions &options)
            : grid_(grid), params_(params), cfg_(cfg), options_(options)
        {
            grid.validate();
            params.validate();
            cfg.validate();
            options.validate();
            steering_ = build_steering_matrices(grid, cfg);
            if (options.hybrid == HybridMethod::omp)
                dictionary_ = build_dictionary(cfg, options.oversample_h, options.oversample_v, options.pol_phases);
            cand_h_ = candidate_phase_vectors(options.family, options.b_grid, grid.l_h);
            cand_v_ = candidate_phase_vectors(options.family, options.b_grid, grid.l_v);
        }

        const RegionGrid &grid() const { return grid_; }
        const PolarizationParams &params() const { return params_; }
        const ArrayConfig &array() const { return cfg_; }
        const DesignOptions &options() const { return options_; }
        const SteeringMatrices &steering() const { return steering_; }
        const AnalogDictionary &dictionary() const { return dictionary_; }
        std::size_t h_candidates() const { return cand_h_.size(); }
        std::size_t v_candidates() const { return cand_v_.size(); }
        std::size_t pair_count() const { return cand_h_.size() * cand_v_.size(); }

        PhaseVectorCandidate candidate(int ih, int iv) const
        {
            return {cand_h_.at(static_cast<std::size_t>(ih)), cand_v_.at(static_cast<std::size_t>(iv)), ih, iv};
        }

        // Closed-form SE of every candidate pair, row-major (ih outer), via the separable pattern
        // |D^H c_single|^2 = g_h (x) g_v of the closed form.
        std::vector<double> closed_form_se_table(int p, int q) const
        {
            grid_.check_region(p, q);
            const double g = ideal_gain(grid_, cfg_);
            const auto sh = axis_stats(cand_h_, steering_.h, steering_.region_h(p), (p - 1) * grid_.l_h, grid_.l_h);
            const auto sv = axis_stats(cand_v_, steering_.v, steering_.region_v(q), (q - 1) * grid_.l_v, grid_.l_v);
            const double base = g * g * grid_.sections_per_region();
            std::vector<double> out;
            out.reserve(pair_count());
            for (const auto &[in_h, sq_h] : sh)
                for (const auto &[in_v, sq_v] : sv)
                    out.push_back(std::max(0.0, base - 2.0 * g * in_h * in_v + sq_h * sq_v));
            return out;
        }

    private:
        // Per candidate: (in-region power, sum of squared powers) of the normalized axis pattern
        static std::vector<std::pair<double, double>> axis_stats(const std::vector<CVec> &cands, const CMat &d_axis,
                                                                 const CMat &d_region, int first, int len)
        {
            std::vector<std::pair<double, double>> out;
            out.reserve(cands.size());
            for (const auto &qv : cands)
            {
                const CVec x = d_region * qv;
                const double n2 = x.squaredNorm();
                if (!(n2 > 0.0))
                {
                    out.emplace_back(0.0, 0.0);
                    continue;
                }
                const RVec g = (d_axis.adjoint() * x).cwiseAbs2() / n2;
                out.emplace_back(g.segment(first, len).sum(), g.squaredNorm());
            }
            return out;
        }

        RegionGrid grid_;
        PolarizationParams params_;
        ArrayConfig cfg_;
        DesignOptions options_;
        SteeringMatrices steering_;
        AnalogDictionary dictionary_;
        std::vector<CVec> cand_h_;
        std::vector<CVec> cand_v_;
    };

    struct CandidateEvaluation
    {
        PhaseVectorCandidate candidate;
        CVec closed_form;  // dual-pol closed form
        HybridBeamformer hybrid;
        CVec c;            // normalized hybrid codeword
        double closed_form_se = 0.0;
        double se = 0.0;
    };

    // Closed form, hybrid factorization and hybrid SE of one candidate pair
    inline CandidateEvaluation evaluate_candidate(const DesignContext &ctx, int p, int q, int ih, int iv)
    {
        CandidateEvaluation e;
        e.candidate = ctx.candidate(ih, iv);
        const auto ideal = ideal_pattern_vector(p, q, ctx.grid(), ctx.array());
        const CVec cs = single_pol_beamformer(e.candidate, p, q, ctx.steering());
        e.closed_form = dual_pol_beamformer(cs, ctx.params());
        e.closed_form_se = squared_error(ideal, pattern_vector(e.closed_form, ctx.steering(), ctx.params(), ctx.array()));
        e.hybrid = ctx.options().hybrid == HybridMethod::omp
                       ? omp_factorize(e.closed_form, ctx.dictionary(), ctx.options().n_rf)
                       : phase_split_factorize(e.closed_form, ctx.options().n_rf);
        e.c = e.hybrid.codeword();
        e.c /= e.c.norm();
        e.se = squared_error(ideal, pattern_vector(e.c, ctx.steering(), ctx.params(), ctx.array()));
        return e;
    }

    // Pair indices (ih * n_v + iv) sent to the hybrid step: the `hybrid_shortlist` lowest closed-form SEs,
    // ties by lower pair index; returned in ascending pair-index order.
    inline std::vector<std::size_t> shortlist_pairs(const std::vector<double> &closed_form_se, std::size_t k)
    {
        using Entry = std::pair<double, std::size_t>;
        std::priority_queue<Entry> heap; // max-heap on (se, index)
        for (std::size_t i = 0; i < closed_form_se.size(); ++i)
        {
            const Entry e{closed_form_se[i], i};
            if (heap.size() < k)
                heap.push(e);
            else if (e < heap.top())
            {
                heap.pop();
                heap.push(e);
            }
        }
        std::vector<std::size_t> out;
        out.reserve(heap.size());
        for (; !heap.empty(); heap.pop())
            out.push_back(heap.top().second);
        std::sort(out.begin(), out.end());
        return out;
    }

    inline DesignedCodeword design_region_codeword(const DesignContext &ctx, int p, int q)
    {
        ctx.grid().check_region(p, q);
        const auto pairs = shortlist_pairs(ctx.closed_form_se_table(p, q),
                                           static_cast<std::size_t>(ctx.options().hybrid_shortlist));
        const std::size_t n_v = ctx.v_candidates();

        DesignedCodeword best;
        bool have = false;
        for (std::size_t idx : pairs)
        {
            auto e = evaluate_candidate(ctx, p, q, static_cast<int>(idx / n_v), static_cast<int>(idx % n_v));
            if (have && !(e.se < best.se))
                continue;
            best.p = p;
            best.q = q;
            best.c = std::move(e.c);
            best.hybrid = std::move(e.hybrid);
            best.candidate = std::move(e.candidate);
            best.se = e.se;
            best.closed_form_se = e.closed_form_se;
            have = true;
        }
        return best;
    }

    inline DesignedCodeword design_region_codeword(int p, int q, const RegionGrid &grid, const PolarizationParams &params,
                                                   const ArrayConfig &cfg, const DesignOptions &options = {})
    {
        return design_region_codeword(DesignContext(grid, params, cfg, options), p, q);
    }

    // One codeword per region, p-major then q
    inline std::vector<DesignedCodeword> design_codebook(const DesignContext &ctx)
    {
        std::vector<DesignedCodeword> out;
        out.reserve(static_cast<std::size_t>(ctx.grid().regions()));
        for (int p = 1; p <= ctx.grid().q_h; ++p)
            for (int q = 1; q <= ctx.grid().q_v; ++q)
                out.push_back(design_region_codeword(ctx, p, q));
        return out;
    }

    inline std::vector<DesignedCodeword> design_codebook(const RegionGrid &grid, const PolarizationParams &params,
                                                         const ArrayConfig &cfg, const DesignOptions &options = {})
    {
        return design_codebook(DesignContext(grid, params, cfg, options));
    }
}
