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

#include "array_geometry.hpp"
#include "polarization_channel.hpp"

namespace dpbeam
{
    // Section-sampled beam pattern, ordered like the columns of D
    struct PatternVector
    {
        RVec gains;
        RegionGrid grid;

        // Entries of region (p,q), in D order
        RVec region(int p, int q) const
        {
            const auto cols = grid.region_columns(p, q);
            RVec out(static_cast<Eigen::Index>(cols.size()));
            for (std::size_t i = 0; i < cols.size(); ++i)
                out(static_cast<Eigen::Index>(i)) = gains(cols[i]);
            return out;
        }
    };

    // Flat gain G = Q sqrt(2) / (M_h M_v) of the ideal pattern
    inline double ideal_gain(const RegionGrid &grid, const ArrayConfig &cfg)
    {
        return grid.regions() * sqrt2 / (static_cast<double>(cfg.m_h) * cfg.m_v);
    }

    // Area of one region, 2 sqrt(2) pi^2 / Q
    inline double region_area(const RegionGrid &grid) { return 2.0 * sqrt2 * pi * pi / grid.regions(); }

    // Single-polarization equivalent u = b (rho_pv^* c'_1 + rho_ph^* c'_2) with c' = R(phi)^H c.
    // Every reference gain of c is |d^H u|^2 for the matching steering vector d.
    inline CVec polarization_projection(const CVec &c, const PolarizationParams &params)
    {
        const CVec cp = rotate_adjoint(params.phi, c);
        const Eigen::Index h = c.size() / 2;
        return params.b() * (std::conj(params.rho_pv()) * cp.head(h) + std::conj(params.rho_ph()) * cp.tail(h));
    }

    inline double reference_gain(const SpatialFrequency &sf, const CVec &c, const PolarizationParams &params,
                                 const ArrayConfig &cfg)
    {
        require(c.size() == cfg.total_elements(), "reference_gain: codeword length must equal M");
        require_unit_norm(c, "reference_gain");
        const CVec d = upa_response_unpaired(sf, cfg);
        return std::norm(d.dot(polarization_projection(c, params)));
    }

    // |D^H u|^2 using the Kronecker structure of D
    inline RVec steered_power(const CVec &u, const SteeringMatrices &d)
    {
        const Eigen::Index mh = d.h.rows(), mv = d.v.rows();
        Eigen::Map<const CMat> u_mat(u.data(), mv, mh); // u_mat(iv, ih) = u(ih*mv + iv)
        const CMat y = d.v.adjoint() * u_mat * d.h.conjugate();
        return Eigen::Map<const CVec>(y.data(), y.size()).cwiseAbs2();
    }

    inline PatternVector pattern_vector(const CVec &c, const SteeringMatrices &d, const PolarizationParams &params,
                                        const ArrayConfig &cfg)
    {
        require(c.size() == cfg.total_elements(), "pattern_vector: codeword length must equal M");
        require_unit_norm(c, "pattern_vector");
        return {steered_power(polarization_projection(c, params), d), d.grid};
    }

    inline PatternVector pattern_vector(const CVec &c, const RegionGrid &grid, const PolarizationParams &params,
                                        const ArrayConfig &cfg)
    {
        return pattern_vector(c, build_steering_matrices(grid, cfg), params, cfg);
    }

    // G on the sections of region (p,q), zero elsewhere
    inline PatternVector ideal_pattern_vector(int p, int q, const RegionGrid &grid, const ArrayConfig &cfg)
    {
        PatternVector out{RVec::Zero(grid.total_sections()), grid};
        const double g = ideal_gain(grid, cfg);
        for (int col : grid.region_columns(p, q))
            out.gains(col) = g;
        return out;
    }

    // Reference gain on an n_h x n_v raster of cell midpoints over the design range
    // (-pi,pi) x (-pi/sqrt2, pi/sqrt2). gain(i, k) belongs to (psi_h(i), psi_v(k)).
    struct PatternRaster
    {
        RVec psi_h;
        RVec psi_v;
        RMat gain;
    };

    inline PatternRaster pattern_raster(const CVec &c, const PolarizationParams &params, const ArrayConfig &cfg,
                                        int n_h = 257, int n_v = 257)
    {
        require(n_h >= 1 && n_v >= 1, "pattern_raster: raster size must be >= 1");
        require(c.size() == cfg.total_elements(), "pattern_raster: codeword length must equal M");
        require_unit_norm(c, "pattern_raster");

        PatternRaster out;
        out.psi_h.resize(n_h);
        out.psi_v.resize(n_v);
        CMat dh(cfg.m_h, n_h), dv(cfg.m_v, n_v);
        for (int i = 0; i < n_h; ++i)
        {
            out.psi_h(i) = -pi + (i + 0.5) * 2.0 * pi / n_h;
            dh.col(i) = ula_response(out.psi_h(i), cfg.m_h);
        }
        for (int k = 0; k < n_v; ++k)
        {
            out.psi_v(k) = -psi_v_half_range + (k + 0.5) * 2.0 * psi_v_half_range / n_v;
            dv.col(k) = ula_response(out.psi_v(k), cfg.m_v);
        }
        const CVec u = polarization_projection(c, params);
        Eigen::Map<const CMat> u_mat(u.data(), cfg.m_v, cfg.m_h);
        out.gain = (dh.adjoint() * u_mat.transpose() * dv.conjugate()).cwiseAbs2();
        return out;
    }

    // Midpoint-rule integral of g_ref over [-pi,pi]^2 with n x n nodes
    inline double integral_reference_gain(const CVec &c, const PolarizationParams &params, const ArrayConfig &cfg,
                                          int quadrature_n = 401)
    {
        require(quadrature_n >= 64, "integral_reference_gain: quadrature_n must be >= 64");
        require(c.size() == cfg.total_elements(), "integral_reference_gain: codeword length must equal M");
        require_unit_norm(c, "integral_reference_gain");

        const CVec u = polarization_projection(c, params);
        Eigen::Map<const CMat> u_mat(u.data(), cfg.m_v, cfg.m_h);
        const double step = 2.0 * pi / quadrature_n;

        CMat dv(cfg.m_v, quadrature_n);
        for (int k = 0; k < quadrature_n; ++k)
            dv.col(k) = ula_response(-pi + (k + 0.5) * step, cfg.m_v);

        double total = 0.0;
        for (int i = 0; i < quadrature_n; ++i)
        {
            const CVec dh = ula_response(-pi + (i + 0.5) * step, cfg.m_h);
            const CVec row = u_mat * dh.conjugate(); // length m_v
            total += (dv.adjoint() * row).cwiseAbs2().sum();
        }
        return total * step * step;
    }

    // (2 pi)^2 / (M_h M_v)
    inline double reference_gain_integral_bound(const ArrayConfig &cfg)
    {
        return 4.0 * pi * pi / (static_cast<double>(cfg.m_h) * cfg.m_v);
    }

    // Unit-norm member of the family attaining the integral bound: R(phi) b [rho_pv x; rho_ph x] / |x|
    inline CVec equality_family_codeword(const CVec &x, const PolarizationParams &params)
    {
        const double n = x.norm();
        if (!(n > 0.0))
            throw numerical_error("equality_family_codeword: zero combination vector");
        CVec stacked(2 * x.size());
        stacked.head(x.size()) = params.rho_pv() * x / n;
        stacked.tail(x.size()) = params.rho_ph() * x / n;
        return rotate(params.phi, params.b() * stacked);
    }

    // log2(1 + snr |h|^2 G)
    inline double rate_upper_bound(double snr_linear, double h_norm_sq, const RegionGrid &grid, const ArrayConfig &cfg)
    {
        require(snr_linear >= 0.0, "rate_upper_bound: snr must be >= 0");
        require(h_norm_sq >= 0.0, "rate_upper_bound: |h|^2 must be >= 0");
        return std::log2(1.0 + snr_linear * h_norm_sq * ideal_gain(grid, cfg));
    }
}
