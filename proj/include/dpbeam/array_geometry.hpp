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

#include <vector>

namespace dpbeam
{
    // Uniform planar array of m_h x m_v dual-polarized elements
    struct ArrayConfig
    {
        int m_h = 1;
        int m_v = 1;
        double d_h_over_lambda = 0.5;
        double d_v_over_lambda = 0.5;

        int half_elements() const { return m_h * m_v; }     // elements per polarization, M/2
        int total_elements() const { return 2 * m_h * m_v; } // M

        void validate() const
        {
            require(m_h >= 1, "array.m_h must be >= 1");
            require(m_v >= 1, "array.m_v must be >= 1");
            require(d_h_over_lambda > 0.0 && std::isfinite(d_h_over_lambda), "array.d_h_over_lambda must be positive");
            require(d_v_over_lambda > 0.0 && std::isfinite(d_v_over_lambda), "array.d_v_over_lambda must be positive");
        }

        bool operator==(const ArrayConfig &) const = default;
    };

    // Unpaired horizontal / vertical spatial frequencies in radians
    struct SpatialFrequency
    {
        double psi_h = 0.0;
        double psi_v = 0.0;

        bool in_design_range() const
        {
            return psi_h > -pi && psi_h < pi && psi_v > -psi_v_half_range && psi_v < psi_v_half_range;
        }
    };

    // Quantization of the frequency rectangle into q_h x q_v regions, each split into l_h x l_v sections
    struct RegionGrid
    {
        int q_h = 1;
        int q_v = 1;
        int l_h = 1;
        int l_v = 1;

        int regions() const { return q_h * q_v; }
        int sections_per_region() const { return l_h * l_v; }
        int total_sections() const { return regions() * sections_per_region(); }
        int h_sections() const { return q_h * l_h; }
        int v_sections() const { return q_v * l_v; }

        void validate() const
        {
            require(q_h >= 1, "grid.q_h must be >= 1");
            require(q_v >= 1, "grid.q_v must be >= 1");
            require(l_h >= 1, "grid.l_h must be >= 1");
            require(l_v >= 1, "grid.l_v must be >= 1");
        }

        void check_region(int p, int q) const
        {
            if (p < 1 || p > q_h || q < 1 || q > q_v)
                throw std::invalid_argument("region (" + std::to_string(p) + "," + std::to_string(q) +
                                            ") outside grid " + std::to_string(q_h) + "x" + std::to_string(q_v));
        }

        // Column of D = D_h (x) D_v for horizontal section ih and vertical section iv (both 0-based, global)
        int column(int ih, int iv) const { return ih * v_sections() + iv; }

        // Columns of D that belong to region (p,q), in D order
        std::vector<int> region_columns(int p, int q) const
        {
            check_region(p, q);
            std::vector<int> cols;
            cols.reserve(static_cast<std::size_t>(sections_per_region()));
            for (int lh = 0; lh < l_h; ++lh)
                for (int lv = 0; lv < l_v; ++lv)
                    cols.push_back(column((p - 1) * l_h + lh, (q - 1) * l_v + lv));
            return cols;
        }

        bool operator==(const RegionGrid &) const = default;
    };

    // Half-open interval [lo, hi)
    struct Interval
    {
        double lo = 0.0;
        double hi = 0.0;

        bool contains(double x) const { return x >= lo && x < hi; }
        double width() const { return hi - lo; }
    };

    struct RegionBounds
    {
        Interval psi_h;
        Interval psi_v;

        double area() const { return psi_h.width() * psi_v.width(); }
        bool contains(const SpatialFrequency &sf) const { return psi_h.contains(sf.psi_h) && psi_v.contains(sf.psi_v); }
    };

    // ULA response (1/sqrt(m)) [1, e^{j psi}, ..., e^{j psi (m-1)}]^T
    inline CVec ula_response(double psi, int m)
    {
        require(m >= 1, "ula_response: element count must be >= 1");
        require(std::isfinite(psi), "ula_response: spatial frequency must be finite");
        CVec out(m);
        const double scale = 1.0 / std::sqrt(static_cast<double>(m));
        for (int k = 0; k < m; ++k)
            out(k) = std::polar(scale, psi * k);
        return out;
    }

    // d_h(psi_h) (x) d_v(psi_v), length m_h * m_v
    inline CVec upa_response_unpaired(const SpatialFrequency &sf, const ArrayConfig &cfg)
    {
        return kron(ula_response(sf.psi_h, cfg.m_h), ula_response(sf.psi_v, cfg.m_v));
    }

    // Physical (paired) UPA response a_h(az, el) (x) a_v(el)
    inline CVec upa_response_paired(double theta_az, double theta_el, const ArrayConfig &cfg)
    {
        if (!(theta_az > -pi / 2 && theta_az < pi / 2) || !(theta_el > -pi / 4 && theta_el < pi / 4))
            throw std::invalid_argument("upa_response_paired: angles outside the (-pi/2,pi/2) x (-pi/4,pi/4) sector");
        const double psi_h = 2.0 * pi * cfg.d_h_over_lambda * std::sin(theta_az) * std::cos(theta_el);
        const double psi_v = 2.0 * pi * cfg.d_v_over_lambda * std::sin(theta_el);
        return kron(ula_response(psi_h, cfg.m_h), ula_response(psi_v, cfg.m_v));
    }

    // Bounds of region B^(p,q); p, q are 1-based
    inline RegionBounds region_bounds(int p, int q, const RegionGrid &grid)
    {
        grid.check_region(p, q);
        RegionBounds b;
        b.psi_h = {-pi + 2.0 * pi * (p - 1) / grid.q_h, -pi + 2.0 * pi * p / grid.q_h};
        b.psi_v = {-psi_v_half_range + 2.0 * pi * (q - 1) / (sqrt2 * grid.q_v),
                   -psi_v_half_range + 2.0 * pi * q / (sqrt2 * grid.q_v)};
        return b;
    }

    // Center of global horizontal section ih (0-based) on the D_h lattice
    inline double h_section_center(int ih, const RegionGrid &grid)
    {
        const double n = grid.h_sections();
        return -pi + pi / n + 2.0 * pi * ih / n;
    }

    inline double v_section_center(int iv, const RegionGrid &grid)
    {
        const double n = grid.v_sections();
        return -psi_v_half_range + pi / (sqrt2 * n) + 2.0 * pi * iv / (sqrt2 * n);
    }

    // Section centers of region (p,q), psi_h outer / psi_v inner (matches D = D_h (x) D_v)
    inline std::vector<SpatialFrequency> section_centers(int p, int q, const RegionGrid &grid)
    {
        grid.check_region(p, q);
        std::vector<SpatialFrequency> out;
        out.reserve(static_cast<std::size_t>(grid.sections_per_region()));
        for (int lh = 0; lh < grid.l_h; ++lh)
            for (int lv = 0; lv < grid.l_v; ++lv)
                out.push_back({h_section_center((p - 1) * grid.l_h + lh, grid),
                               v_section_center((q - 1) * grid.l_v + lv, grid)});
        return out;
    }

    // Center of the whole region (p,q)
    inline SpatialFrequency region_center(int p, int q, const RegionGrid &grid)
    {
        const auto b = region_bounds(p, q, grid);
        return {0.5 * (b.psi_h.lo + b.psi_h.hi), 0.5 * (b.psi_v.lo + b.psi_v.hi)};
    }

    // Section-steering matrices D_h (m_h x Q_h L_h), D_v (m_v x Q_v L_v) and D = D_h (x) D_v
    struct SteeringMatrices
    {
        CMat h;
        CMat v;
        CMat full;
        RegionGrid grid;

        // D_{h,p}: the L_h columns of D_h that fall in horizontal region p
        CMat region_h(int p) const { return h.middleCols((p - 1) * grid.l_h, grid.l_h); }
        CMat region_v(int q) const { return v.middleCols((q - 1) * grid.l_v, grid.l_v); }
    };

    inline SteeringMatrices build_steering_matrices(const RegionGrid &grid, const ArrayConfig &cfg)
    {
        grid.validate();
        cfg.validate();
        SteeringMatrices s;
        s.grid = grid;
        s.h.resize(cfg.m_h, grid.h_sections());
        for (int i = 0; i < grid.h_sections(); ++i)
            s.h.col(i) = ula_response(h_section_center(i, grid), cfg.m_h);
        s.v.resize(cfg.m_v, grid.v_sections());
        for (int i = 0; i < grid.v_sections(); ++i)
            s.v.col(i) = ula_response(v_section_center(i, grid), cfg.m_v);
        s.full = kron(s.h, s.v);
        return s;
    }
}
