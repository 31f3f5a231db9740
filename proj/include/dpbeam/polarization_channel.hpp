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
#include "random.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace dpbeam
{
    // XPD, orientation difference and complex gains of a dual-polarized link
    struct PolarizationParams
    {
        double chi = 0.3;     // cross-polarization discrimination, in [0,1]
        double phi = pi / 4;  // orientation difference [rad]
        cplx zeta_vv = 1.0;
        cplx zeta_hv = 1.0;

        cplx rho_pv() const { return std::sqrt(1.0 / (1.0 + chi)) * zeta_vv; }
        cplx rho_ph() const { return std::sqrt(chi / (1.0 + chi)) * zeta_hv; }

        // b = (|rho_pv|^2 + |rho_ph|^2)^(-1/2)
        double b() const
        {
            const double s = std::norm(rho_pv()) + std::norm(rho_ph());
            if (!(s > 0.0))
                throw std::invalid_argument("polarization: zeta_vv and zeta_hv cannot both be zero");
            return 1.0 / std::sqrt(s);
        }

        void validate() const
        {
            require(chi >= 0.0 && chi <= 1.0, "polarization.chi must lie in [0,1]");
            require(std::isfinite(phi), "polarization.phi must be finite");
            require(std::norm(zeta_vv) + std::norm(zeta_hv) > 0.0, "polarization: zeta_vv and zeta_hv cannot both be zero");
        }
    };

    // R(phi) = [cos -sin; sin cos] (x) I_{m_half}
    inline CMat givens_rotation(double phi, int m_half)
    {
        require(m_half >= 1, "givens_rotation: m_half must be >= 1");
        const double c = std::cos(phi), s = std::sin(phi);
        CMat r = CMat::Zero(2 * m_half, 2 * m_half);
        for (int i = 0; i < m_half; ++i)
        {
            r(i, i) = c;
            r(i, m_half + i) = -s;
            r(m_half + i, i) = s;
            r(m_half + i, m_half + i) = c;
        }
        return r;
    }

    // R(phi) x without forming R
    inline CVec rotate(double phi, const CVec &x)
    {
        const Eigen::Index h = x.size() / 2;
        const double c = std::cos(phi), s = std::sin(phi);
        CVec out(x.size());
        out.head(h) = c * x.head(h) - s * x.tail(h);
        out.tail(h) = s * x.head(h) + c * x.tail(h);
        return out;
    }

    // R(phi)^H x
    inline CVec rotate_adjoint(double phi, const CVec &x) { return rotate(-phi, x); }

    // R(phi) [rho_pv a; rho_ph a] for the paired response a(az, el)
    inline CVec los_component(double theta_az, double theta_el, const PolarizationParams &params, const ArrayConfig &cfg)
    {
        const CVec a = upa_response_paired(theta_az, theta_el, cfg);
        CVec stacked(2 * a.size());
        stacked.head(a.size()) = params.rho_pv() * a;
        stacked.tail(a.size()) = params.rho_ph() * a;
        return rotate(params.phi, stacked);
    }

    struct ChannelConfig
    {
        double k_factor = db_to_linear(13.2); // linear Rician K
        int n_nlos = 3;
        double phi_nominal = pi / 4;
        double phi_jitter = pi / 36; // half-width of the uniform perturbation
        Interval theta_az{-pi / 2, pi / 2};
        Interval theta_el{-pi / 4, pi / 4};
        std::optional<std::pair<double, double>> fixed_los; // (az, el); drawn when empty

        void validate() const
        {
            require(k_factor >= 0.0, "channel.k_factor must be >= 0");
            require(n_nlos >= 0, "channel.n_nlos must be >= 0");
            require(phi_jitter >= 0.0, "channel.phi_jitter must be >= 0");
            require(theta_az.lo >= -pi / 2 && theta_az.hi <= pi / 2 && theta_az.lo < theta_az.hi,
                    "channel.theta_az must lie within (-pi/2, pi/2)");
            require(theta_el.lo >= -pi / 4 && theta_el.hi <= pi / 4 && theta_el.lo < theta_el.hi,
                    "channel.theta_el must lie within (-pi/4, pi/4)");
        }
    };

    struct PathDraw
    {
        double theta_az = 0.0;
        double theta_el = 0.0;
        cplx zeta_vv;
        cplx zeta_hv;
    };

    struct ChannelRealization
    {
        CVec h;
        PathDraw los;
        std::vector<PathDraw> nlos;
        double phi_drawn = 0.0;
    };

    // Draws one dual-polarized Rician MISO channel.
    //
    // Draw order (fixed): phi, LOS angles, LOS gains, then per NLOS path its angles and gains.
    // NLOS paths reuse the LOS form with shared chi and phi, summed with 1/sqrt(n_nlos).
    inline ChannelRealization sample_channel(const ChannelConfig &cfg, const PolarizationParams &base,
                                             const ArrayConfig &array, Rng &rng)
    {
        ChannelRealization out;
        out.phi_drawn = cfg.phi_jitter > 0.0 ? rng.uniform(cfg.phi_nominal - cfg.phi_jitter, cfg.phi_nominal + cfg.phi_jitter)
                                             : cfg.phi_nominal;

        auto draw_path = [&](bool fixed_angles) {
            PathDraw d;
            if (fixed_angles)
            {
                d.theta_az = cfg.fixed_los->first;
                d.theta_el = cfg.fixed_los->second;
            }
            else
            {
                d.theta_az = rng.uniform(cfg.theta_az.lo, cfg.theta_az.hi);
                d.theta_el = rng.uniform(cfg.theta_el.lo, cfg.theta_el.hi);
            }
            d.zeta_vv = rng.complex_gaussian();
            d.zeta_hv = rng.complex_gaussian();
            return d;
        };
        auto path_vector = [&](const PathDraw &d) {
            PolarizationParams p = base;
            p.phi = out.phi_drawn;
            p.zeta_vv = d.zeta_vv;
            p.zeta_hv = d.zeta_hv;
            return los_component(d.theta_az, d.theta_el, p, array);
        };

        out.los = draw_path(cfg.fixed_los.has_value());
        const CVec h_los = path_vector(out.los);

        CVec h_nlos = CVec::Zero(array.total_elements());
        for (int i = 0; i < cfg.n_nlos; ++i)
        {
            out.nlos.push_back(draw_path(false));
            h_nlos += path_vector(out.nlos.back());
        }
        if (cfg.n_nlos > 0)
            h_nlos /= std::sqrt(static_cast<double>(cfg.n_nlos));

        const double mm = array.half_elements();
        const double k = cfg.k_factor;
        if (std::isinf(k))
            out.h = std::sqrt(mm) * h_los;
        else
            out.h = std::sqrt(mm * k / (1.0 + k)) * h_los + std::sqrt(mm / (1.0 + k)) * h_nlos;
        return out;
    }
}
