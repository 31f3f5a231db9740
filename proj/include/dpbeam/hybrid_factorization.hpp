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

#include <algorithm>
#include <vector>

namespace dpbeam
{
    // Fully connected hybrid beamformer c = F v
    struct HybridBeamformer
    {
        CMat f_analog;   // M x N, entries (1/sqrt(M)) e^{j tau}
        CVec v_digital;  // N
        std::vector<int> atoms;            // dictionary columns chosen, in selection order
        std::vector<double> residual_norms; // |target - F v| after each selection (before final scaling)

        CVec codeword() const { return f_analog * v_digital; }
    };

    struct AnalogDictionary
    {
        CMat columns; // M x size
        int oversample_h = 1;
        int oversample_v = 1;
        int pol_phases = 1;

        Eigen::Index size() const { return columns.cols(); }
    };

    // Atoms (1/sqrt 2)[a; e^{j beta} a]: a over a (o_h M_h) x (o_v M_v) unpaired-frequency grid on
    // [-pi,pi)^2, beta over pol_phases uniform phases. Order: psi_h outer, psi_v, beta inner.
    inline AnalogDictionary build_dictionary(const ArrayConfig &cfg, int oversample_h = 2, int oversample_v = 2,
                                             int pol_phases = 4)
    {
        cfg.validate();
        require(oversample_h >= 1 && oversample_v >= 1, "build_dictionary: oversampling must be >= 1");
        require(pol_phases >= 1, "build_dictionary: pol_phases must be >= 1");

        const int nh = oversample_h * cfg.m_h, nv = oversample_v * cfg.m_v;
        const int half = cfg.half_elements();
        AnalogDictionary dict{CMat(cfg.total_elements(), static_cast<Eigen::Index>(nh) * nv * pol_phases),
                              oversample_h, oversample_v, pol_phases};
        Eigen::Index col = 0;
        for (int ih = 0; ih < nh; ++ih)
        {
            const CVec ah = ula_response(-pi + 2.0 * pi * ih / nh, cfg.m_h);
            for (int iv = 0; iv < nv; ++iv)
            {
                const CVec a = kron(ah, ula_response(-pi + 2.0 * pi * iv / nv, cfg.m_v)) / sqrt2;
                for (int k = 0; k < pol_phases; ++k)
                {
                    dict.columns.col(col).head(half) = a;
                    dict.columns.col(col).tail(half) = std::polar(1.0, 2.0 * pi * k / pol_phases) * a;
                    ++col;
                }
            }
        }
        return dict;
    }

    // Two unit-modulus atoms f1, f2 (entries (1/sqrt M) e^{j(arg t_m +- alpha_m)}) whose sum spans
    // the target exactly: t = s sqrt(M) (f1 + f2) with s = max|t_m| / 2 and cos(alpha_m) = |t_m| / 2s.
    inline CMat phase_split_atoms(const CVec &target)
    {
        const Eigen::Index m = target.size();
        require(m >= 1, "phase_split_atoms: empty target");
        const double s = 0.5 * target.cwiseAbs().maxCoeff();
        if (!(s > 0.0))
            throw numerical_error("phase_split_atoms: zero target");
        const double scale = 1.0 / std::sqrt(static_cast<double>(m));
        CMat atoms(m, 2);
        for (Eigen::Index i = 0; i < m; ++i)
        {
            const double alpha = std::acos(std::clamp(std::abs(target(i)) / (2.0 * s), 0.0, 1.0));
            const double theta = std::arg(target(i));
            atoms(i, 0) = std::polar(scale, theta + alpha);
            atoms(i, 1) = std::polar(scale, theta - alpha);
        }
        return atoms;
    }

    // Orthogonal matching pursuit over the analog dictionary.
    //
    // Each step adds the unused atom with the largest |correlation| against the residual
    // (lowest index on ties), then re-solves the digital weights by least squares (pivoted QR)
    // over all chosen atoms. The returned v is scaled so that |F v| = 1.
    inline HybridBeamformer omp_factorize(const CVec &target, const AnalogDictionary &dict, int n_rf)
    {
        const Eigen::Index n_dict = dict.size();
        require(n_rf >= 1, "omp_factorize: n_rf must be >= 1");
        require(n_dict >= n_rf, "omp_factorize: dictionary smaller than n_rf");
        require(target.size() == dict.columns.rows(), "omp_factorize: target length does not match dictionary");

        HybridBeamformer out;
        out.f_analog.resize(target.size(), n_rf);
        std::vector<bool> used(static_cast<std::size_t>(n_dict), false);
        CVec residual = target;
        CVec v;

        for (int step = 0; step < n_rf; ++step)
        {
            const RVec corr = (dict.columns.adjoint() * residual).cwiseAbs();
            Eigen::Index best = -1;
            double best_val = -1.0;
            for (Eigen::Index j = 0; j < n_dict; ++j)
                if (!used[static_cast<std::size_t>(j)] && corr(j) > best_val)
                {
                    best_val = corr(j);
                    best = j;
                }
            if (best < 0)
                throw numerical_error("omp_factorize: no atom left to select");
            used[static_cast<std::size_t>(best)] = true;
            out.atoms.push_back(static_cast<int>(best));
            out.f_analog.col(step) = dict.columns.col(best);

            const CMat f = out.f_analog.leftCols(step + 1);
            v = f.colPivHouseholderQr().solve(target);
            residual = target - f * v;
            out.residual_norms.push_back(residual.norm());
        }

        const double n = (out.f_analog * v).norm();
        if (!(n > 0.0))
            throw numerical_error("omp_factorize: hybrid codeword vanished");
        out.v_digital = v / n;
        return out;
    }

    // Exact factorization on two RF chains: F = [f1 f2 pad...], v = [s, s, 0...] up to scaling.
    // Unused chains get the all-(1/sqrt M) analog vector and zero digital weight.
    // atoms are reported as -1 (not dictionary columns).
    inline HybridBeamformer phase_split_factorize(const CVec &target, int n_rf)
    {
        require(n_rf >= 2, "phase_split_factorize: needs at least 2 RF chains");
        const Eigen::Index m = target.size();
        const CMat split = phase_split_atoms(target);

        HybridBeamformer out;
        out.f_analog = CMat::Constant(m, n_rf, cplx(1.0 / std::sqrt(static_cast<double>(m)), 0.0));
        out.f_analog.leftCols(2) = split;
        out.v_digital = CVec::Zero(n_rf);
        out.v_digital.head(2).setConstant(cplx(1.0, 0.0));
        const double n = out.codeword().norm();
        if (!(n > 0.0))
            throw numerical_error("phase_split_factorize: hybrid codeword vanished");
        out.v_digital /= n;
        out.atoms.assign(2, -1);
        const CVec t = target / target.norm();
        out.residual_norms.push_back((t - out.codeword()).norm());
        return out;
    }
}
