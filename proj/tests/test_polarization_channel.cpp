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

#include <dpbeam/polarization_channel.hpp>

#include <gtest/gtest.h>

using namespace dpbeam;

TEST(PolarizationParams, DerivedQuantities)
{
    oracle::Rand r(21);
    for (int t = 0; t < 50; ++t)
    {
        PolarizationParams p{r.uni(0, 1), r.uni(-pi, pi), r.cgauss(), r.cgauss()};
        EXPECT_NEAR(std::abs(p.rho_pv() - std::sqrt(1 / (1 + p.chi)) * p.zeta_vv), 0.0, 1e-15);
        EXPECT_NEAR(std::abs(p.rho_ph() - std::sqrt(p.chi / (1 + p.chi)) * p.zeta_hv), 0.0, 1e-15);
        EXPECT_NEAR((std::norm(p.rho_pv()) + std::norm(p.rho_ph())) * p.b() * p.b(), 1.0, 1e-12);
    }
}

TEST(PolarizationParams, BothGainsZeroRejected)
{
    PolarizationParams p{0.3, 0.1, 0.0, 0.0};
    EXPECT_THROW(p.b(), std::invalid_argument);
    EXPECT_THROW(p.validate(), std::invalid_argument);
    EXPECT_THROW((PolarizationParams{1.5, 0, 1, 1}.validate()), std::invalid_argument);
}

TEST(GivensRotation, ZeroIsIdentity)
{
    EXPECT_LT((givens_rotation(0.0, 3) - CMat::Identity(6, 6)).norm(), 1e-15);
}

TEST(GivensRotation, QuarterTurnBlocks)
{
    const CMat r = givens_rotation(pi / 2, 2);
    CMat want = CMat::Zero(4, 4);
    want(0, 2) = want(1, 3) = -1.0;
    want(2, 0) = want(3, 1) = 1.0;
    EXPECT_LT((r - want).norm(), 1e-15);
}

TEST(GivensRotation, UnitaryAndMatchesRotate)
{
    oracle::Rand r(22);
    for (int t = 0; t < 20; ++t)
    {
        const double phi = r.uni(-2 * pi, 2 * pi);
        const CMat g = givens_rotation(phi, 5);
        EXPECT_LT((g.adjoint() * g - CMat::Identity(10, 10)).norm(), 1e-12);
        const CVec x = oracle::to_eigen(r.unit(10));
        EXPECT_LT((g * x - rotate(phi, x)).norm(), 1e-14);
        EXPECT_LT((g.adjoint() * x - rotate_adjoint(phi, x)).norm(), 1e-14);
    }
}

TEST(LosComponent, NoCrossPolNoRotation)
{
    const ArrayConfig cfg{3, 4};
    const cplx z(0.6, -0.8);
    const CVec h = los_component(0.3, 0.2, {0.0, 0.0, z, cplx(0.7, 0.1)}, cfg);
    const CVec a = upa_response_paired(0.3, 0.2, cfg);
    EXPECT_LT((h.head(12) - z * a).norm(), 1e-15);
    EXPECT_LT(h.tail(12).norm(), 1e-15);
}

TEST(LosComponent, QuarterTurnMovesToBottom)
{
    const ArrayConfig cfg{2, 3};
    const CVec h = los_component(-0.4, 0.1, {0.0, pi / 2, 1.0, 1.0}, cfg);
    const CVec a = upa_response_paired(-0.4, 0.1, cfg);
    EXPECT_LT(h.head(6).norm(), 1e-15);
    EXPECT_LT((h.tail(6) - a).norm(), 1e-15);
}

TEST(LosComponent, NormFormulaAndPhiInvariance)
{
    oracle::Rand r(23);
    const ArrayConfig cfg{4, 5};
    for (int t = 0; t < 50; ++t)
    {
        PolarizationParams p{r.uni(0, 1), r.uni(-pi, pi), r.cgauss(), r.cgauss()};
        const double az = r.uni(-1.5, 1.5), el = r.uni(-0.7, 0.7);
        const double want = (std::norm(p.zeta_vv) + p.chi * std::norm(p.zeta_hv)) / (1 + p.chi);
        EXPECT_NEAR(los_component(az, el, p, cfg).squaredNorm(), want, 1e-12);
        PolarizationParams p2 = p;
        p2.phi = r.uni(-pi, pi);
        EXPECT_NEAR(los_component(az, el, p2, cfg).norm(), los_component(az, el, p, cfg).norm(), 1e-12);
    }
}

TEST(SampleChannel, LargeKIsLos)
{
    const ArrayConfig arr{4, 4};
    ChannelConfig cfg;
    cfg.k_factor = 1e12;
    Rng rng(5);
    for (int t = 0; t < 20; ++t)
    {
        const auto ch = sample_channel(cfg, PolarizationParams{}, arr, rng);
        PolarizationParams p;
        p.phi = ch.phi_drawn;
        p.zeta_vv = ch.los.zeta_vv;
        p.zeta_hv = ch.los.zeta_hv;
        const CVec l = los_component(ch.los.theta_az, ch.los.theta_el, p, arr);
        const double cosang = std::abs(l.dot(ch.h)) / (l.norm() * ch.h.norm());
        EXPECT_LT(std::acos(std::min(1.0, cosang)), 1e-5);
    }
}

TEST(SampleChannel, ZeroKSingleNlos)
{
    const ArrayConfig arr{3, 2};
    ChannelConfig cfg;
    cfg.k_factor = 0.0;
    cfg.n_nlos = 1;
    Rng rng(6);
    const auto ch = sample_channel(cfg, PolarizationParams{}, arr, rng);
    PolarizationParams p;
    p.phi = ch.phi_drawn;
    p.zeta_vv = ch.nlos[0].zeta_vv;
    p.zeta_hv = ch.nlos[0].zeta_hv;
    const CVec want = std::sqrt(6.0) * los_component(ch.nlos[0].theta_az, ch.nlos[0].theta_el, p, arr);
    EXPECT_LT((ch.h - want).norm(), 1e-12);
}

TEST(SampleChannel, DeterministicAndInRange)
{
    const ArrayConfig arr{4, 8};
    const ChannelConfig cfg;
    Rng a(77), b(77);
    for (int t = 0; t < 30; ++t)
    {
        const auto x = sample_channel(cfg, PolarizationParams{}, arr, a);
        const auto y = sample_channel(cfg, PolarizationParams{}, arr, b);
        EXPECT_EQ(x.h.size(), 64);
        for (Eigen::Index i = 0; i < x.h.size(); ++i)
        {
            EXPECT_EQ(x.h(i).real(), y.h(i).real());
            EXPECT_EQ(x.h(i).imag(), y.h(i).imag());
        }
        EXPECT_GE(x.phi_drawn, pi / 4 - pi / 36);
        EXPECT_LE(x.phi_drawn, pi / 4 + pi / 36);
        EXPECT_EQ(x.nlos.size(), 3u);
        EXPECT_TRUE(cfg.theta_az.contains(x.los.theta_az));
        EXPECT_TRUE(cfg.theta_el.contains(x.los.theta_el));
    }
}

TEST(SampleChannel, FixedLosAngles)
{
    ChannelConfig cfg;
    cfg.fixed_los = std::make_pair(0.2, -0.1);
    Rng rng(8);
    const auto ch = sample_channel(cfg, PolarizationParams{}, {2, 2}, rng);
    EXPECT_EQ(ch.los.theta_az, 0.2);
    EXPECT_EQ(ch.los.theta_el, -0.1);
}

TEST(SampleChannel, MeanPowerMatchesMixture)
{
    // E|h|^2 = MhMv (K E|h_los|^2 + E|h_nlos|^2)/(1+K), with E|zeta|^2 = 1 both paths have
    // E|.|^2 = (1 + chi)/(1 + chi) = 1
    const ArrayConfig arr{2, 3};
    ChannelConfig cfg;
    cfg.k_factor = db_to_linear(13.2);
    PolarizationParams base;
    Rng rng(9);
    double s = 0.0;
    const int n = 100000;
    for (int t = 0; t < n; ++t)
        s += sample_channel(cfg, base, arr, rng).h.squaredNorm();
    EXPECT_NEAR(s / n, 6.0, 0.05 * 6.0);
}

TEST(SampleChannel, InvalidConfigRejected)
{
    ChannelConfig cfg;
    cfg.k_factor = -1.0;
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
    cfg = {};
    cfg.theta_el = {-1.0, 0.2};
    EXPECT_THROW(cfg.validate(), std::invalid_argument);
}

TEST(Rng, StreamsArePortableAndDistinct)
{
    Rng a(1), b(1);
    for (int i = 0; i < 100; ++i)
        EXPECT_EQ(a.uniform(), b.uniform());
    EXPECT_NE(Rng::derive(1, 0).uniform(), Rng::derive(1, 1).uniform());
    Rng c(3);
    double m = 0.0, v = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i)
    {
        const double g = c.gaussian();
        m += g;
        v += g * g;
    }
    EXPECT_NEAR(m / n, 0.0, 0.01);
    EXPECT_NEAR(v / n, 1.0, 0.01);
}
