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

#include <dpbeam/array_geometry.hpp>

#include <gtest/gtest.h>

using namespace dpbeam;

TEST(UlaResponse, ZeroPhaseIsConstant)
{
    const CVec a = ula_response(0.0, 4);
    for (int k = 0; k < 4; ++k)
        EXPECT_NEAR(std::abs(a(k) - cplx(0.5, 0.0)), 0.0, 1e-15);
}

TEST(UlaResponse, PiAlternates)
{
    const CVec a = ula_response(pi, 2);
    EXPECT_NEAR(std::abs(a(0) - 1.0 / sqrt2), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(a(1) + 1.0 / sqrt2), 0.0, 1e-15);
}

TEST(UlaResponse, ZeroLengthThrows) { EXPECT_THROW(ula_response(0.3, 0), std::invalid_argument); }

TEST(UlaResponse, InnerProductIsDirichletKernel)
{
    oracle::Rand r(11);
    for (int t = 0; t < 200; ++t)
    {
        const int m = 1 + t % 17;
        const double p1 = r.uni(-pi, pi), p2 = r.uni(-pi, pi), delta = p2 - p1;
        const double kernel = std::abs(std::sin(m * delta / 2) / (m * std::sin(delta / 2)));
        EXPECT_NEAR(std::abs(ula_response(p1, m).dot(ula_response(p2, m))), kernel, 1e-10);
    }
}

TEST(UpaResponse, ZeroFrequency)
{
    const CVec a = upa_response_unpaired({0.0, 0.0}, {2, 2});
    for (int k = 0; k < 4; ++k)
        EXPECT_NEAR(std::abs(a(k) - 0.5), 0.0, 1e-15);
}

TEST(UpaResponse, KroneckerIndexingMatchesOracle)
{
    oracle::Rand r(12);
    for (int t = 0; t < 50; ++t)
    {
        const ArrayConfig cfg{1 + t % 5, 1 + (t * 3) % 7};
        const SpatialFrequency sf{r.uni(-pi, pi), r.uni(-psi_v_half_range, psi_v_half_range)};
        const auto ref = oracle::upa(sf.psi_h, sf.psi_v, cfg.m_h, cfg.m_v);
        EXPECT_LT(oracle::max_abs_diff(oracle::from_eigen(upa_response_unpaired(sf, cfg)), ref), 1e-14);
    }
}

TEST(UpaResponse, UnitNorm)
{
    oracle::Rand r(13);
    const ArrayConfig cfg{8, 16};
    for (int t = 0; t < 100; ++t)
    {
        const SpatialFrequency sf{r.uni(-pi, pi), r.uni(-psi_v_half_range, psi_v_half_range)};
        EXPECT_NEAR(upa_response_unpaired(sf, cfg).norm(), 1.0, 1e-12);
    }
}

TEST(UpaPaired, Broadside)
{
    const ArrayConfig cfg{3, 5};
    const CVec a = upa_response_paired(0.0, 0.0, cfg);
    for (int k = 0; k < a.size(); ++k)
        EXPECT_NEAR(std::abs(a(k) - 1.0 / std::sqrt(15.0)), 0.0, 1e-15);
}

TEST(UpaPaired, ZeroElevationMatchesUnpaired)
{
    const ArrayConfig cfg{4, 6};
    for (double az : {-1.2, -0.3, 0.4, 1.1})
    {
        const CVec a = upa_response_paired(az, 0.0, cfg);
        const CVec b = upa_response_unpaired({pi * std::sin(az), 0.0}, cfg);
        EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(UpaPaired, PhasesMatchAngleFormula)
{
    oracle::Rand r(14);
    const ArrayConfig cfg{5, 4, 0.5, 0.7};
    for (int t = 0; t < 50; ++t)
    {
        const double az = r.uni(-1.5, 1.5), el = r.uni(-0.78, 0.78);
        const double ph = 2 * pi * 0.5 * std::sin(az) * std::cos(el), pv = 2 * pi * 0.7 * std::sin(el);
        const auto ref = oracle::upa(ph, pv, 5, 4);
        EXPECT_LT(oracle::max_abs_diff(oracle::from_eigen(upa_response_paired(az, el, cfg)), ref), 1e-12);
    }
}

TEST(UpaPaired, OutsideSectorThrows)
{
    EXPECT_THROW(upa_response_paired(pi / 2, 0.0, {2, 2}), std::invalid_argument);
    EXPECT_THROW(upa_response_paired(0.0, -pi / 4, {2, 2}), std::invalid_argument);
}

TEST(RegionBounds, FirstQuadrant)
{
    const auto b = region_bounds(1, 1, {2, 2, 1, 1});
    EXPECT_DOUBLE_EQ(b.psi_h.lo, -pi);
    EXPECT_NEAR(b.psi_h.hi, 0.0, 1e-15);
    EXPECT_DOUBLE_EQ(b.psi_v.lo, -pi / sqrt2);
    EXPECT_NEAR(b.psi_v.hi, 0.0, 1e-15);
}

TEST(RegionBounds, CentralRegionOfSixBySix)
{
    const auto b = region_bounds(3, 3, {6, 6, 7, 7});
    EXPECT_NEAR(b.psi_h.lo, -pi / 3, 1e-15);
    EXPECT_NEAR(b.psi_h.hi, 0.0, 1e-15);
}

TEST(RegionBounds, OutOfRangeThrows)
{
    const RegionGrid g{3, 2, 1, 1};
    EXPECT_THROW(region_bounds(0, 1, g), std::invalid_argument);
    EXPECT_THROW(region_bounds(4, 1, g), std::invalid_argument);
    EXPECT_THROW(region_bounds(1, 3, g), std::invalid_argument);
}

TEST(RegionBounds, TileTheRectangle)
{
    for (const RegionGrid g : {RegionGrid{1, 1, 1, 1}, RegionGrid{3, 5, 2, 2}, RegionGrid{6, 6, 7, 7}, RegionGrid{7, 2, 1, 3}})
    {
        double area = 0.0;
        for (int p = 1; p <= g.q_h; ++p)
            for (int q = 1; q <= g.q_v; ++q)
            {
                const auto b = region_bounds(p, q, g);
                area += b.area();
                // neighbours share edges exactly: no gap, no overlap
                if (p < g.q_h)
                {
                    EXPECT_EQ(b.psi_h.hi, region_bounds(p + 1, q, g).psi_h.lo);
                }
                if (q < g.q_v)
                {
                    EXPECT_EQ(b.psi_v.hi, region_bounds(p, q + 1, g).psi_v.lo);
                }
            }
        EXPECT_NEAR(area, 2 * pi * 2 * pi / sqrt2, 1e-12);
        EXPECT_DOUBLE_EQ(region_bounds(1, 1, g).psi_h.lo, -pi);
        EXPECT_NEAR(region_bounds(g.q_h, 1, g).psi_h.hi, pi, 1e-14);
        EXPECT_NEAR(region_bounds(1, g.q_v, g).psi_v.hi, pi / sqrt2, 1e-14);
    }
}

TEST(RegionBounds, EveryPointInExactlyOneRegion)
{
    oracle::Rand r(15);
    const RegionGrid g{5, 4, 1, 1};
    for (int t = 0; t < 2000; ++t)
    {
        // include exact boundary values
        SpatialFrequency sf{r.uni(-pi, pi), r.uni(-psi_v_half_range, psi_v_half_range)};
        if (t % 4 == 0)
            sf.psi_h = region_bounds(1 + t % 5, 1, g).psi_h.lo;
        int hits = 0;
        for (int p = 1; p <= g.q_h; ++p)
            for (int q = 1; q <= g.q_v; ++q)
                hits += region_bounds(p, q, g).contains(sf);
        EXPECT_EQ(hits, 1);
    }
}

TEST(SectionCenters, SingleSectionIsMidpoint)
{
    const auto c = section_centers(1, 1, {1, 1, 1, 1});
    ASSERT_EQ(c.size(), 1u);
    EXPECT_NEAR(c[0].psi_h, 0.0, 1e-15);
    EXPECT_NEAR(c[0].psi_v, 0.0, 1e-15);
}

TEST(SectionCenters, FirstCenterFormula)
{
    const RegionGrid g{6, 5, 7, 3};
    const auto c = section_centers(1, 1, g);
    EXPECT_NEAR(c[0].psi_h, -pi + pi / (6 * 7), 1e-15);
    EXPECT_NEAR(c[0].psi_v, -pi / sqrt2 + pi / (sqrt2 * 5 * 3), 1e-15);
}

TEST(SectionCenters, InsideRegionAndHorizontalMajor)
{
    oracle::Rand r(16);
    for (int t = 0; t < 30; ++t)
    {
        const RegionGrid g{1 + t % 6, 1 + (t / 2) % 5, 1 + t % 4, 1 + (t / 3) % 5};
        for (int p = 1; p <= g.q_h; ++p)
            for (int q = 1; q <= g.q_v; ++q)
            {
                const auto c = section_centers(p, q, g);
                ASSERT_EQ(static_cast<int>(c.size()), g.sections_per_region());
                const auto b = region_bounds(p, q, g);
                for (std::size_t k = 0; k < c.size(); ++k)
                {
                    EXPECT_TRUE(b.contains(c[k]));
                    EXPECT_GT(c[k].psi_h, b.psi_h.lo);
                    EXPECT_GT(c[k].psi_v, b.psi_v.lo);
                    const int lh = static_cast<int>(k) / g.l_v, lv = static_cast<int>(k) % g.l_v;
                    EXPECT_NEAR(c[k].psi_h, oracle::h_center((p - 1) * g.l_h + lh, g.q_h, g.l_h), 1e-14);
                    EXPECT_NEAR(c[k].psi_v, oracle::v_center((q - 1) * g.l_v + lv, g.q_v, g.l_v), 1e-14);
                }
            }
    }
}

TEST(SteeringMatrices, ShapesAndColumns)
{
    const RegionGrid g{3, 2, 4, 3};
    const ArrayConfig cfg{5, 6};
    const auto d = build_steering_matrices(g, cfg);
    EXPECT_EQ(d.h.rows(), 5);
    EXPECT_EQ(d.h.cols(), 12);
    EXPECT_EQ(d.v.rows(), 6);
    EXPECT_EQ(d.v.cols(), 6);
    EXPECT_EQ(d.full.rows(), 30);
    EXPECT_EQ(d.full.cols(), g.total_sections());
    EXPECT_EQ(d.region_h(1).cols(), g.l_h);
    EXPECT_EQ(d.region_h(1).rows(), cfg.m_h);

    oracle::Rand r(17);
    for (int t = 0; t < 40; ++t)
    {
        const int j = static_cast<int>(r.uni(0, g.total_sections() - 1e-9));
        const int ih = j / g.v_sections(), iv = j % g.v_sections();
        const auto ref = oracle::upa(oracle::h_center(ih, 3, 4), oracle::v_center(iv, 2, 3), 5, 6);
        EXPECT_LT(oracle::max_abs_diff(oracle::from_eigen(d.full.col(j)), ref), 1e-14);
    }
    const Eigen::VectorXd diag = (d.full.adjoint() * d.full).diagonal().real();
    EXPECT_LT((diag.array() - 1.0).abs().maxCoeff(), 1e-12);
}

TEST(SteeringMatrices, RegionBlocksSelectRegionColumns)
{
    const RegionGrid g{4, 3, 2, 5};
    const auto d = build_steering_matrices(g, {3, 4});
    for (int p = 1; p <= g.q_h; ++p)
        EXPECT_LT((d.region_h(p) - d.h.middleCols((p - 1) * g.l_h, g.l_h)).norm(), 1e-15);
    const auto cols = g.region_columns(2, 3);
    const CMat block = kron(CMat(d.region_h(2)), CMat(d.region_v(3)));
    for (std::size_t k = 0; k < cols.size(); ++k)
        EXPECT_LT((block.col(static_cast<Eigen::Index>(k)) - d.full.col(cols[k])).norm(), 1e-14);
}

TEST(Config, InvalidInputsRejected)
{
    EXPECT_THROW((ArrayConfig{0, 2}.validate()), std::invalid_argument);
    EXPECT_THROW((ArrayConfig{2, 2, 0.0, 0.5}.validate()), std::invalid_argument);
    EXPECT_THROW((RegionGrid{1, 0, 1, 1}.validate()), std::invalid_argument);
}
