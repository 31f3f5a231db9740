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

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dpbeam
{
    using cplx = std::complex<double>;
    using CVec = Eigen::VectorXcd;
    using CMat = Eigen::MatrixXcd;
    using RVec = Eigen::VectorXd;
    using RMat = Eigen::MatrixXd;

    inline constexpr double pi = std::numbers::pi;
    inline constexpr double sqrt2 = std::numbers::sqrt2;

    // Half-width of the vertical design range, pi/sqrt(2)
    inline constexpr double psi_v_half_range = pi / sqrt2;

    // Raised when a computation hits a degenerate (zero-norm) intermediate
    class numerical_error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    inline void require(bool condition, const std::string &message)
    {
        if (!condition)
            throw std::invalid_argument(message);
    }

    // Throws if |x|_2 deviates from one by more than tol
    inline void require_unit_norm(const CVec &x, const char *what, double tol = 1e-9)
    {
        if (std::abs(x.norm() - 1.0) > tol)
            throw std::invalid_argument(std::string(what) + ": vector must have unit norm (got " +
                                        std::to_string(x.norm()) + ")");
    }

    // Kronecker product of two column vectors, a outer / b inner
    inline CVec kron(const CVec &a, const CVec &b)
    {
        CVec out(a.size() * b.size());
        for (Eigen::Index i = 0; i < a.size(); ++i)
            out.segment(i * b.size(), b.size()) = a(i) * b;
        return out;
    }

    inline CMat kron(const CMat &a, const CMat &b)
    {
        CMat out(a.rows() * b.rows(), a.cols() * b.cols());
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            for (Eigen::Index j = 0; j < a.cols(); ++j)
                out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        return out;
    }

    inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
}
