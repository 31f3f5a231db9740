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

#include "../ideal_pattern.hpp"
#include "../simulation.hpp"

#include <cstdio>
#include <ostream>
#include <string>

// RFC 4180 CSV with a header row; reals printed with 17 significant digits
namespace dpbeam::io
{
    inline std::string format_real(double v)
    {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

    inline std::string csv_field(const std::string &s)
    {
        if (s.find_first_of(",\"\r\n") == std::string::npos)
            return s;
        std::string out = "\"";
        for (char ch : s)
        {
            if (ch == '"')
                out += '"';
            out += ch;
        }
        return out + "\"";
    }

    inline constexpr const char *rate_csv_header = "snr_db,codebook_id,mean_rate,upper_bound,n_trials,seed";
    inline constexpr const char *pattern_csv_header = "psi_h,psi_v,gain";

    inline void write_rate_csv(std::ostream &out, const std::vector<RateCurve> &curves)
    {
        out << rate_csv_header << "\r\n";
        for (const auto &c : curves)
            for (std::size_t s = 0; s < c.snr_db.size(); ++s)
                out << format_real(c.snr_db[s]) << ',' << csv_field(c.codebook_id) << ',' << format_real(c.mean_rate[s])
                    << ',' << format_real(c.upper_bound[s]) << ',' << c.n_trials << ',' << c.seed << "\r\n";
    }

    // psi_h outer, psi_v inner
    inline void write_pattern_csv(std::ostream &out, const PatternRaster &r)
    {
        out << pattern_csv_header << "\r\n";
        for (Eigen::Index i = 0; i < r.psi_h.size(); ++i)
            for (Eigen::Index k = 0; k < r.psi_v.size(); ++k)
                out << format_real(r.psi_h(i)) << ',' << format_real(r.psi_v(k)) << ',' << format_real(r.gain(i, k))
                    << "\r\n";
    }
}
