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

#include "codebook_file.hpp"
#include "config.hpp"
#include "csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

// Subcommand bodies; the executable only parses arguments and maps exceptions to exit codes
namespace dpbeam::io
{
    inline constexpr int exit_ok = 0;
    inline constexpr int exit_verify_failed = 1;
    inline constexpr int exit_usage = 2;

    inline std::string printf_str(const char *fmt, auto... args)
    {
        char buf[512];
        std::snprintf(buf, sizeof buf, fmt, args...);
        return buf;
    }

    inline std::filesystem::path prepare_output_dir(const ExperimentConfig &cfg)
    {
        const std::filesystem::path dir = cfg.output_dir;
        std::error_code ec;
        std::filesystem::create_directories(dir, ec);
        if (ec || !std::filesystem::is_directory(dir))
            throw std::runtime_error("cannot create output directory " + dir.string());
        return dir;
    }

    inline std::filesystem::path codebook_path(const ExperimentConfig &cfg, const std::string &id)
    {
        return std::filesystem::path(cfg.output_dir) / (id + ".dpcb");
    }

    // Designs (or builds the baseline) and writes <out>/<id>.dpcb plus sidecar
    inline std::filesystem::path cmd_design(const ExperimentConfig &cfg, bool baseline, std::string id, std::ostream &log)
    {
        if (id.empty())
            id = baseline ? "baseline" : "proposed";
        const auto params = cfg.params();
        CodebookFile file;
        if (baseline)
            file = make_baseline_file(cfg.grid, params, cfg.array);
        else
        {
            const DesignContext ctx(cfg.grid, params, cfg.array, cfg.design);
            file = make_codebook_file(id, ctx, design_codebook(ctx));
        }
        file.id = id;

        prepare_output_dir(cfg);
        const auto path = codebook_path(cfg, id);
        write_codebook(path, file);

        const auto d = build_steering_matrices(cfg.grid, cfg.array);
        log << "codebook " << id << ": " << file.entries.size() << " codewords -> " << path.string() << "\n";
        log << "   p   q          se  closed_form    min_gain\n";
        for (const auto &e : file.entries)
            log << printf_str("%4d%4d%12.6f%13.6f%12.6f\n", e.p, e.q, e.se, e.closed_form_se,
                              min_region_gain(e.c, e.p, e.q, d, params, cfg.array));
        return path;
    }

    // region: "all" (max over codebook) or "p,q"
    inline std::filesystem::path cmd_pattern(const ExperimentConfig &cfg, const std::string &codebook_file,
                                             const std::string &region, std::ostream &log)
    {
        const CodebookFile file = read_codebook(codebook_file);
        PatternRaster raster;
        std::string tag;
        if (region == "all")
        {
            for (std::size_t k = 0; k < file.entries.size(); ++k)
            {
                auto r = pattern_raster(file.entries[k].c, file.params, file.array, cfg.pattern.n_psi_h, cfg.pattern.n_psi_v);
                if (k == 0)
                    raster = std::move(r);
                else
                    raster.gain = raster.gain.cwiseMax(r.gain);
            }
            tag = "all";
        }
        else
        {
            int p = 0, q = 0;
            char tail = 0;
            if (std::sscanf(region.c_str(), "%d,%d%c", &p, &q, &tail) != 2)
                throw std::invalid_argument("--region must be \"all\" or \"p,q\", got '" + region + "'");
            if (p < 1 || p > file.grid.q_h || q < 1 || q > file.grid.q_v)
                throw std::invalid_argument("--region " + region + " is outside the codebook's " +
                                            std::to_string(file.grid.q_h) + "x" + std::to_string(file.grid.q_v) +
                                            " grid");
            const auto &e = file.entries[static_cast<std::size_t>((p - 1) * file.grid.q_v + (q - 1))];
            raster = pattern_raster(e.c, file.params, file.array, cfg.pattern.n_psi_h, cfg.pattern.n_psi_v);
            tag = "p" + std::to_string(p) + "_q" + std::to_string(q);
        }

        const auto dir = prepare_output_dir(cfg);
        const auto path = dir / ("pattern_" + file.id + "_" + tag + ".csv");
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + path.string());
        write_pattern_csv(out, raster);
        log << "pattern " << raster.psi_h.size() << "x" << raster.psi_v.size() << " -> " << path.string() << "\n";
        return path;
    }

    // One rate curve per codebook (shared random numbers) -> <out>/rates.csv plus sidecar
    inline std::filesystem::path cmd_simulate(const ExperimentConfig &cfg, const std::vector<std::string> &codebook_files,
                                              std::ostream &log)
    {
        if (codebook_files.empty())
            throw std::invalid_argument("simulate needs at least one --codebook");
        std::vector<CodebookFile> files;
        for (const auto &f : codebook_files)
        {
            files.push_back(read_codebook(f));
            const auto &cb = files.back();
            if (!(cb.array == cfg.array))
                throw std::invalid_argument("codebook " + f + " was designed for a " + std::to_string(cb.array.m_h) +
                                            "x" + std::to_string(cb.array.m_v) +
                                            " array but the config has " + std::to_string(cfg.array.m_h) + "x" +
                                            std::to_string(cfg.array.m_v) + " (array.*)");
            if (!(cb.grid == cfg.grid))
                throw std::invalid_argument("codebook " + f + " uses a different region grid than the config (grid.*)");
        }

        const auto params = cfg.params();
        std::vector<RateCurve> curves;
        json side = json::array();
        for (const auto &f : files)
        {
            curves.push_back(simulate_rate(f.codebook(), cfg.simulation, params, cfg.array));
            const auto &c = curves.back();
            side.push_back({{"codebook_id", c.codebook_id},
                            {"mean_h_norm_sq", c.mean_h_norm_sq},
                            {"rate_std_error", c.rate_std_error}});
        }

        const auto dir = prepare_output_dir(cfg);
        const auto path = dir / "rates.csv";
        {
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out)
                throw std::runtime_error("cannot write " + path.string());
            write_rate_csv(out, curves);
        }
        detail::write_file(path.string() + ".json",
                           json{{"config_hash", hex64(config_hash(cfg))}, {"curves", side}}.dump(2) + "\n");

        log << "  snr_db";
        for (const auto &c : curves)
            log << printf_str("%14s", c.codebook_id.c_str());
        log << "         bound\n";
        for (std::size_t s = 0; s < cfg.simulation.snr_db.size(); ++s)
        {
            log << printf_str("%8.2f", cfg.simulation.snr_db[s]);
            for (const auto &c : curves)
                log << printf_str("%14.6f", c.mean_rate[s]);
            log << printf_str("%14.6f\n", curves.front().upper_bound[s]);
        }
        log << "-> " << path.string() << "\n";
        return path;
    }

    struct VerifyCheck
    {
        std::string name;
        bool pass = false;
        std::string detail;
    };

    // Numerical identity checks on the configured array. gain_perturbation scales G by (1 + eps);
    // it exists so tests can confirm that the identity check fails.
    inline std::vector<VerifyCheck> run_verify(const ExperimentConfig &cfg, double gain_perturbation = 0.0)
    {
        std::vector<VerifyCheck> out;
        const auto params = cfg.params();
        const auto &a = cfg.array;
        const double bound = reference_gain_integral_bound(a);
        Rng rng(cfg.simulation.rng_seed);
        const int m = a.total_elements();
        const int quad = std::max(401, 2 * std::max(a.m_h, a.m_v) + 1);

        {
            double worst = 0.0;
            for (int k = 0; k < 20; ++k)
            {
                CVec c(m);
                for (int i = 0; i < m; ++i)
                    c(i) = rng.complex_gaussian();
                c /= c.norm();
                worst = std::max(worst, integral_reference_gain(c, params, a, quad));
            }
            out.push_back({"integral_bound", worst <= bound * 1.005,
                           printf_str("max integral %.9g vs bound %.9g, relative %+.3e (limit +5e-03), 20 random codewords",
                                      worst, bound, worst / bound - 1.0)});
        }
        {
            double worst_rel = 0.0, at = 0.0;
            for (int k = 0; k < 5; ++k)
            {
                CVec x(a.half_elements());
                for (int i = 0; i < x.size(); ++i)
                    x(i) = rng.complex_gaussian();
                const double v = integral_reference_gain(equality_family_codeword(x, params), params, a, quad);
                if (std::abs(v / bound - 1.0) >= worst_rel)
                {
                    worst_rel = std::abs(v / bound - 1.0);
                    at = v;
                }
            }
            out.push_back({"integral_equality", worst_rel <= 0.005,
                           printf_str("worst integral %.9g vs bound %.9g, |relative| %.3e (limit 5e-03), 5 codewords",
                                      at, bound, worst_rel)});
        }
        {
            const double g = ideal_gain(cfg.grid, a) * (1.0 + gain_perturbation);
            const double rel = std::abs(g * region_area(cfg.grid) / bound - 1.0);
            out.push_back({"ideal_gain_area", rel <= 1e-12,
                           printf_str("G %.17g x area %.17g = %.17g vs bound %.17g, |relative| %.3e (limit 1e-12)", g,
                                      region_area(cfg.grid), g * region_area(cfg.grid), bound, rel)});
        }
        {
            const auto basis = omega_gamma_diagnostics(params, a);
            const auto d = build_steering_matrices(cfg.grid, a);
            double worst = 0.0;
            for (Eigen::Index l = 0; l < basis.omega.cols(); ++l)
            {
                const CVec w = rotate(params.phi, CVec(params.b() * basis.omega.col(l)));
                worst = std::max(worst, pattern_vector(w, d, params, a).gains.maxCoeff());
            }
            out.push_back({"omega_zero_pattern", worst <= 1e-12,
                           printf_str("max section gain of Omega generators %.3e (limit 1e-12)", worst)});

            const double cross = (basis.omega.adjoint() * basis.gamma).cwiseAbs().maxCoeff();
            out.push_back({"omega_gamma_orthogonal", cross <= 1e-12,
                           printf_str("max |<omega, gamma>| %.3e (limit 1e-12)", cross)});
        }
        return out;
    }

    inline int cmd_verify(const ExperimentConfig &cfg, double gain_perturbation, std::ostream &log)
    {
        bool ok = true;
        for (const auto &c : run_verify(cfg, gain_perturbation))
        {
            log << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
            ok = ok && c.pass;
        }
        log << (ok ? "all checks passed\n" : "verification FAILED\n");
        return ok ? exit_ok : exit_verify_failed;
    }
}
