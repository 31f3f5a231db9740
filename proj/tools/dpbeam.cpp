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


#include <dpbeam/io/commands.hpp>

#include <CLI11.hpp>

#include <iostream>

namespace io = dpbeam::io;

int main(int argc, char **argv)
{
    CLI::App app{"dpbeam: hybrid beam codebooks for dual-polarized planar arrays"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    std::string config_path, out_dir;
    std::vector<std::string> overrides;
    std::uint64_t seed = 0;

    auto common = [&](CLI::App *cmd) {
        cmd->add_option("--config", config_path, "JSON config file (defaults when omitted)")->check(CLI::ExistingFile);
        cmd->add_option("--seed", seed, "Master seed (simulation.seed)");
        cmd->add_option("--out", out_dir, "Output directory (output_dir)");
        cmd->add_option("--override", overrides, "key.path=value, repeatable")->take_all();
    };

    auto *design = app.add_subcommand("design", "Design a codebook and write it to <out>/<id>.dpcb");
    bool baseline = false;
    std::string id;
    common(design);
    design->add_flag("--baseline", baseline, "Write the matched-beam baseline instead");
    design->add_option("--id", id, "Codebook id (default: proposed / baseline)");

    auto *pattern = app.add_subcommand("pattern", "Export a reference-gain raster as CSV");
    std::string pattern_codebook, region = "all";
    common(pattern);
    pattern->add_option("--codebook", pattern_codebook, "Codebook file")->required()->check(CLI::ExistingFile);
    pattern->add_option("--region", region, "\"all\" (max over codebook) or \"p,q\"");

    auto *simulate = app.add_subcommand("simulate", "Monte-Carlo data rate of one or more codebooks");
    std::vector<std::string> sim_codebooks;
    common(simulate);
    simulate->add_option("--codebook", sim_codebooks, "Codebook file, repeatable")->required()->check(CLI::ExistingFile);

    auto *verify = app.add_subcommand("verify", "Numerical identity checks");
    double perturb_gain = 0.0;
    common(verify);
    verify->add_option("--perturb-gain", perturb_gain, "test hook: scale G by (1 + eps)")->group("");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? io::exit_ok : io::exit_usage;
    }

    try
    {
        std::vector<std::string> all = overrides;
        for (auto *cmd : {design, pattern, simulate, verify})
            if (*cmd)
            {
                if (cmd->count("--seed"))
                    all.push_back("simulation.seed=" + std::to_string(seed));
                if (cmd->count("--out"))
                    all.push_back("output_dir=" + nlohmann::json(out_dir).dump());
            }
        const auto cfg = io::load_config(config_path, all);

        if (*design)
            io::cmd_design(cfg, baseline, id, std::cout);
        else if (*pattern)
            io::cmd_pattern(cfg, pattern_codebook, region, std::cout);
        else if (*simulate)
            io::cmd_simulate(cfg, sim_codebooks, std::cout);
        else
            return io::cmd_verify(cfg, perturb_gain, std::cout);
        return io::exit_ok;
    }
    catch (const io::config_error &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
    }
    return io::exit_usage;
}
