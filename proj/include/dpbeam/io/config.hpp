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

#include "../simulation.hpp"

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace dpbeam::io
{
    using json = nlohmann::json;

    // Bad configuration; the message starts with the offending key path
    class config_error : public std::runtime_error
    {
    public:
        config_error(const std::string &path, const std::string &what)
            : std::runtime_error(path + ": " + what), path_(path) {}
        const std::string &path() const { return path_; }

    private:
        std::string path_;
    };

    // FNV-1a 64
    inline std::uint64_t fnv1a(const std::string &s, std::uint64_t h = 0xcbf29ce484222325ULL)
    {
        for (unsigned char ch : s)
        {
            h ^= ch;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

    inline std::string hex64(std::uint64_t v)
    {
        static const char *digits = "0123456789abcdef";
        std::string out(16, '0');
        for (int i = 15; i >= 0; --i, v >>= 4)
            out[static_cast<std::size_t>(i)] = digits[v & 0xF];
        return out;
    }

    struct ZetaConfig
    {
        std::string source = "fixed"; // "fixed" or "draw"
        cplx vv = 1.0;
        cplx hv = 1.0;
        std::uint64_t seed = 0; // used by "draw"
    };

    struct PatternOptions
    {
        int n_psi_h = 257;
        int n_psi_v = 257;
    };

    struct ExperimentConfig
    {
        ArrayConfig array{8, 16};
        RegionGrid grid{6, 6, 7, 7};
        double chi = 0.3;
        double phi = pi / 4;
        ZetaConfig zeta;
        DesignOptions design;
        SimulationConfig simulation;
        double k_factor_db = 13.2;
        PatternOptions pattern;
        std::string output_dir = "out";

        // Design-time polarization parameters (zeta resolved from its source)
        PolarizationParams params() const
        {
            PolarizationParams p;
            p.chi = chi;
            p.phi = phi;
            if (zeta.source == "draw")
            {
                Rng rng(zeta.seed);
                p.zeta_vv = rng.complex_gaussian();
                p.zeta_hv = rng.complex_gaussian();
            }
            else
            {
                p.zeta_vv = zeta.vv;
                p.zeta_hv = zeta.hv;
            }
            return p;
        }
    };

    namespace detail
    {
        inline std::string join(const std::string &path, const std::string &key)
        {
            return path.empty() ? key : path + "." + key;
        }

        // Strict reader over one JSON object: typed getters with defaults, unknown keys rejected
        class Reader
        {
        public:
            Reader(const json &j, std::string path) : j_(j), path_(std::move(path))
            {
                if (!j_.is_object())
                    throw config_error(path_.empty() ? "<root>" : path_, "expected an object");
            }

            std::string at(const std::string &key) const { return join(path_, key); }
            bool has(const std::string &key) const { return j_.contains(key); }

            const json *raw(const std::string &key)
            {
                seen_.push_back(key);
                auto it = j_.find(key);
                return it == j_.end() ? nullptr : &*it;
            }

            Reader child(const std::string &key)
            {
                const json *v = raw(key);
                static const json empty = json::object();
                return Reader(v ? *v : empty, at(key));
            }

            int get_int(const std::string &key, int def)
            {
                const json *v = raw(key);
                if (!v)
                    return def;
                if (!v->is_number_integer())
                    throw config_error(at(key), "expected an integer");
                const auto x = v->get<std::int64_t>();
                if (x < -2147483647LL || x > 2147483647LL)
                    throw config_error(at(key), "integer out of range");
                return static_cast<int>(x);
            }

            std::uint64_t get_u64(const std::string &key, std::uint64_t def)
            {
                const json *v = raw(key);
                if (!v)
                    return def;
                if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<std::int64_t>() >= 0))
                    throw config_error(at(key), "expected a non-negative integer");
                return v->get<std::uint64_t>();
            }

            double get_double(const std::string &key, double def)
            {
                const json *v = raw(key);
                if (!v)
                    return def;
                if (!v->is_number())
                    throw config_error(at(key), "expected a number");
                const double x = v->get<double>();
                if (!std::isfinite(x))
                    throw config_error(at(key), "expected a finite number");
                return x;
            }

            bool get_bool(const std::string &key, bool def)
            {
                const json *v = raw(key);
                if (!v)
                    return def;
                if (!v->is_boolean())
                    throw config_error(at(key), "expected true or false");
                return v->get<bool>();
            }

            std::string get_string(const std::string &key, const std::string &def)
            {
                const json *v = raw(key);
                if (!v)
                    return def;
                if (!v->is_string())
                    throw config_error(at(key), "expected a string");
                return v->get<std::string>();
            }

            std::vector<double> get_doubles(const std::string &key, const std::vector<double> &def)
            {
                const json *v = raw(key);
                if (!v)
                    return def;
                if (!v->is_array())
                    throw config_error(at(key), "expected an array of numbers");
                std::vector<double> out;
                for (std::size_t i = 0; i < v->size(); ++i)
                {
                    const json &e = (*v)[i];
                    if (!e.is_number() || !std::isfinite(e.get<double>()))
                        throw config_error(at(key) + "[" + std::to_string(i) + "]", "expected a finite number");
                    out.push_back(e.get<double>());
                }
                return out;
            }

            // [re, im]
            cplx get_complex(const std::string &key, cplx def)
            {
                if (!has(key))
                {
                    seen_.push_back(key);
                    return def;
                }
                const auto v = get_doubles(key, {});
                if (v.size() != 2)
                    throw config_error(at(key), "expected [re, im]");
                return {v[0], v[1]};
            }

            Interval get_interval(const std::string &key, Interval def)
            {
                if (!has(key))
                {
                    seen_.push_back(key);
                    return def;
                }
                const auto v = get_doubles(key, {});
                if (v.size() != 2)
                    throw config_error(at(key), "expected [lo, hi]");
                return {v[0], v[1]};
            }

            void finish() const
            {
                for (auto it = j_.begin(); it != j_.end(); ++it)
                    if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end())
                        throw config_error(at(it.key()), "unknown key");
            }

        private:
            const json &j_;
            std::string path_;
            std::vector<std::string> seen_;
        };

        inline void check(bool ok, const std::string &path, const std::string &what)
        {
            if (!ok)
                throw config_error(path, what);
        }
    }

    // Parses and validates; every failure names its key path
    inline ExperimentConfig config_from_json(const json &root)
    {
        using detail::check;
        ExperimentConfig c;
        detail::Reader r(root, "");

        {
            auto a = r.child("array");
            c.array.m_h = a.get_int("m_h", c.array.m_h);
            c.array.m_v = a.get_int("m_v", c.array.m_v);
            c.array.d_h_over_lambda = a.get_double("d_h_over_lambda", c.array.d_h_over_lambda);
            c.array.d_v_over_lambda = a.get_double("d_v_over_lambda", c.array.d_v_over_lambda);
            a.finish();
            check(c.array.m_h >= 1, a.at("m_h"), "must be >= 1");
            check(c.array.m_v >= 1, a.at("m_v"), "must be >= 1");
            check(c.array.d_h_over_lambda > 0.0, a.at("d_h_over_lambda"), "must be > 0");
            check(c.array.d_v_over_lambda > 0.0, a.at("d_v_over_lambda"), "must be > 0");
        }
        {
            auto g = r.child("grid");
            c.grid.q_h = g.get_int("q_h", c.grid.q_h);
            c.grid.q_v = g.get_int("q_v", c.grid.q_v);
            c.grid.l_h = g.get_int("l_h", c.grid.l_h);
            c.grid.l_v = g.get_int("l_v", c.grid.l_v);
            g.finish();
            check(c.grid.q_h >= 1, g.at("q_h"), "must be >= 1");
            check(c.grid.q_v >= 1, g.at("q_v"), "must be >= 1");
            check(c.grid.l_h >= 1, g.at("l_h"), "must be >= 1");
            check(c.grid.l_v >= 1, g.at("l_v"), "must be >= 1");
        }
        {
            auto p = r.child("polarization");
            c.chi = p.get_double("chi", c.chi);
            c.phi = p.get_double("phi", c.phi);
            auto z = p.child("zeta");
            c.zeta.source = z.get_string("source", c.zeta.source);
            c.zeta.vv = z.get_complex("vv", c.zeta.vv);
            c.zeta.hv = z.get_complex("hv", c.zeta.hv);
            c.zeta.seed = z.get_u64("seed", c.zeta.seed);
            z.finish();
            p.finish();
            check(c.chi >= 0.0 && c.chi <= 1.0, p.at("chi"), "must lie in [0, 1]");
            check(c.zeta.source == "fixed" || c.zeta.source == "draw", z.at("source"), "expected \"fixed\" or \"draw\"");
            if (c.zeta.source == "fixed")
                check(std::norm(c.zeta.vv) + std::norm(c.zeta.hv) > 0.0, z.at("vv"), "vv and hv cannot both be zero");
        }
        {
            auto d = r.child("design");
            const std::string fam = d.get_string("candidates", to_string(c.design.family));
            try
            {
                c.design.family = candidate_family_from_string(fam);
            }
            catch (const std::invalid_argument &e)
            {
                throw config_error(d.at("candidates"), e.what());
            }
            const std::string hyb = d.get_string("hybrid", to_string(c.design.hybrid));
            try
            {
                c.design.hybrid = hybrid_method_from_string(hyb);
            }
            catch (const std::invalid_argument &e)
            {
                throw config_error(d.at("hybrid"), e.what());
            }
            c.design.b_grid = d.get_int("b_grid", c.design.b_grid);
            c.design.n_rf = d.get_int("n_rf", c.design.n_rf);
            c.design.oversample_h = d.get_int("oversample_h", c.design.oversample_h);
            c.design.oversample_v = d.get_int("oversample_v", c.design.oversample_v);
            c.design.pol_phases = d.get_int("pol_phases", c.design.pol_phases);
            c.design.hybrid_shortlist = d.get_int("hybrid_shortlist", c.design.hybrid_shortlist);
            d.finish();
            check(c.design.b_grid >= 1, d.at("b_grid"), "must be >= 1");
            check(c.design.n_rf >= 1, d.at("n_rf"), "must be >= 1");
            check(c.design.hybrid != HybridMethod::phase_split || c.design.n_rf >= 2, d.at("n_rf"),
                  "must be >= 2 with hybrid = phase_split");
            check(c.design.oversample_h >= 1, d.at("oversample_h"), "must be >= 1");
            check(c.design.oversample_v >= 1, d.at("oversample_v"), "must be >= 1");
            check(c.design.pol_phases >= 1, d.at("pol_phases"), "must be >= 1");
            check(c.design.hybrid_shortlist >= 1, d.at("hybrid_shortlist"), "must be >= 1");
            if (c.design.family == CandidateFamily::elementwise)
            {
                const int l = std::max(c.grid.l_h, c.grid.l_v);
                check(std::pow(static_cast<double>(c.design.b_grid), l - 1) <= 1e6, d.at("b_grid"),
                      "elementwise candidates would exceed 1e6 vectors per axis (b_grid^(L-1))");
            }
            if (c.design.hybrid == HybridMethod::omp)
                check(static_cast<long long>(c.design.oversample_h) * c.array.m_h * c.design.oversample_v * c.array.m_v *
                              c.design.pol_phases >= c.design.n_rf,
                      d.at("n_rf"), "exceeds the dictionary size");
        }
        {
            auto s = r.child("simulation");
            auto &sim = c.simulation;
            sim.snr_db = s.get_doubles("snr_db", sim.snr_db);
            sim.n_trials = s.get_int("n_trials", sim.n_trials);
            sim.noisy_training = s.get_bool("noisy_training", sim.noisy_training);
            sim.rng_seed = s.get_u64("seed", sim.rng_seed);
            check(!sim.snr_db.empty(), s.at("snr_db"), "must not be empty");
            check(sim.n_trials >= 1, s.at("n_trials"), "must be >= 1");

            auto ch = s.child("channel");
            c.k_factor_db = ch.get_double("k_factor_db", c.k_factor_db);
            sim.channel.k_factor = db_to_linear(c.k_factor_db);
            sim.channel.n_nlos = ch.get_int("n_nlos", sim.channel.n_nlos);
            sim.channel.phi_nominal = ch.get_double("phi_nominal", c.phi);
            sim.channel.phi_jitter = ch.get_double("phi_jitter", sim.channel.phi_jitter);
            sim.channel.theta_az = ch.get_interval("theta_az", sim.channel.theta_az);
            sim.channel.theta_el = ch.get_interval("theta_el", sim.channel.theta_el);
            if (const json *f = ch.raw("fixed_los"); f && !f->is_null())
            {
                const auto v = ch.get_doubles("fixed_los", {});
                check(v.size() == 2, ch.at("fixed_los"), "expected [az, el] or null");
                check(v[0] > -pi / 2 && v[0] < pi / 2 && v[1] > -pi / 4 && v[1] < pi / 4, ch.at("fixed_los"),
                      "angles must lie in (-pi/2, pi/2) x (-pi/4, pi/4)");
                sim.channel.fixed_los = std::make_pair(v[0], v[1]);
            }
            ch.finish();
            s.finish();
            check(sim.channel.n_nlos >= 0, ch.at("n_nlos"), "must be >= 0");
            check(sim.channel.phi_jitter >= 0.0, ch.at("phi_jitter"), "must be >= 0");
            const auto &az = sim.channel.theta_az, &el = sim.channel.theta_el;
            check(az.lo >= -pi / 2 && az.hi <= pi / 2 && az.lo < az.hi, ch.at("theta_az"),
                  "expected lo < hi within [-pi/2, pi/2]");
            check(el.lo >= -pi / 4 && el.hi <= pi / 4 && el.lo < el.hi, ch.at("theta_el"),
                  "expected lo < hi within [-pi/4, pi/4]");
        }
        {
            auto p = r.child("pattern");
            c.pattern.n_psi_h = p.get_int("n_psi_h", c.pattern.n_psi_h);
            c.pattern.n_psi_v = p.get_int("n_psi_v", c.pattern.n_psi_v);
            p.finish();
            check(c.pattern.n_psi_h >= 1, p.at("n_psi_h"), "must be >= 1");
            check(c.pattern.n_psi_v >= 1, p.at("n_psi_v"), "must be >= 1");
        }
        c.output_dir = r.get_string("output_dir", c.output_dir);
        check(!c.output_dir.empty(), "output_dir", "must not be empty");
        r.finish();
        return c;
    }

    inline json config_to_json(const ExperimentConfig &c)
    {
        const auto &sim = c.simulation;
        json ch = {{"k_factor_db", c.k_factor_db},
                   {"n_nlos", sim.channel.n_nlos},
                   {"phi_nominal", sim.channel.phi_nominal},
                   {"phi_jitter", sim.channel.phi_jitter},
                   {"theta_az", {sim.channel.theta_az.lo, sim.channel.theta_az.hi}},
                   {"theta_el", {sim.channel.theta_el.lo, sim.channel.theta_el.hi}},
                   {"fixed_los", nullptr}};
        if (sim.channel.fixed_los)
            ch["fixed_los"] = {sim.channel.fixed_los->first, sim.channel.fixed_los->second};
        return {
            {"array",
             {{"m_h", c.array.m_h},
              {"m_v", c.array.m_v},
              {"d_h_over_lambda", c.array.d_h_over_lambda},
              {"d_v_over_lambda", c.array.d_v_over_lambda}}},
            {"grid", {{"q_h", c.grid.q_h}, {"q_v", c.grid.q_v}, {"l_h", c.grid.l_h}, {"l_v", c.grid.l_v}}},
            {"polarization",
             {{"chi", c.chi},
              {"phi", c.phi},
              {"zeta",
               {{"source", c.zeta.source},
                {"vv", {c.zeta.vv.real(), c.zeta.vv.imag()}},
                {"hv", {c.zeta.hv.real(), c.zeta.hv.imag()}},
                {"seed", c.zeta.seed}}}}},
            {"design",
             {{"candidates", to_string(c.design.family)},
              {"hybrid", to_string(c.design.hybrid)},
              {"b_grid", c.design.b_grid},
              {"n_rf", c.design.n_rf},
              {"oversample_h", c.design.oversample_h},
              {"oversample_v", c.design.oversample_v},
              {"pol_phases", c.design.pol_phases},
              {"hybrid_shortlist", c.design.hybrid_shortlist}}},
            {"simulation",
             {{"snr_db", sim.snr_db},
              {"n_trials", sim.n_trials},
              {"noisy_training", sim.noisy_training},
              {"seed", sim.rng_seed},
              {"channel", ch}}},
            {"pattern", {{"n_psi_h", c.pattern.n_psi_h}, {"n_psi_v", c.pattern.n_psi_v}}},
            {"output_dir", c.output_dir},
        };
    }

    // Stable hash of the fully resolved configuration. output_dir is left out: where the
    // results go does not change them.
    inline std::uint64_t config_hash(const ExperimentConfig &c)
    {
        json j = config_to_json(c);
        j.erase("output_dir");
        return fnv1a(j.dump());
    }

    // "a.b.c=value": value parsed as JSON when possible, otherwise taken as a string
    inline void apply_override(json &root, const std::string &assignment)
    {
        const auto eq = assignment.find('=');
        if (eq == std::string::npos || eq == 0)
            throw config_error(assignment, "override must look like key.path=value");
        const std::string key = assignment.substr(0, eq);
        const std::string text = assignment.substr(eq + 1);
        json value = json::parse(text, nullptr, false);
        if (value.is_discarded())
            value = text;

        json *node = &root;
        std::size_t start = 0;
        while (true)
        {
            const auto dot = key.find('.', start);
            const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
            if (part.empty())
                throw config_error(key, "empty path component in override");
            if (!node->is_object())
                throw config_error(key, "override descends into a non-object");
            if (dot == std::string::npos)
            {
                (*node)[part] = value;
                return;
            }
            if (!node->contains(part))
                (*node)[part] = json::object();
            node = &(*node)[part];
            start = dot + 1;
        }
    }

    inline json read_json_file(const std::string &path)
    {
        std::ifstream in(path);
        if (!in)
            throw config_error(path, "cannot open file");
        json j = json::parse(in, nullptr, false);
        if (j.is_discarded())
            throw config_error(path, "not valid JSON");
        return j;
    }

    // Config file (optional: empty path means defaults) + overrides
    inline ExperimentConfig load_config(const std::string &path, const std::vector<std::string> &overrides = {})
    {
        json root = path.empty() ? json::object() : read_json_file(path);
        for (const auto &o : overrides)
            apply_override(root, o);
        return config_from_json(root);
    }
}
