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

#include "config.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>

// Codebook file, version 1. All integers and floats little-endian.
//
//   offset  type        field
//   0       char[8]     magic "DPBEAMCB"
//   8       u32         version (1)
//   12      u64         geometry hash: FNV-1a 64 of the array and grid fields below
//   20      u32 x 6     m_h, m_v, q_h, q_v, l_h, l_v
//   44      f64 x 2     d_h_over_lambda, d_v_over_lambda
//   60      f64 x 6     chi, phi, re/im zeta_vv, re/im zeta_hv (design polarization)
//   108     u32 + char  codebook id (length, bytes)
//           u32         entry count
//   per entry:
//           u32 x 2     p, q (1-based)
//           i32 x 2     candidate index (h, v), -1 when not designed
//           u32 x 2     M, N (N = 0: no hybrid factors stored)
//           f64 x 2     se, closed-form se
//           c128 M*N    F, column-major; c128 = f64 re, f64 im
//           c128 N      v
//           c128 M      c
//
// A JSON sidecar (<file>.json) repeats the metadata in readable form.

namespace dpbeam::io
{
    inline constexpr char codebook_magic[8] = {'D', 'P', 'B', 'E', 'A', 'M', 'C', 'B'};
    inline constexpr std::uint32_t codebook_version = 1;

    struct CodebookEntry
    {
        int p = 1;
        int q = 1;
        int cand_h = -1;
        int cand_v = -1;
        CMat f_analog; // M x N, N may be 0
        CVec v_digital;
        CVec c;
        double se = 0.0;
        double closed_form_se = 0.0;
    };

    struct CodebookFile
    {
        std::string id;
        ArrayConfig array;
        RegionGrid grid;
        PolarizationParams params;
        std::vector<CodebookEntry> entries; // p-major then q
        json design;                        // sidecar-only design metadata

        Codebook codebook() const
        {
            Codebook cb{id, grid, {}};
            for (const auto &e : entries)
                cb.codewords.push_back(e.c);
            return cb;
        }
    };

    inline std::uint64_t geometry_hash(const ArrayConfig &a, const RegionGrid &g)
    {
        std::string s;
        auto put = [&s](std::uint64_t v) {
            for (int i = 0; i < 8; ++i)
                s.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
        };
        for (int v : {a.m_h, a.m_v, g.q_h, g.q_v, g.l_h, g.l_v})
            put(static_cast<std::uint64_t>(v));
        put(std::bit_cast<std::uint64_t>(a.d_h_over_lambda));
        put(std::bit_cast<std::uint64_t>(a.d_v_over_lambda));
        return fnv1a(s);
    }

    inline CodebookFile make_codebook_file(std::string id, const DesignContext &ctx,
                                           const std::vector<DesignedCodeword> &designed)
    {
        CodebookFile f{std::move(id), ctx.array(), ctx.grid(), ctx.params(), {}, json::object()};
        const auto &o = ctx.options();
        f.design = {{"candidates", to_string(o.family)}, {"hybrid", to_string(o.hybrid)},
                    {"b_grid", o.b_grid},                {"n_rf", o.n_rf},
                    {"oversample_h", o.oversample_h},    {"oversample_v", o.oversample_v},
                    {"pol_phases", o.pol_phases},        {"hybrid_shortlist", o.hybrid_shortlist}};
        for (const auto &d : designed)
            f.entries.push_back({d.p, d.q, d.candidate.index_h, d.candidate.index_v, d.hybrid.f_analog,
                                 d.hybrid.v_digital, d.c, d.se, d.closed_form_se});
        return f;
    }

    inline CodebookFile make_baseline_file(const RegionGrid &grid, const PolarizationParams &params,
                                           const ArrayConfig &cfg)
    {
        const Codebook cb = baseline_dft_codebook(grid, params, cfg);
        const auto d = build_steering_matrices(grid, cfg);
        CodebookFile f{cb.id, cfg, grid, params, {}, json{{"kind", "matched beam at region center"}}};
        for (std::size_t k = 0; k < cb.size(); ++k)
        {
            const auto [p, q] = cb.region_of(k);
            const double se = squared_error(ideal_pattern_vector(p, q, grid, cfg), pattern_vector(cb.codewords[k], d, params, cfg));
            f.entries.push_back({p, q, -1, -1, CMat(cfg.total_elements(), 0), CVec(0), cb.codewords[k], se, se});
        }
        return f;
    }

    namespace detail
    {
        class ByteWriter
        {
        public:
            void u32(std::uint32_t v) { le(v, 4); }
            void i32(std::int32_t v) { le(static_cast<std::uint32_t>(v), 4); }
            void u64(std::uint64_t v) { le(v, 8); }
            void f64(double v) { le(std::bit_cast<std::uint64_t>(v), 8); }
            void c128(cplx v)
            {
                f64(v.real());
                f64(v.imag());
            }
            void bytes(const char *p, std::size_t n) { buf_.append(p, n); }
            const std::string &data() const { return buf_; }

        private:
            void le(std::uint64_t v, int n)
            {
                for (int i = 0; i < n; ++i)
                    buf_.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
            }
            std::string buf_;
        };

        class ByteReader
        {
        public:
            ByteReader(std::string data, std::string name) : buf_(std::move(data)), name_(std::move(name)) {}
            std::uint32_t u32() { return static_cast<std::uint32_t>(le(4)); }
            std::int32_t i32() { return static_cast<std::int32_t>(static_cast<std::uint32_t>(le(4))); }
            std::uint64_t u64() { return le(8); }
            double f64() { return std::bit_cast<double>(le(8)); }
            cplx c128()
            {
                const double re = f64();
                return {re, f64()};
            }
            std::string bytes(std::size_t n)
            {
                need(n);
                std::string out = buf_.substr(pos_, n);
                pos_ += n;
                return out;
            }
            bool done() const { return pos_ == buf_.size(); }
            [[noreturn]] void fail(const std::string &what) const
            {
                throw std::runtime_error("codebook file " + name_ + ": " + what);
            }

        private:
            void need(std::size_t n) const
            {
                if (buf_.size() - pos_ < n)
                    fail("truncated");
            }
            std::uint64_t le(int n)
            {
                need(static_cast<std::size_t>(n));
                std::uint64_t v = 0;
                for (int i = 0; i < n; ++i)
                    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(buf_[pos_ + static_cast<std::size_t>(i)]))
                         << (8 * i);
                pos_ += static_cast<std::size_t>(n);
                return v;
            }
            std::string buf_;
            std::string name_;
            std::size_t pos_ = 0;
        };

        inline void write_file(const std::filesystem::path &path, const std::string &data)
        {
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out)
                throw std::runtime_error("cannot write " + path.string());
            out.write(data.data(), static_cast<std::streamsize>(data.size()));
            if (!out)
                throw std::runtime_error("write failed for " + path.string());
        }

        inline std::string read_file(const std::filesystem::path &path)
        {
            std::ifstream in(path, std::ios::binary);
            if (!in)
                throw std::runtime_error("cannot open " + path.string());
            return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
        }
    }

    inline std::string encode_codebook(const CodebookFile &f)
    {
        detail::ByteWriter w;
        w.bytes(codebook_magic, sizeof codebook_magic);
        w.u32(codebook_version);
        w.u64(geometry_hash(f.array, f.grid));
        for (int v : {f.array.m_h, f.array.m_v, f.grid.q_h, f.grid.q_v, f.grid.l_h, f.grid.l_v})
            w.u32(static_cast<std::uint32_t>(v));
        w.f64(f.array.d_h_over_lambda);
        w.f64(f.array.d_v_over_lambda);
        w.f64(f.params.chi);
        w.f64(f.params.phi);
        w.c128(f.params.zeta_vv);
        w.c128(f.params.zeta_hv);
        w.u32(static_cast<std::uint32_t>(f.id.size()));
        w.bytes(f.id.data(), f.id.size());
        w.u32(static_cast<std::uint32_t>(f.entries.size()));
        for (const auto &e : f.entries)
        {
            w.u32(static_cast<std::uint32_t>(e.p));
            w.u32(static_cast<std::uint32_t>(e.q));
            w.i32(e.cand_h);
            w.i32(e.cand_v);
            w.u32(static_cast<std::uint32_t>(e.c.size()));
            w.u32(static_cast<std::uint32_t>(e.f_analog.cols()));
            w.f64(e.se);
            w.f64(e.closed_form_se);
            for (Eigen::Index j = 0; j < e.f_analog.cols(); ++j)
                for (Eigen::Index i = 0; i < e.f_analog.rows(); ++i)
                    w.c128(e.f_analog(i, j));
            for (Eigen::Index i = 0; i < e.v_digital.size(); ++i)
                w.c128(e.v_digital(i));
            for (Eigen::Index i = 0; i < e.c.size(); ++i)
                w.c128(e.c(i));
        }
        return w.data();
    }

    inline CodebookFile decode_codebook(const std::string &data, const std::string &name = "<memory>")
    {
        detail::ByteReader r(data, name);
        if (std::memcmp(r.bytes(8).data(), codebook_magic, 8) != 0)
            r.fail("bad magic (not a codebook file)");
        if (const auto v = r.u32(); v != codebook_version)
            r.fail("unsupported version " + std::to_string(v));
        const std::uint64_t hash = r.u64();

        CodebookFile f;
        auto dim = [&r](const char *what) {
            const std::uint32_t v = r.u32();
            if (v < 1 || v > 1u << 20)
                r.fail(std::string("implausible ") + what);
            return static_cast<int>(v);
        };
        f.array.m_h = dim("m_h");
        f.array.m_v = dim("m_v");
        f.grid.q_h = dim("q_h");
        f.grid.q_v = dim("q_v");
        f.grid.l_h = dim("l_h");
        f.grid.l_v = dim("l_v");
        f.array.d_h_over_lambda = r.f64();
        f.array.d_v_over_lambda = r.f64();
        if (geometry_hash(f.array, f.grid) != hash)
            r.fail("geometry hash mismatch");
        f.params.chi = r.f64();
        f.params.phi = r.f64();
        f.params.zeta_vv = r.c128();
        f.params.zeta_hv = r.c128();
        f.id = r.bytes(r.u32());

        const std::uint32_t n = r.u32();
        if (n != static_cast<std::uint32_t>(f.grid.regions()))
            r.fail("entry count does not match the grid");
        const auto m = static_cast<std::uint32_t>(f.array.total_elements());
        for (std::uint32_t k = 0; k < n; ++k)
        {
            CodebookEntry e;
            e.p = static_cast<int>(r.u32());
            e.q = static_cast<int>(r.u32());
            const int want_p = static_cast<int>(k) / f.grid.q_v + 1, want_q = static_cast<int>(k) % f.grid.q_v + 1;
            if (e.p != want_p || e.q != want_q)
                r.fail("entries out of order at " + std::to_string(k));
            e.cand_h = r.i32();
            e.cand_v = r.i32();
            const std::uint32_t rows = r.u32(), cols = r.u32();
            if (rows != m || cols > m)
                r.fail("bad matrix shape in entry " + std::to_string(k));
            e.se = r.f64();
            e.closed_form_se = r.f64();
            e.f_analog.resize(rows, cols);
            for (std::uint32_t j = 0; j < cols; ++j)
                for (std::uint32_t i = 0; i < rows; ++i)
                    e.f_analog(i, j) = r.c128();
            e.v_digital.resize(cols);
            for (std::uint32_t i = 0; i < cols; ++i)
                e.v_digital(i) = r.c128();
            e.c.resize(rows);
            for (std::uint32_t i = 0; i < rows; ++i)
                e.c(i) = r.c128();
            f.entries.push_back(std::move(e));
        }
        if (!r.done())
            r.fail("trailing bytes");
        return f;
    }

    inline json codebook_sidecar(const CodebookFile &f)
    {
        json entries = json::array();
        for (const auto &e : f.entries)
            entries.push_back({{"p", e.p},
                               {"q", e.q},
                               {"candidate", {e.cand_h, e.cand_v}},
                               {"n_rf", e.f_analog.cols()},
                               {"se", e.se},
                               {"closed_form_se", e.closed_form_se}});
        return {{"format", "dpbeam codebook"},
                {"version", codebook_version},
                {"id", f.id},
                {"geometry_hash", hex64(geometry_hash(f.array, f.grid))},
                {"array",
                 {{"m_h", f.array.m_h},
                  {"m_v", f.array.m_v},
                  {"d_h_over_lambda", f.array.d_h_over_lambda},
                  {"d_v_over_lambda", f.array.d_v_over_lambda}}},
                {"grid", {{"q_h", f.grid.q_h}, {"q_v", f.grid.q_v}, {"l_h", f.grid.l_h}, {"l_v", f.grid.l_v}}},
                {"polarization",
                 {{"chi", f.params.chi},
                  {"phi", f.params.phi},
                  {"zeta_vv", {f.params.zeta_vv.real(), f.params.zeta_vv.imag()}},
                  {"zeta_hv", {f.params.zeta_hv.real(), f.params.zeta_hv.imag()}}}},
                {"design", f.design},
                {"entries", entries}};
    }

    // Writes <path> and <path>.json
    inline void write_codebook(const std::filesystem::path &path, const CodebookFile &f)
    {
        detail::write_file(path, encode_codebook(f));
        detail::write_file(path.string() + ".json", codebook_sidecar(f).dump(2) + "\n");
    }

    inline CodebookFile read_codebook(const std::filesystem::path &path)
    {
        CodebookFile f = decode_codebook(detail::read_file(path), path.string());
        const std::filesystem::path side = path.string() + ".json";
        if (std::filesystem::exists(side))
        {
            const json j = json::parse(detail::read_file(side), nullptr, false);
            if (!j.is_discarded() && j.contains("design"))
                f.design = j["design"];
        }
        return f;
    }
}
