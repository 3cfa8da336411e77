/*
 * Copyright 2026 The racert Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "racert/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include "racert/benchmarks.hpp"
#include "racert/errors.hpp"

namespace racert {

namespace {

struct TableDef {
    std::string example;
    std::vector<ConditionId> conditions;
    std::vector<double> ps;
    std::vector<std::string> templates;
};

// Preset grids. table1..table3 were polynomial SDP studies; here they are
// attempted with network templates.
const std::map<std::string, TableDef>& tables()
{
    using C = ConditionId;
    static const std::map<std::string, TableDef> t{
        {"table1", {"ex1", {C::BC1, C::BC4, C::BC5}, {0.15, 0.5, 0.65}, {"net8x8"}}},
        {"table2", {"ex2", {C::BC1, C::AS, C::BC4, C::BC5}, {0.6, 0.85, 0.9}, {"net8x8"}}},
        {"table3", {"ex3", {C::BC1, C::AS, C::BC4, C::BC5}, {0.8}, {"net8x8"}}},
        {"table4",
         {"ex3",
          {C::BC1, C::AS, C::BC2, C::BC3, C::BC4, C::BC4_RESTRICTED, C::BC5},
          {0.6, 0.8},
          {"net4x4", "net8x8"}}},
        {"table5", {"ex4", {C::BC1, C::BC4, C::BC5}, {0.4, 0.6}, {"net4x4", "net8x8"}}},
    };
    return t;
}

std::string fmt_p(double p)
{
    std::ostringstream os;
    os << p;
    return os.str();
}

} // namespace

std::string scalars_compact(const Scalars& s)
{
    std::ostringstream os;
    os << std::setprecision(10);
    const char* sep = "";
    auto put = [&](const char* k, const std::optional<double>& v) {
        if (v) {
            os << sep << k << '=' << *v;
            sep = ";";
        }
    };
    put("eps", s.eps);
    put("lambda", s.lambda);
    put("gamma", s.gamma);
    put("delta", s.delta);
    put("lambda_prime", s.lambda_prime);
    put("p", s.p);
    if (s.x0) {
        os << sep << "x0=";
        for (std::size_t i = 0; i < s.x0->size(); ++i) {
            os << (i ? " " : "") << (*s.x0)[i];
        }
    }
    return os.str();
}

std::vector<BenchCell> bench_suite(const std::string& selector, const std::vector<std::uint64_t>& seeds)
{
    std::vector<BenchCell> out;
    std::stringstream ss(selector);
    std::string token;
    while (std::getline(ss, token, ',')) {
        token.erase(std::remove_if(token.begin(), token.end(), ::isspace), token.end());
        if (token.empty()) {
            continue;
        }
        std::optional<double> p_filter;
        std::optional<ConditionId> c_filter;
        if (const auto at = token.find('@'); at != std::string::npos) {
            try {
                p_filter = std::stod(token.substr(at + 1));
            } catch (const std::exception&) {
                throw ParseError("suite", "bad threshold in '" + token + "'");
            }
            token = token.substr(0, at);
        }
        if (const auto slash = token.find('/'); slash != std::string::npos) {
            c_filter = condition_from_string(token.substr(slash + 1));
            token = token.substr(0, slash);
        }
        std::vector<const TableDef*> defs;
        if (const auto it = tables().find(token); it != tables().end()) {
            defs.push_back(&it->second);
        } else {
            for (const auto& [name, def] : tables()) {
                if (def.example == token) {
                    defs.push_back(&def);
                }
            }
            if (defs.empty()) {
                throw ParseError("suite", "unknown table or example '" + token + "'");
            }
        }
        for (const TableDef* def : defs) {
            for (ConditionId c : def->conditions) {
                if (c_filter && *c_filter != c) {
                    continue;
                }
                for (double p : def->ps) {
                    if (p_filter && std::abs(*p_filter - p) > 1e-12) {
                        continue;
                    }
                    for (const auto& t : def->templates) {
                        for (std::uint64_t seed : seeds) {
                            out.push_back({def->example, c, t, p, seed});
                        }
                    }
                }
            }
        }
    }
    auto key = [](const BenchCell& c) { return std::make_tuple(c.example, to_string(c.condition), c.templ, c.p, c.seed); };
    std::sort(out.begin(), out.end(), [&](const BenchCell& a, const BenchCell& b) { return key(a) < key(b); });
    out.erase(std::unique(out.begin(), out.end(), [&](const BenchCell& a, const BenchCell& b) { return key(a) == key(b); }),
              out.end());
    return out;
}

namespace {

BenchRow run_cell(const BenchCell& cell, const CegisConfig& base)
{
    BenchRow row;
    row.cell = cell;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        ConditionInstance tmpl;
        tmpl.id = cell.condition;
        tmpl.problem = std::make_shared<const ReachAvoidProblem>(benchmark_problem(cell.example));
        tmpl.scalars = scalars_for_threshold(cell.condition, cell.p);
        CegisConfig cfg = base;
        cfg.seed = cell.seed;
        cfg.threads = 1;
        cfg.templ = TemplateSpec::parse(cell.templ);
        const CegisOutcome out = run_cegis(tmpl, cfg);
        row.scalars = scalars_compact(out.feasible ? out.scalars : out.state.scalars);
        row.status = out.feasible ? "Feasible" : "Failed";
    } catch (const ResourceLimitError& e) {
        row.status = "ResourceLimit";
        row.detail = e.what();
    } catch (const std::exception& e) {
        row.status = "Error";
        row.detail = e.what();
    }
    row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

} // namespace

std::vector<BenchRow> run_bench(const std::vector<BenchCell>& cells, const CegisConfig& base, unsigned jobs)
{
    std::vector<BenchRow> rows(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            rows[i] = run_cell(cells[i], base);
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(1, cells.size()))));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < n; ++w) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    auto key = [](const BenchRow& r) {
        return std::make_tuple(r.cell.example, to_string(r.cell.condition), r.cell.templ, r.cell.p, r.cell.seed);
    };
    std::sort(rows.begin(), rows.end(), [&](const BenchRow& a, const BenchRow& b) { return key(a) < key(b); });
    return rows;
}

std::string bench_csv_header()
{
    return "example,condition,template,p,scalars,status,wall_time,seed\n";
}

std::string bench_csv(const std::vector<BenchRow>& rows)
{
    std::ostringstream os;
    os << bench_csv_header();
    for (const auto& r : rows) {
        os << r.cell.example << ',' << to_string(r.cell.condition) << ',' << r.cell.templ << ',' << fmt_p(r.cell.p)
           << ',' << r.scalars << ',' << r.status << ',' << std::fixed << std::setprecision(3) << r.wall_time
           << std::defaultfloat << ',' << r.cell.seed << '\n';
    }
    return os.str();
}

} // namespace racert
