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

#include "racert/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iomanip>
#include <sstream>
#include <thread>

#include "racert/errors.hpp"
#include "racert/rng.hpp"

namespace racert {

std::string to_string(VerifyStatus s)
{
    switch (s) {
    case VerifyStatus::Certified: return "Certified";
    case VerifyStatus::Violated: return "Violated";
    case VerifyStatus::Inconclusive: return "Inconclusive";
    }
    return "?";
}

std::vector<Counterexample> VerificationVerdict::counterexamples() const
{
    std::vector<Counterexample> out;
    for (const auto& c : clauses) {
        out.insert(out.end(), c.counterexamples.begin(), c.counterexamples.end());
    }
    return out;
}

std::vector<Counterexample> VerificationVerdict::hard_points() const
{
    std::vector<Counterexample> out;
    for (const auto& c : clauses) {
        for (const Cell& cell : c.inconclusive) {
            out.push_back({c.label, cell.center, 0.0});
        }
    }
    return out;
}

namespace {

enum class Outcome { Pass, GuardSkip, Violated, Inconclusive };

struct CellResult {
    Outcome outcome = Outcome::Pass;
    double margin = 0.0;
    double slack = 0.0;
    Vec cex;
    double cex_residual = 0.0;
    std::size_t evaluations = 0;
};

std::uint64_t point_hash(std::span<const double> x)
{
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    for (double v : x) {
        std::uint64_t bits = 0;
        std::memcpy(&bits, &v, sizeof bits);
        h = derive_seed(h, bits);
    }
    return h;
}

class ClauseChecker {
public:
    ClauseChecker(const ResidualClause& clause, const CertificateMap& certs, const SystemModel& system,
                  const QuadratureRule& rule, std::uint64_t seed, int probes)
        : clause_(clause), certs_(certs), system_(system), rule_(rule), seed_(seed), probes_(probes)
    {
    }

    CellResult check(const Cell& cell) const
    {
        CellResult res;
        const std::size_t n = cell.center.size();
        const Box box = cell.box();
        if (clause_.guard) {
            const Guard& g = *clause_.guard;
            const Certificate& gc = certs_.at(g.role);
            const double v = gc.evaluate(cell.center);
            const double slack = weighted(gc.gradient_bound(box), cell.radius);
            // excluded only when the guard fails on the whole cell
            if ((g.upper && v - slack > g.threshold) || (!g.upper && v + slack < g.threshold)) {
                res.outcome = Outcome::GuardSkip;
                return res;
            }
        }
        const double center = clause_residual(clause_, certs_, system_, rule_, cell.center);
        res.evaluations = 1;
        res.slack = weighted(residual_gradient_bound(box), cell.radius);
        res.margin = center + res.slack;
        if (res.margin <= 0.0) {
            res.outcome = Outcome::Pass;
            return res;
        }
        // violation search: center, 2n axis points, then seeded random points
        std::vector<Vec> probes;
        probes.push_back(cell.center);
        for (std::size_t j = 0; j < n; ++j) {
            for (double s : {-1.0, 1.0}) {
                Vec p = cell.center;
                p[j] += s * cell.radius[j];
                probes.push_back(std::move(p));
            }
        }
        Rng rng(derive_seed(seed_, point_hash(cell.center)));
        for (int k = 0; k < probes_; ++k) {
            Vec p(n);
            for (std::size_t j = 0; j < n; ++j) {
                p[j] = cell.center[j] + cell.radius[j] * (2.0 * rng.uniform01() - 1.0);
            }
            probes.push_back(std::move(p));
        }
        for (std::size_t k = 0; k < probes.size(); ++k) {
            const Vec& p = probes[k];
            if (!clause_.domain.contains(p)) {
                continue;
            }
            if (clause_.guard && !clause_.guard->admits(certs_.at(clause_.guard->role).evaluate(p))) {
                continue;
            }
            const double r = k == 0 ? center : clause_residual(clause_, certs_, system_, rule_, p);
            res.evaluations += k == 0 ? 0 : 1;
            if (r > 0.0) {
                res.outcome = Outcome::Violated;
                res.cex = p;
                res.cex_residual = r;
                return res;
            }
        }
        res.outcome = Outcome::Inconclusive;
        return res;
    }

private:
    static double weighted(const Vec& g, const Vec& rad)
    {
        double s = 0.0;
        for (std::size_t j = 0; j < g.size(); ++j) {
            s += g[j] * rad[j];
        }
        return s > 0.0 ? detail::up(s) : s;
    }

    Vec residual_gradient_bound(const Box& box) const
    {
        const std::size_t n = box.dim();
        Vec G(n, 0.0);
        bool have_image = false;
        Box image;
        std::vector<Vec> jac;
        for (const Term& t : clause_.terms) {
            const Certificate& c = certs_.at(t.role);
            const double a = std::abs(t.coef);
            if (!t.expectation) {
                const Vec g = c.gradient_bound(box);
                for (std::size_t j = 0; j < n; ++j) {
                    G[j] += a * g[j];
                }
                continue;
            }
            if (!have_image) {
                image = system_.image(box);
                jac = system_.jacobian_bound(box);
                have_image = true;
            }
            // chain rule per node: |d g(f)/dx_j| <= sum_i G_g,i(image) J_ij(cell)
            const Vec gg = c.gradient_bound(image);
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    s += gg[i] * jac[i][j];
                }
                G[j] += a * s;
            }
        }
        for (double& v : G) {
            v = v > 0.0 ? detail::up(v * (1.0 + 1e-12)) : v;
        }
        return G;
    }

    const ResidualClause& clause_;
    const CertificateMap& certs_;
    const SystemModel& system_;
    const QuadratureRule& rule_;
    std::uint64_t seed_;
    int probes_;
};

std::vector<CellResult> check_cells(const ClauseChecker& checker, const std::vector<Cell>& cells, unsigned threads)
{
    std::vector<CellResult> out(cells.size());
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, cells.size()));
    if (workers <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out[i] = checker.check(cells[i]);
        }
        return out;
    }
    // static contiguous partition; results land in cell order
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (cells.size() + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                const std::size_t lo = w * chunk;
                const std::size_t hi = std::min(cells.size(), lo + chunk);
                for (std::size_t i = lo; i < hi; ++i) {
                    out[i] = checker.check(cells[i]);
                }
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    for (auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

void canonical_sort(std::vector<Counterexample>& cex, std::size_t cap)
{
    std::sort(cex.begin(), cex.end(), [](const Counterexample& a, const Counterexample& b) {
        if (a.residual != b.residual) {
            return a.residual > b.residual;
        }
        return a.x < b.x;
    });
    if (cex.size() > cap) {
        cex.resize(cap);
    }
}

// Folds per-cell results into the clause report (cells in grid order).
std::size_t merge(ClauseReport& rep, const std::vector<Cell>& cells, const std::vector<CellResult>& results,
                  std::size_t cap)
{
    std::size_t evals = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        const CellResult& r = results[i];
        evals += r.evaluations;
        ++rep.cells_checked;
        if (r.outcome == Outcome::GuardSkip) {
            ++rep.cells_guard_skipped;
            continue;
        }
        if (r.margin > rep.worst_margin) {
            rep.worst_margin = r.margin;
            rep.worst_center = cells[i].center;
        }
        switch (r.outcome) {
        case Outcome::Pass: ++rep.cells_certified; break;
        case Outcome::Violated: rep.counterexamples.push_back({rep.label, r.cex, r.cex_residual}); break;
        case Outcome::Inconclusive:
            rep.inconclusive.push_back(cells[i]);
            rep.inconclusive_slack.push_back(r.slack);
            break;
        case Outcome::GuardSkip: break;
        }
    }
    canonical_sort(rep.counterexamples, cap);
    return evals;
}

VerifyStatus clause_status(const ClauseReport& rep)
{
    if (!rep.counterexamples.empty()) {
        return VerifyStatus::Violated;
    }
    return rep.inconclusive.empty() ? VerifyStatus::Certified : VerifyStatus::Inconclusive;
}

VerifyStatus overall(const std::vector<ClauseReport>& reps)
{
    bool inconclusive = false;
    for (const auto& r : reps) {
        if (r.status == VerifyStatus::Violated) {
            return VerifyStatus::Violated;
        }
        inconclusive = inconclusive || r.status == VerifyStatus::Inconclusive;
    }
    return inconclusive ? VerifyStatus::Inconclusive : VerifyStatus::Certified;
}

void check_budget(std::size_t used, const VerifyOptions& o)
{
    if (used > o.max_evaluations) {
        throw ResourceLimitError("residual evaluations " + std::to_string(used) + " exceed cap of " +
                                 std::to_string(o.max_evaluations));
    }
}

} // namespace

VerificationVerdict verify(const ConditionInstance& instance, double r, const VerifyOptions& options)
{
    return verify(clauses(instance), instance.certificates, instance.problem->system, r, options);
}

VerificationVerdict refine(const VerificationVerdict& verdict, const ConditionInstance& instance, double r_next,
                           const VerifyOptions& options)
{
    if (verdict.status != VerifyStatus::Inconclusive) {
        return verdict;
    }
    return refine(verdict, clauses(instance), instance.certificates, instance.problem->system, r_next, options);
}

VerificationVerdict verify(const std::vector<ResidualClause>& cls, const CertificateMap& certs,
                           const SystemModel& system, double r, const VerifyOptions& options)
{
    if (!(r > 0.0)) {
        throw ContractViolation("verify: resolution must be positive");
    }
    if (options.quad_order < 1) {
        throw ContractViolation("verify: quadrature order must be >= 1");
    }
    const auto rule = system.quadrature(options.quad_order);
    VerificationVerdict v;
    v.resolution = r;
    v.quad_order = options.quad_order;
    std::size_t total_cells = 0;
    for (std::size_t ci = 0; ci < cls.size(); ++ci) {
        const ResidualClause& clause = cls[ci];
        const auto grid = region_grid(clause.domain, r, options.max_cells);
        total_cells += grid.size();
        if (total_cells > options.max_cells) {
            throw ResourceLimitError("verification cells exceed cap of " + std::to_string(options.max_cells));
        }
        check_budget(v.evaluations + grid.size(), options);
        std::vector<Cell> cells;
        cells.reserve(grid.size());
        for (const auto& g : grid) {
            cells.push_back(g.cell);
        }
        const ClauseChecker checker(clause, certs, system, *rule,
                                    derive_seed(options.seed, ci), options.random_probes);
        const auto results = check_cells(checker, cells, options.threads);
        ClauseReport rep;
        rep.label = clause.label;
        v.evaluations += merge(rep, cells, results, options.max_counterexamples);
        check_budget(v.evaluations, options);
        rep.status = clause_status(rep);
        v.clauses.push_back(std::move(rep));
    }
    v.status = overall(v.clauses);
    return v;
}

VerificationVerdict refine(const VerificationVerdict& verdict, const std::vector<ResidualClause>& cls,
                           const CertificateMap& certs, const SystemModel& system, double r_next,
                           const VerifyOptions& options)
{
    if (verdict.status != VerifyStatus::Inconclusive) {
        return verdict;
    }
    if (!(r_next > 0.0) || !(r_next < verdict.resolution)) {
        throw ContractViolation("refine: r_next must be positive and below the previous resolution");
    }
    if (cls.size() != verdict.clauses.size()) {
        throw ContractViolation("refine: verdict does not belong to this instance");
    }
    const auto rule = system.quadrature(verdict.quad_order);
    VerificationVerdict v = verdict;
    v.resolution = r_next;
    for (std::size_t ci = 0; ci < cls.size(); ++ci) {
        ClauseReport& rep = v.clauses[ci];
        if (rep.status != VerifyStatus::Inconclusive) {
            continue;
        }
        std::vector<Cell> cells;
        for (const Cell& parent : rep.inconclusive) {
            for (const auto& g : subdivide(parent, cls[ci].domain, r_next, options.max_cells)) {
                cells.push_back(g.cell);
            }
            if (cells.size() > options.max_cells) {
                throw ResourceLimitError("refinement cells exceed cap of " + std::to_string(options.max_cells));
            }
        }
        check_budget(v.evaluations + cells.size(), options);
        const ClauseChecker checker(cls[ci], certs, system, *rule,
                                    derive_seed(options.seed, ci), options.random_probes);
        const auto results = check_cells(checker, cells, options.threads);
        ClauseReport next;
        next.label = rep.label;
        v.evaluations += merge(next, cells, results, options.max_counterexamples);
        check_budget(v.evaluations, options);
        // parents were counted as checked before; only add the new cells
        rep.cells_checked += next.cells_checked;
        rep.cells_guard_skipped += next.cells_guard_skipped;
        rep.cells_certified += next.cells_certified;
        rep.worst_margin = next.worst_margin;
        rep.worst_center = next.worst_center;
        rep.counterexamples = std::move(next.counterexamples);
        rep.inconclusive = std::move(next.inconclusive);
        rep.inconclusive_slack = std::move(next.inconclusive_slack);
        rep.status = clause_status(rep);
    }
    v.status = overall(v.clauses);
    return v;
}

VerificationVerdict verify_adaptive(const ConditionInstance& instance, double r0, double r_min,
                                    const VerifyOptions& options)
{
    VerificationVerdict v = verify(instance, r0, options);
    double r = r0;
    while (v.status == VerifyStatus::Inconclusive && r * 0.5 >= r_min * (1.0 - 1e-12)) {
        r *= 0.5;
        v = refine(v, instance, r, options);
    }
    return v;
}

namespace {

Json finite_or_null(double v)
{
    return std::isfinite(v) ? Json(v) : Json(nullptr);
}

std::string fmt(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

} // namespace

Json verdict_to_json(const VerificationVerdict& v)
{
    Json cl = Json::array();
    for (const auto& c : v.clauses) {
        Json cex = Json::array();
        for (const auto& e : c.counterexamples) {
            cex.push_back(Json{{"x", e.x}, {"residual", e.residual}});
        }
        cl.push_back(Json{{"label", c.label},
                          {"status", to_string(c.status)},
                          {"worst_margin", finite_or_null(c.worst_margin)},
                          {"worst_center", c.worst_center},
                          {"cells_checked", c.cells_checked},
                          {"cells_guard_skipped", c.cells_guard_skipped},
                          {"cells_certified", c.cells_certified},
                          {"cells_inconclusive", c.inconclusive.size()},
                          {"counterexamples", cex}});
    }
    return Json{{"schema_version", kSchemaVersion},
                {"status", to_string(v.status)},
                {"resolution", v.resolution},
                {"quad_order", v.quad_order},
                {"evaluations", v.evaluations},
                {"clauses", cl}};
}

std::string verdict_table(const VerificationVerdict& v)
{
    std::ostringstream os;
    os << "status " << to_string(v.status) << "  resolution " << v.resolution << "  quad_order " << v.quad_order
       << "  evaluations " << v.evaluations << "\n";
    os << std::left << std::setw(26) << "clause" << std::setw(14) << "status" << std::right << std::setw(14)
       << "worst_margin" << std::setw(10) << "cells" << std::setw(10) << "guarded" << std::setw(10) << "open"
       << std::setw(8) << "cex" << "\n";
    for (const auto& c : v.clauses) {
        os << std::left << std::setw(26) << c.label << std::setw(14) << to_string(c.status) << std::right
           << std::setw(14) << std::setprecision(4)
           << (std::isfinite(c.worst_margin) ? c.worst_margin : 0.0) << std::setw(10) << c.cells_checked
           << std::setw(10) << c.cells_guard_skipped << std::setw(10) << c.inconclusive.size() << std::setw(8)
           << c.counterexamples.size() << "\n";
    }
    return os.str();
}

std::string counterexamples_csv(const VerificationVerdict& v, std::size_t dim)
{
    std::ostringstream os;
    os << "clause";
    for (std::size_t i = 0; i < dim; ++i) {
        os << ",x" << i + 1;
    }
    os << ",residual\n";
    for (const auto& e : v.counterexamples()) {
        os << e.clause;
        for (double x : e.x) {
            os << ',' << fmt(x);
        }
        os << ',' << fmt(e.residual) << "\n";
    }
    return os.str();
}

std::string clause_csv(const VerificationVerdict& v)
{
    std::ostringstream os;
    os << "clause,worst_residual,worst_point\n";
    for (const auto& c : v.clauses) {
        double worst = -std::numeric_limits<double>::infinity();
        Vec at = c.worst_center;
        for (const auto& e : c.counterexamples) {
            if (e.residual > worst) {
                worst = e.residual;
                at = e.x;
            }
        }
        if (c.counterexamples.empty()) {
            worst = c.worst_margin;
        }
        os << c.label << ',' << (std::isfinite(worst) ? fmt(worst) : "") << ',';
        for (std::size_t i = 0; i < at.size(); ++i) {
            os << (i ? " " : "") << fmt(at[i]);
        }
        os << "\n";
    }
    return os.str();
}

} // namespace racert
