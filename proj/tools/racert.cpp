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

// racert: batch front end for verification, synthesis, estimation,
// conversion and benchmark runs.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "racert/bench.hpp"
#include "racert/benchmarks.hpp"
#include "racert/cegis.hpp"
#include "racert/conditions.hpp"
#include "racert/errors.hpp"
#include "racert/io.hpp"
#include "racert/oracle.hpp"
#include "racert/verifier.hpp"

namespace fs = std::filesystem;
using namespace racert;

namespace {

constexpr int kExitCertified = 0;
constexpr int kExitViolated = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitResource = 3;
constexpr int kExitUsage = 64;
constexpr int kExitInternal = 70;

int exit_for(VerifyStatus s)
{
    switch (s) {
    case VerifyStatus::Certified: return kExitCertified;
    case VerifyStatus::Violated: return kExitViolated;
    case VerifyStatus::Inconclusive: return kExitInconclusive;
    }
    return kExitInternal;
}

Vec parse_vec(const std::string& text, const std::string& field)
{
    Vec out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(part, &used));
            if (part.find_first_not_of(" \t", used) != std::string::npos) {
                throw std::invalid_argument(part);
            }
        } catch (const std::exception&) {
            throw ParseError(field, "expected comma-separated numbers, got '" + text + "'");
        }
    }
    if (out.empty()) {
        throw ParseError(field, "expected at least one number");
    }
    return out;
}

// name=value, value a number or (for x0) a comma list
void apply_scalar(Scalars& s, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ParseError("scalar", "expected name=value, got '" + assignment + "'");
    }
    const std::string name = assignment.substr(0, eq);
    const std::string field = "scalar." + name;
    const Vec v = parse_vec(assignment.substr(eq + 1), field);
    if (name == "x0") {
        s.x0 = v;
        return;
    }
    if (v.size() != 1) {
        throw ParseError(field, "expected a single number");
    }
    if (name == "eps") {
        s.eps = v[0];
    } else if (name == "lambda") {
        s.lambda = v[0];
    } else if (name == "gamma") {
        s.gamma = v[0];
    } else if (name == "delta") {
        s.delta = v[0];
    } else if (name == "lambda_prime") {
        s.lambda_prime = v[0];
    } else if (name == "p") {
        s.p = v[0];
    } else {
        throw ParseError(field, "unknown scalar name");
    }
}

void apply_cert(CertificateMap& certs, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ParseError("cert", "expected role=file, got '" + assignment + "'");
    }
    Role role;
    try {
        role = role_from_string(assignment.substr(0, eq));
    } catch (const Error&) {
        throw ParseError("cert", "unknown role '" + assignment.substr(0, eq) + "'");
    }
    const std::string path = assignment.substr(eq + 1);
    certs.insert_or_assign(role, certificate_from_json(read_json_file(path), path));
}

std::string cert_file_name(Role r)
{
    return "cert_" + to_string(r) + ".json";
}

// Writes certificates next to condition.json and returns the role -> file map.
void write_condition(const fs::path& dir, const ConditionDocument& doc)
{
    fs::create_directories(dir);
    std::map<Role, std::string> files;
    for (const auto& [role, c] : doc.certificates) {
        files[role] = cert_file_name(role);
        write_text_file(dir / files[role], certificate_to_json(c).dump(2) + "\n");
    }
    write_text_file(dir / "condition.json", condition_to_json(doc, files).dump(2) + "\n");
}

struct VerifyArgs {
    double resolution = 0.05;
    double min_resolution = -1.0;
    int quad_order = 5;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::size_t max_cells = 10'000'000;
    std::string out;
};

VerificationVerdict run_verification(const ConditionInstance& inst, const VerifyArgs& a)
{
    VerifyOptions opts;
    opts.quad_order = a.quad_order;
    opts.seed = a.seed;
    opts.threads = a.threads;
    opts.max_cells = a.max_cells;
    const double r_min = a.min_resolution > 0.0 ? std::min(a.min_resolution, a.resolution) : a.resolution;
    return verify_adaptive(inst, a.resolution, r_min, opts);
}

void write_verdict(const fs::path& dir, const VerificationVerdict& v, std::size_t dim)
{
    fs::create_directories(dir);
    write_text_file(dir / "verdict.json", verdict_to_json(v).dump(2) + "\n");
    write_text_file(dir / "counterexamples.csv", counterexamples_csv(v, dim));
    write_text_file(dir / "clauses.csv", clause_csv(v));
}

// ---------------------------------------------------------------- verify

struct VerifyCmd {
    std::string condition;
    std::string problem;
    std::vector<std::string> certs;
    std::vector<std::string> scalars;
    VerifyArgs args;
    bool json = false;
};

int cmd_verify(const VerifyCmd& c)
{
    ConditionDocument doc = load_condition(c.condition);
    for (const auto& s : c.certs) {
        apply_cert(doc.certificates, s);
    }
    for (const auto& s : c.scalars) {
        apply_scalar(doc.scalars, s);
    }
    const std::string pref = c.problem.empty() ? doc.problem_ref : c.problem;
    if (pref.empty()) {
        throw ParseError("problem", "no problem given on the command line or in the condition file");
    }
    ConditionInstance inst;
    inst.id = doc.id;
    inst.problem = std::make_shared<const ReachAvoidProblem>(load_problem(pref));
    inst.certificates = doc.certificates;
    inst.scalars = doc.scalars;
    inst.validate();
    const VerificationVerdict v = run_verification(inst, c.args);
    if (!c.args.out.empty()) {
        write_verdict(c.args.out, v, inst.problem->system.state_dim());
    }
    if (c.json) {
        std::cout << verdict_to_json(v).dump(2) << "\n";
    } else {
        std::cout << verdict_table(v);
    }
    return exit_for(v.status);
}

// ---------------------------------------------------------------- synthesize

struct SynthCmd {
    std::string problem;
    std::string condition_id;
    double p = -1.0;
    std::vector<std::string> scalars;
    std::string templ;
    std::string config;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double resolution = -1.0;
    int quad_order = -1;
    unsigned threads = 0;
    std::string out = "synth_out";
};

int cmd_synthesize(const SynthCmd& c)
{
    CegisConfig cfg;
    if (!c.config.empty()) {
        cfg = cegis_config_from_json(read_json_file(c.config));
    }
    if (c.seed_set) {
        cfg.seed = c.seed;
    }
    if (!c.templ.empty()) {
        cfg.templ = TemplateSpec::parse(c.templ);
    }
    if (c.resolution > 0.0) {
        cfg.resolution = c.resolution;
        cfg.min_resolution = std::min(cfg.min_resolution, c.resolution);
    }
    if (c.quad_order > 0) {
        cfg.verify_quad_order = c.quad_order;
    }
    if (c.threads > 0) {
        cfg.threads = c.threads;
    }
    cfg.validate();

    ConditionInstance tmpl;
    try {
        tmpl.id = condition_from_string(c.condition_id);
    } catch (const Error&) {
        throw ParseError("condition-id", "unknown condition '" + c.condition_id + "'");
    }
    tmpl.problem = std::make_shared<const ReachAvoidProblem>(load_problem(c.problem));
    if (c.p >= 0.0) {
        tmpl.scalars = scalars_for_threshold(tmpl.id, c.p);
    }
    for (const auto& s : c.scalars) {
        apply_scalar(tmpl.scalars, s);
    }

    const fs::path out = c.out;
    fs::create_directories(out);
    std::ofstream tele(out / "telemetry.jsonl");
    const CegisOutcome res = run_cegis(tmpl, cfg, [&](const Json& rec) { tele << rec.dump() << "\n" << std::flush; });

    ConditionDocument doc;
    doc.id = tmpl.id;
    doc.problem_ref = c.problem;
    doc.scalars = res.feasible ? res.scalars : res.state.scalars;
    doc.certificates = res.feasible ? res.certificates : res.state.certificates;
    write_condition(out, doc);
    const std::size_t dim = tmpl.problem->system.state_dim();
    if (res.verdict) {
        write_verdict(out / "synthesis", *res.verdict, dim);
    }
    Json summary{{"schema_version", kSchemaVersion},
                 {"feasible", res.feasible},
                 {"condition", to_string(tmpl.id)},
                 {"template", cfg.templ.name()},
                 {"scalars", scalars_to_json(doc.scalars)},
                 {"iterations", res.telemetry.size()}};
    if (!res.feasible) {
        write_text_file(out / "summary.json", summary.dump(2) + "\n");
        std::cout << summary.dump(2) << "\n";
        if (res.state.last_verdict && res.state.last_verdict->status == VerifyStatus::Violated) {
            return kExitViolated;
        }
        return kExitInconclusive;
    }

    // Independent re-check: reload what was written and verify on a finer grid.
    const ConditionDocument back = load_condition(out / "condition.json");
    ConditionInstance inst;
    inst.id = back.id;
    inst.problem = tmpl.problem;
    inst.certificates = back.certificates;
    inst.scalars = back.scalars;
    inst.validate();
    VerifyArgs va;
    va.resolution = 0.5 * cfg.resolution;
    va.min_resolution = 0.5 * cfg.min_resolution;
    va.quad_order = cfg.verify_quad_order;
    va.seed = cfg.seed + 1;
    va.threads = cfg.threads;
    const VerificationVerdict check = run_verification(inst, va);
    write_verdict(out, check, dim);
    summary["recheck"] = {{"status", to_string(check.status)}, {"resolution", check.resolution}};
    write_text_file(out / "summary.json", summary.dump(2) + "\n");
    std::cout << summary.dump(2) << "\n";
    return exit_for(check.status);
}

// ---------------------------------------------------------------- estimate

struct EstimateCmd {
    std::string problem;
    std::string x0;
    int init_grid = 0;
    std::size_t N = 100000;
    int K = 1000;
    double alpha = 1e-3;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string out;
};

int cmd_estimate(const EstimateCmd& c)
{
    const ReachAvoidProblem prob = load_problem(c.problem);
    const std::size_t n = prob.system.state_dim();
    Json result;
    if (!c.x0.empty()) {
        const Vec x0 = parse_vec(c.x0, "x0");
        if (x0.size() != n) {
            throw ParseError("x0", "expected " + std::to_string(n) + " coordinates");
        }
        if (!prob.init.contains(x0)) {
            throw ParseError("x0", "point is not in the initial set");
        }
        result = estimate_to_json(estimate_reach_avoid(prob, x0, c.N, c.K, c.alpha, c.seed, c.threads));
        result["x0"] = x0;
    } else {
        if (c.init_grid <= 0) {
            throw ParseError("init-grid", "give --x0 or a positive --init-grid");
        }
        const Box& b = prob.init.bounding_box();
        std::vector<std::size_t> idx(n, 0);
        Json points = Json::array();
        double min_lo = 1.0;
        Vec argmin;
        std::size_t total = 1;
        for (std::size_t i = 0; i < n; ++i) {
            total *= static_cast<std::size_t>(c.init_grid);
        }
        for (std::size_t k = 0; k < total; ++k) {
            Vec x(n);
            std::size_t rem = k;
            for (std::size_t i = n; i-- > 0;) {
                const std::size_t j = rem % static_cast<std::size_t>(c.init_grid);
                rem /= static_cast<std::size_t>(c.init_grid);
                x[i] = b.lo[i] + (static_cast<double>(j) + 0.5) * (b.hi[i] - b.lo[i]) / c.init_grid;
            }
            if (!prob.init.contains(x)) {
                continue;
            }
            const ProbabilityEstimate e =
                estimate_reach_avoid(prob, x, c.N, c.K, c.alpha, derive_seed(c.seed, k), c.threads);
            Json ej = estimate_to_json(e);
            ej["x0"] = x;
            points.push_back(ej);
            if (e.lo < min_lo || argmin.empty()) {
                min_lo = e.lo;
                argmin = x;
            }
        }
        if (points.empty()) {
            throw ParseError("init-grid", "no grid point falls inside the initial set");
        }
        result = Json{{"schema_version", kSchemaVersion}, {"min_lo", min_lo}, {"argmin", argmin}, {"points", points}};
    }
    if (!c.out.empty()) {
        fs::create_directories(c.out);
        write_text_file(fs::path(c.out) / "estimate.json", result.dump(2) + "\n");
    }
    std::cout << result.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------- convert

struct ConvertCmd {
    std::string conversion;
    std::string condition;
    std::vector<std::string> certs;
    std::vector<std::string> scalars;
    std::string out;
};

double need(const std::optional<double>& v, const std::string& name)
{
    if (!v) {
        throw ParseError("scalar." + name, "required by this conversion");
    }
    return *v;
}

const Certificate& need_cert(const CertificateMap& m, Role r)
{
    const auto it = m.find(r);
    if (it == m.end()) {
        throw ParseError("cert." + to_string(r), "required by this conversion");
    }
    return it->second;
}

int cmd_convert(const ConvertCmd& c)
{
    ConditionDocument in;
    if (!c.condition.empty()) {
        in = load_condition(c.condition);
    }
    for (const auto& s : c.certs) {
        apply_cert(in.certificates, s);
    }
    for (const auto& s : c.scalars) {
        apply_scalar(in.scalars, s);
    }
    ConditionDocument outdoc;
    outdoc.problem_ref = in.problem_ref;
    Json report{{"conversion", c.conversion}};
    const Scalars& s = in.scalars;
    if (c.conversion == "aras-to-bc4r" || c.conversion == "mras-to-bc4r") {
        const Certificate& V = need_cert(in.certificates, Role::V);
        const Bc4Restricted r =
            c.conversion == "aras-to-bc4r"
                ? aras_to_bc4restricted(V, need(s.eps, "eps"), need(s.p, "p"))
                : mras_to_bc4restricted(V, need(s.gamma, "gamma"), need(s.delta, "delta"),
                                        need(s.lambda_prime, "lambda_prime"));
        outdoc.id = ConditionId::BC4_RESTRICTED;
        outdoc.certificates.emplace(Role::h, r.h);
        outdoc.scalars.lambda = r.lambda_min;
        outdoc.scalars.p = r.p;
        report["lambda_min"] = r.lambda_min;
        report["p"] = r.p;
    } else if (c.conversion == "aras-to-mras") {
        const double p = need(s.p, "p");
        if (!(p >= 0.0 && p < 1.0)) {
            throw ParameterDomainError("aras-to-mras: p must lie in [0, 1)");
        }
        const MrasParams m = aras_to_mras(need(s.eps, "eps"), 1.0 / (1.0 - p));
        outdoc.id = ConditionId::BC3;
        outdoc.certificates = in.certificates;
        outdoc.scalars.gamma = m.gamma;
        outdoc.scalars.delta = m.delta;
        outdoc.scalars.lambda_prime = m.lambda_prime;
        report["gamma"] = m.gamma;
        report["delta"] = m.delta;
        report["lambda_prime"] = m.lambda_prime;
        report["lambda_min"] = mras_lambda_min(m.gamma, m.delta, m.lambda_prime);
        report["p"] = p;
    } else if (c.conversion == "mras-to-aras") {
        const ArasParams a = mras_to_aras(need(s.gamma, "gamma"), need(s.delta, "delta"),
                                          need(s.lambda_prime, "lambda_prime"));
        outdoc.id = ConditionId::BC2;
        outdoc.certificates = in.certificates;
        outdoc.scalars.eps = a.eps;
        outdoc.scalars.p = 1.0 - 1.0 / a.lambda;
        report["eps"] = a.eps;
        report["lambda"] = a.lambda;
        report["lambda_min"] = 1.0 / (1.0 + a.eps / a.lambda);
        report["p"] = *outdoc.scalars.p;
    } else if (c.conversion == "bc5-transform") {
        const auto [g1, g2] = bc5_transform(need_cert(in.certificates, Role::h1), need_cert(in.certificates, Role::h2));
        outdoc.id = in.id == ConditionId::BC5_UPPER ? ConditionId::BC5 : ConditionId::BC5_UPPER;
        outdoc.certificates.emplace(Role::h1, g1);
        outdoc.certificates.emplace(Role::h2, g2);
        outdoc.scalars = in.scalars;
        if (s.p) {
            report["p"] = *s.p;
        }
    } else {
        throw ParseError("conversion", "unknown conversion '" + c.conversion + "'");
    }
    report["condition"] = to_string(outdoc.id);
    if (!c.out.empty()) {
        write_condition(c.out, outdoc);
    }
    std::cout << report.dump(2) << "\n";
    return 0;
}

// ---------------------------------------------------------------- bench

struct BenchCmd {
    std::string suite;
    std::string out = "bench_out";
    std::string seeds = "0";
    unsigned jobs = 1;
    std::string config;
};

int cmd_bench(const BenchCmd& c)
{
    CegisConfig base;
    if (!c.config.empty()) {
        base = cegis_config_from_json(read_json_file(c.config));
    }
    std::vector<std::uint64_t> seeds;
    for (double s : parse_vec(c.seeds, "seeds")) {
        if (s < 0 || s != std::floor(s)) {
            throw ParseError("seeds", "seeds must be non-negative integers");
        }
        seeds.push_back(static_cast<std::uint64_t>(s));
    }
    const auto cells = bench_suite(c.suite, seeds);
    const auto rows = run_bench(cells, base, c.jobs);
    fs::create_directories(c.out);
    write_text_file(fs::path(c.out) / "bench.csv", bench_csv(rows));
    std::cout << bench_csv(rows);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"racert: reach-avoid certificate workbench"};
    app.require_subcommand(1);

    auto add_verify_flags = [](CLI::App* s, VerifyArgs& a) {
        s->add_option("--resolution", a.resolution, "initial cell side")->check(CLI::PositiveNumber);
        s->add_option("--min-resolution", a.min_resolution, "refine inconclusive cells down to this side");
        s->add_option("--quad-order", a.quad_order, "quadrature points per disturbance axis")->check(CLI::PositiveNumber);
        s->add_option("--seed", a.seed);
        s->add_option("--threads", a.threads)->check(CLI::PositiveNumber);
        s->add_option("--max-cells", a.max_cells);
        s->add_option("--out", a.out, "report directory");
    };

    VerifyCmd vc;
    auto* sv = app.add_subcommand("verify", "check a condition on a grid");
    sv->add_option("--condition", vc.condition, "condition JSON")->required();
    sv->add_option("--problem", vc.problem, "problem JSON or ex1..ex4 (overrides the condition's)");
    sv->add_option("--cert", vc.certs, "role=file, overrides the condition's certificate");
    sv->add_option("--scalar", vc.scalars, "name=value override");
    sv->add_flag("--json", vc.json, "print the JSON verdict instead of the table");
    add_verify_flags(sv, vc.args);

    SynthCmd sc;
    auto* ss = app.add_subcommand("synthesize", "train certificates by CEGIS");
    ss->add_option("--problem", sc.problem)->required();
    ss->add_option("--condition-id", sc.condition_id)->required();
    ss->add_option("--p", sc.p, "probability threshold");
    ss->add_option("--scalar", sc.scalars, "name=value");
    ss->add_option("--template", sc.templ, "net8x8, net4x4, poly4, ...");
    ss->add_option("--config", sc.config, "CEGIS config JSON");
    ss->add_option("--seed", sc.seed)->each([&](const std::string&) { sc.seed_set = true; });
    ss->add_option("--resolution", sc.resolution);
    ss->add_option("--quad-order", sc.quad_order);
    ss->add_option("--threads", sc.threads);
    ss->add_option("--out", sc.out);

    EstimateCmd ec;
    auto* se = app.add_subcommand("estimate", "Monte Carlo reach-avoid probability");
    se->add_option("--problem", ec.problem)->required();
    auto* ox = se->add_option("--x0", ec.x0, "comma-separated initial state");
    auto* og = se->add_option("--init-grid", ec.init_grid, "grid points per axis over the initial set");
    ox->excludes(og);
    se->add_option("--N", ec.N)->check(CLI::PositiveNumber);
    se->add_option("--K", ec.K)->check(CLI::PositiveNumber);
    se->add_option("--alpha", ec.alpha);
    se->add_option("--seed", ec.seed);
    se->add_option("--threads", ec.threads)->check(CLI::PositiveNumber);
    se->add_option("--out", ec.out);

    ConvertCmd cc;
    auto* sx = app.add_subcommand("convert", "convert between condition forms");
    sx->add_option("--conversion", cc.conversion)
        ->required()
        ->check(CLI::IsMember({"aras-to-bc4r", "mras-to-bc4r", "aras-to-mras", "mras-to-aras", "bc5-transform"}));
    sx->add_option("--condition", cc.condition, "source condition JSON");
    sx->add_option("--cert", cc.certs, "role=file");
    sx->add_option("--scalar", cc.scalars, "name=value");
    sx->add_option("--out", cc.out);

    BenchCmd bc;
    auto* sb = app.add_subcommand("bench", "run a feasibility matrix");
    sb->add_option("--suite", bc.suite, "e.g. table4, ex3/BC4@0.6, table5,table4");
    sb->add_option("--out", bc.out);
    sb->add_option("--seeds", bc.seeds, "comma-separated seeds");
    sb->add_option("--jobs", bc.jobs)->check(CLI::PositiveNumber);
    sb->add_option("--config", bc.config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (*sv) {
            return cmd_verify(vc);
        }
        if (*ss) {
            return cmd_synthesize(sc);
        }
        if (*se) {
            return cmd_estimate(ec);
        }
        if (*sx) {
            return cmd_convert(cc);
        }
        if (*sb) {
            return cmd_bench(bc);
        }
    } catch (const ParseError& e) {
        std::cerr << "racert: invalid input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParameterDomainError& e) {
        std::cerr << "racert: parameter out of domain: " << e.what() << "\n";
        return kExitUsage;
    } catch (const MissingInvariantError& e) {
        std::cerr << "racert: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ContractViolation& e) {
        std::cerr << "racert: invalid input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ResourceLimitError& e) {
        std::cerr << "racert: resource limit: " << e.what() << "\n";
        return kExitResource;
    } catch (const std::exception& e) {
        std::cerr << "racert: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
