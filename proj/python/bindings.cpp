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

// Python bindings. Structured results cross the boundary as JSON text and
// are decoded on the Python side.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "racert/bench.hpp"
#include "racert/benchmarks.hpp"
#include "racert/cegis.hpp"
#include "racert/conditions.hpp"
#include "racert/errors.hpp"
#include "racert/io.hpp"
#include "racert/oracle.hpp"
#include "racert/verifier.hpp"

namespace py = pybind11;
using namespace racert;

namespace {

ConditionInstance instance_from(const std::string& condition_json, const std::string& base_dir,
                                const std::string& problem)
{
    const ConditionDocument doc = condition_from_json(Json::parse(condition_json), base_dir);
    const std::string pref = problem.empty() ? doc.problem_ref : problem;
    if (pref.empty()) {
        throw ParseError("problem", "no problem given");
    }
    ConditionInstance inst;
    inst.id = doc.id;
    inst.problem = std::make_shared<const ReachAvoidProblem>(load_problem(pref));
    inst.certificates = doc.certificates;
    inst.scalars = doc.scalars;
    inst.validate();
    return inst;
}

std::string verify_json(const std::string& condition_json, const std::string& base_dir, const std::string& problem,
                        double resolution, double min_resolution, int quad_order, std::uint64_t seed, unsigned threads)
{
    const ConditionInstance inst = instance_from(condition_json, base_dir, problem);
    VerifyOptions opts;
    opts.quad_order = quad_order;
    opts.seed = seed;
    opts.threads = threads;
    VerificationVerdict v;
    {
        py::gil_scoped_release nogil;
        v = verify_adaptive(inst, resolution, std::min(min_resolution > 0 ? min_resolution : resolution, resolution),
                            opts);
    }
    return verdict_to_json(v).dump();
}

std::string synthesize_json(const std::string& problem, const std::string& condition_id, double p,
                            const std::string& templ, std::uint64_t seed, const std::string& config_json)
{
    CegisConfig cfg = config_json.empty() ? CegisConfig{} : cegis_config_from_json(Json::parse(config_json));
    cfg.seed = seed;
    if (!templ.empty()) {
        cfg.templ = TemplateSpec::parse(templ);
    }
    cfg.validate();
    ConditionInstance tmpl;
    tmpl.id = condition_from_string(condition_id);
    tmpl.problem = std::make_shared<const ReachAvoidProblem>(load_problem(problem));
    if (p >= 0.0) {
        tmpl.scalars = scalars_for_threshold(tmpl.id, p);
    }
    CegisOutcome out;
    {
        py::gil_scoped_release nogil;
        out = run_cegis(tmpl, cfg);
    }
    const CertificateMap& certs = out.feasible ? out.certificates : out.state.certificates;
    Json cj = Json::object();
    for (const auto& [role, c] : certs) {
        cj[to_string(role)] = certificate_to_json(c);
    }
    return Json{{"feasible", out.feasible},
                {"condition",
                 {{"schema_version", kSchemaVersion},
                  {"condition_id", to_string(tmpl.id)},
                  {"problem", problem},
                  {"scalars", scalars_to_json(out.feasible ? out.scalars : out.state.scalars)},
                  {"certificates", cj}}},
                {"verdict", out.verdict ? verdict_to_json(*out.verdict) : Json()},
                {"telemetry", out.telemetry}}
        .dump();
}

std::string estimate_json(const std::string& problem, const std::vector<double>& x0, std::size_t N, int K,
                          double alpha, std::uint64_t seed, unsigned threads)
{
    const ReachAvoidProblem pb = load_problem(problem);
    ProbabilityEstimate e;
    {
        py::gil_scoped_release nogil;
        e = estimate_reach_avoid(pb, x0, N, K, alpha, seed, threads);
    }
    return estimate_to_json(e).dump();
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "racert native core";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ContractViolation>(m, "ContractViolation", base.ptr());
    py::register_exception<ParameterDomainError>(m, "ParameterDomainError", base.ptr());
    py::register_exception<MissingInvariantError>(m, "MissingInvariantError", base.ptr());
    py::register_exception<ResourceLimitError>(m, "ResourceLimitError", base.ptr());
    py::register_exception<NoTrainableParameters>(m, "NoTrainableParameters", base.ptr());
    py::register_exception<UnsupportedDimension>(m, "UnsupportedDimension", base.ptr());

    m.attr("SCHEMA_VERSION") = kSchemaVersion;

    m.def("benchmark_names", &benchmark_names);
    m.def("problem_json", [](const std::string& ref) { return problem_to_json(load_problem(ref)).dump(); },
          py::arg("path_or_name"));
    m.def("step",
          [](const std::string& ref, const std::vector<double>& x, const std::vector<double>& theta) {
              return load_problem(ref).system.evaluate(x, theta);
          },
          py::arg("problem"), py::arg("x"), py::arg("theta"));

    m.def("certificate_eval",
          [](const std::string& cert_json, const std::vector<double>& x) {
              return certificate_from_json(Json::parse(cert_json), "certificate").evaluate(x);
          },
          py::arg("certificate"), py::arg("x"));

    m.def("verify_json", &verify_json, py::arg("condition"), py::arg("base_dir") = ".", py::arg("problem") = "",
          py::arg("resolution") = 0.05, py::arg("min_resolution") = -1.0, py::arg("quad_order") = 5,
          py::arg("seed") = 0, py::arg("threads") = 1);
    m.def("synthesize_json", &synthesize_json, py::arg("problem"), py::arg("condition_id"), py::arg("p") = -1.0,
          py::arg("template") = "net8x8", py::arg("seed") = 0, py::arg("config") = "");
    m.def("estimate_json", &estimate_json, py::arg("problem"), py::arg("x0"), py::arg("N") = 100000,
          py::arg("K") = 1000, py::arg("alpha") = 1e-3, py::arg("seed") = 0, py::arg("threads") = 1);

    m.def("clopper_pearson", &clopper_pearson, py::arg("k"), py::arg("n"), py::arg("alpha"));
    m.def("mras_lambda_min", &mras_lambda_min, py::arg("gamma"), py::arg("delta"), py::arg("lambda_prime"));
    m.def("aras_lambda_min",
          [](double eps, double p) {
              return aras_to_bc4restricted(Certificate::constant(1, 0.0), eps, p).lambda_min;
          },
          py::arg("eps"), py::arg("p"));
    m.def("aras_to_mras",
          [](double eps, double lambda) {
              const MrasParams r = aras_to_mras(eps, lambda);
              return py::make_tuple(r.gamma, r.delta, r.lambda_prime);
          },
          py::arg("eps"), py::arg("lam"));
    m.def("mras_to_aras",
          [](double gamma, double delta, double lambda) {
              const ArasParams r = mras_to_aras(gamma, delta, lambda);
              return py::make_tuple(r.eps, r.lambda);
          },
          py::arg("gamma"), py::arg("delta"), py::arg("lam"));

    m.def("bench_csv_header", &bench_csv_header);
    m.def("bench_suite",
          [](const std::string& selector, const std::vector<std::uint64_t>& seeds) {
              py::list out;
              for (const BenchCell& c : bench_suite(selector, seeds)) {
                  out.append(py::make_tuple(c.example, to_string(c.condition), c.templ, c.p, c.seed));
              }
              return out;
          },
          py::arg("selector"), py::arg("seeds") = std::vector<std::uint64_t>{0});
}
