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

#include <doctest.h>

#include "oracles.hpp"
#include "racert/benchmarks.hpp"
#include "racert/cegis.hpp"
#include "racert/errors.hpp"

using namespace racert;

namespace {

std::shared_ptr<const ReachAvoidProblem> ex(const std::string& name)
{
    return std::make_shared<const ReachAvoidProblem>(benchmark_problem(name));
}

ConditionInstance bc4_const(double h, double p)
{
    ConditionInstance inst;
    inst.id = ConditionId::BC4;
    inst.problem = ex("ex3");
    inst.certificates.emplace(Role::h, Certificate::constant(2, h));
    inst.scalars.p = p;
    inst.scalars.lambda = 0.9999;
    return inst;
}

// State whose only sample is one point of the named clause.
CegisState single_sample(const ConditionInstance& inst, const std::string& label, Vec x)
{
    CegisState st;
    st.certificates = inst.certificates;
    st.scalars = inst.scalars;
    for (const auto& c : clauses(inst)) {
        st.labels.push_back(c.label);
        st.samples.emplace_back();
        st.margins.emplace_back();
        if (c.label == label) {
            st.samples.back().push_back(x);
            st.margins.back().push_back(0.0);
        }
    }
    return st;
}

Json strip_wall_time(std::vector<Json> lines)
{
    Json out = Json::array();
    for (auto& l : lines) {
        l.erase("wall_time");
        out.push_back(l);
    }
    return out;
}

} // namespace

TEST_CASE("template names")
{
    CHECK(TemplateSpec::parse("net8x8").name() == "net8x8");
    CHECK(TemplateSpec::parse("net16").hidden == std::vector<std::size_t>{16});
    CHECK(TemplateSpec::parse("poly6").degree == 6);
    CHECK(TemplateSpec::parse("poly6").kind == CertificateKind::Polynomial);
    for (const char* bad : {"net", "netx8", "net8x", "poly", "polyx", "mlp8", "net0"}) {
        CHECK_THROWS_AS(TemplateSpec::parse(bad), ParseError);
    }
}

TEST_CASE("config JSON round trip and field diagnostics")
{
    CegisConfig c;
    c.seed = 42;
    c.templ = TemplateSpec::parse("poly4");
    c.scalar_sweep = default_scalar_sweep(ConditionId::BC3);
    const Json j = cegis_config_to_json(c);
    const CegisConfig back = cegis_config_from_json(j);
    CHECK(cegis_config_to_json(back).dump() == j.dump());
    CHECK(back.max_iterations == 10);

    try {
        cegis_config_from_json(Json{{"learner", {{"steps", "many"}}}});
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.field() == "config.learner.steps");
    }
    CHECK_THROWS_AS(cegis_config_from_json(Json{{"max_iterations", 0}}), ParseError);
    CHECK_THROWS_AS(cegis_config_from_json(Json{{"scalar_sweep", {{{"lambda", 0.5}, {"bogus", 1}}}}}), ParseError);
}

TEST_CASE("feasible certificate on its samples has zero loss and does not move")
{
    const auto inst = bc4_const(0.0, 0.0);
    CegisConfig cfg;
    cfg.learner.tau = 0.0;
    CegisState st = initial_state(inst, cfg, 1);
    const Vec before = st.certificates.at(Role::h).parameters();
    const auto rep = learner_step(inst, st, cfg);
    CHECK(rep.initial_loss == 0.0);
    CHECK(rep.final_loss == 0.0);
    CHECK(rep.steps == 0);
    CHECK(st.certificates.at(Role::h).parameters() == before);
}

TEST_CASE("single init sample: loss starts at p + tau and the bias rises")
{
    const auto inst = bc4_const(0.0, 0.5);
    CegisConfig cfg;
    cfg.learner.tau = 0.01;
    cfg.learner.steps = 200;
    cfg.learner.step_size = 0.01;
    CegisState st = single_sample(inst, "BC4.init", {0.12, 0.0});
    CHECK(hinge_loss(inst, st, 0.01, 2) == doctest::Approx(0.51));
    const auto rep = learner_step(inst, st, cfg);
    CHECK(rep.initial_loss == doctest::Approx(0.51));
    CHECK(rep.final_loss < 0.05);
    CHECK(st.certificates.at(Role::h).parameters()[0] > 0.45);
    for (std::size_t i = 1; i < rep.trace.size(); ++i) {
        CHECK(rep.trace[i] <= rep.trace[i - 1]);
    }
}

TEST_CASE("learner loss never increases")
{
    Rng rng(31);
    for (ConditionId id : {ConditionId::BC4, ConditionId::BC2, ConditionId::BC5}) {
        ConditionInstance inst;
        inst.id = id;
        inst.problem = ex("ex3");
        for (Role r : required_roles(id)) {
            inst.certificates.emplace(r, TemplateSpec::parse("net4x4").instantiate(Box{{-1.0, -1.0}, {1.0, 1.0}}, rng));
        }
        for (const auto& s : default_scalar_sweep(id)) {
            inst.scalars = s;
        }
        inst.scalars.p = 0.6;
        if (id == ConditionId::BC4) {
            inst.scalars.lambda = 0.9999;
        }
        CegisConfig cfg;
        cfg.samples_per_clause = 60;
        cfg.learner.steps = 40;
        CegisState st = initial_state(inst, cfg, 2);
        const auto rep = learner_step(inst, st, cfg);
        INFO(to_string(id));
        CHECK(rep.final_loss <= rep.initial_loss);
        for (std::size_t i = 1; i < rep.trace.size(); ++i) {
            CHECK(rep.trace[i] <= rep.trace[i - 1]);
        }
        CHECK(st.loss_history.back() == rep.final_loss);
    }
}

TEST_CASE("zero gradient with positive loss is reported as stalled")
{
    // AS drift v - E v vanishes for constant v, so only tau remains
    ConditionInstance inst;
    inst.id = ConditionId::AS;
    inst.problem = ex("ex3");
    inst.certificates.emplace(Role::v, Certificate::constant(2, 0.3));
    inst.scalars.p = 0.6;
    CegisConfig cfg;
    cfg.learner.tau = 0.01;
    CegisState st = single_sample(inst, "AS.drift", {0.3, 0.3});
    const auto rep = learner_step(inst, st, cfg);
    CHECK(rep.stalled);
    CHECK(st.stalled);
    CHECK(rep.final_loss == doctest::Approx(0.01));
}

TEST_CASE("affine certificates are not trainable")
{
    auto inst = bc4_const(0.0, 0.5);
    inst.certificates.at(Role::h) = Certificate::affine(2.0, 0.0, Certificate::constant(2, 0.1));
    CegisConfig cfg;
    CegisState st = initial_state(inst, cfg, 1);
    CHECK_THROWS_AS(learner_step(inst, st, cfg), NoTrainableParameters);
}

TEST_CASE("initial samples cover every clause and include corners")
{
    const auto inst = bc4_const(0.0, 0.5);
    CegisConfig cfg;
    cfg.samples_per_clause = 50;
    const auto st = initial_state(inst, cfg, 3);
    const auto cls = clauses(inst);
    REQUIRE(st.samples.size() == cls.size());
    for (std::size_t c = 0; c < cls.size(); ++c) {
        CHECK(st.samples[c].size() >= 50);
        CHECK(st.margins[c].size() == st.samples[c].size());
        for (const auto& x : st.samples[c]) {
            CHECK(cls[c].domain.contains(x));
        }
    }
    // X0 corners
    const auto& init = st.samples[0];
    CHECK(std::find(init.begin(), init.end(), Vec{0.1, -0.1}) != init.end());
    CHECK(st.empty_clauses.empty());
}

TEST_CASE("known feasible constant is accepted in iteration 1")
{
    CegisConfig cfg;
    const auto out = run_cegis(bc4_const(0.0, 0.0), cfg);
    REQUIRE(out.feasible);
    CHECK(out.state.iteration == 1);
    CHECK(out.telemetry.size() == 1);
    CHECK(out.verdict->status == VerifyStatus::Certified);
}

TEST_CASE("ex3 BC4 at p = 0.6 with 8x8 networks")
{
    ConditionInstance tmpl;
    tmpl.id = ConditionId::BC4;
    tmpl.problem = ex("ex3");
    tmpl.scalars.p = 0.6;
    CegisConfig cfg;
    cfg.seed = 0;
    const auto a = run_cegis(tmpl, cfg);
    REQUIRE(a.feasible);
    CHECK(a.state.iteration <= 10);
    CHECK(*a.scalars.lambda == 0.9999);

    // independent re-verification at a finer resolution
    ConditionInstance inst = tmpl;
    inst.certificates = a.certificates;
    inst.scalars = a.scalars;
    VerifyOptions o;
    o.quad_order = cfg.verify_quad_order;
    const auto v = verify_adaptive(inst, 0.025, 0.0015625, o);
    CHECK(v.status == VerifyStatus::Certified);
    const auto st = oracle::audit_clauses(clauses(inst), inst.certificates, inst.problem->system,
                                          cfg.verify_quad_order, 20000, 5);
    CHECK(st.violations == 0);

    // sample sets only grow within a restart
    for (std::size_t i = 1; i < a.telemetry.size(); ++i) {
        if (a.telemetry[i]["restart"] == a.telemetry[i - 1]["restart"]) {
            CHECK(a.telemetry[i]["samples"].get<std::size_t>() >= a.telemetry[i - 1]["samples"].get<std::size_t>());
        }
    }

    // same seed, same run
    const auto b = run_cegis(tmpl, cfg);
    CHECK(strip_wall_time(a.telemetry).dump() == strip_wall_time(b.telemetry).dump());
    CHECK(a.certificates.at(Role::h).parameters() == b.certificates.at(Role::h).parameters());
}
