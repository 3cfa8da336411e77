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

#include <cmath>

#include "oracles.hpp"
#include "racert/benchmarks.hpp"
#include "racert/conditions.hpp"
#include "racert/errors.hpp"

using namespace racert;

namespace {

std::shared_ptr<const ReachAvoidProblem> ex(const std::string& name)
{
    return std::make_shared<const ReachAvoidProblem>(benchmark_problem(name));
}

ConditionInstance instance(ConditionId id, std::shared_ptr<const ReachAvoidProblem> pb, double value = 0.0)
{
    ConditionInstance inst;
    inst.id = id;
    inst.problem = pb;
    for (Role r : required_roles(id)) {
        inst.certificates.emplace(r, Certificate::constant(2, value));
    }
    for (const auto& s : required_scalars(id)) {
        if (s == "eps") inst.scalars.eps = 1e-6;
        if (s == "lambda") inst.scalars.lambda = 0.9999;
        if (s == "gamma") inst.scalars.gamma = 0.5;
        if (s == "delta") inst.scalars.delta = 0.1;
        if (s == "lambda_prime") inst.scalars.lambda_prime = 2.0;
        if (s == "p") inst.scalars.p = 0.5;
        if (s == "x0") inst.scalars.x0 = Vec{0.12, 0.0};
    }
    return inst;
}

} // namespace

TEST_CASE("clause count contract")
{
    const auto pb = ex("ex3");
    const std::map<ConditionId, std::size_t> counts{
        {ConditionId::BC1, 6}, {ConditionId::AS, 4},  {ConditionId::BC2, 4},
        {ConditionId::BC3, 5}, {ConditionId::BC4, 4}, {ConditionId::BC4_SINGLETON, 4},
        {ConditionId::BC4_RESTRICTED, 4}, {ConditionId::BC5, 5}, {ConditionId::BC5_UPPER, 5}};
    for (const auto& [id, n] : counts) {
        INFO(to_string(id));
        CHECK(clauses(instance(id, pb)).size() == n);
    }
}

TEST_CASE("invariant-based conditions need Omega")
{
    const auto pb = ex("ex4");
    for (ConditionId id : {ConditionId::BC2, ConditionId::BC3, ConditionId::BC4_RESTRICTED}) {
        CHECK_THROWS_AS(clauses(instance(id, pb)), MissingInvariantError);
    }
    CHECK_NOTHROW(clauses(instance(ConditionId::BC4, pb)));
}

TEST_CASE("instances must carry exactly the required roles and scalars")
{
    const auto pb = ex("ex3");
    auto inst = instance(ConditionId::BC4, pb);
    inst.scalars.eps = 0.1;
    CHECK_THROWS_AS(inst.validate(), ContractViolation);
    inst = instance(ConditionId::BC4, pb);
    inst.certificates.emplace(Role::V, Certificate::constant(2, 0.0));
    CHECK_THROWS_AS(inst.validate(), ContractViolation);
    inst = instance(ConditionId::BC4, pb);
    inst.scalars.lambda = 1.0;
    CHECK_THROWS_AS(inst.validate(), ParameterDomainError);
    inst = instance(ConditionId::BC3, pb);
    inst.scalars.lambda_prime = 0.9;
    CHECK_THROWS_AS(inst.validate(), ParameterDomainError);
    inst = instance(ConditionId::BC4_SINGLETON, pb);
    inst.scalars.x0 = Vec{0.0, 0.0};
    CHECK_THROWS_AS(inst.validate(), ContractViolation);
}

TEST_CASE("BC4 clause shapes")
{
    const auto pb = ex("ex3");
    auto inst = instance(ConditionId::BC4, pb);
    inst.certificates.at(Role::h) = Certificate::polynomial({{1, 0}, {0, 0}}, {1.0, 0.25});
    inst.scalars.p = 0.6;
    inst.scalars.lambda = 0.9;
    const auto cs = clauses(inst);
    const Vec in_init{0.12, 0.05};
    const Vec outside{0.8, 0.0};
    const Vec in_target{0.05, 0.0};
    const Vec drift{0.3, 0.3};
    CHECK(*residual_at(cs[0], inst, in_init, 8) == doctest::Approx(0.6 - (0.12 + 0.25)));
    CHECK(*residual_at(cs[1], inst, outside, 8) == doctest::Approx(0.8 + 0.25));
    CHECK(*residual_at(cs[2], inst, in_target, 8) == doctest::Approx(0.05 + 0.25 - 1.0));
    // E[x1'] = 0.6 x1 + 0.05 x2 for the zero-mean disturbance
    const double e = 0.6 * 0.3 + 0.05 * 0.3 + 0.25;
    CHECK(*residual_at(cs[3], inst, drift, 8) == doctest::Approx(0.3 + 0.25 - 0.9 * e).epsilon(1e-12));
    CHECK(!residual_at(cs[0], inst, drift, 8).has_value());
    CHECK(!residual_at(cs[3], inst, in_target, 8).has_value());
}

TEST_CASE("residual_at examples")
{
    const auto pb = ex("ex3");
    auto bc4 = instance(ConditionId::BC4, pb, 0.0);
    bc4.scalars.p = 0.0;
    Rng rng(1);
    for (int i = 0; i < 500; ++i) {
        const Vec x{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        for (const auto& c : clauses(bc4)) {
            const auto r = residual_at(c, bc4, x, 8);
            if (r) {
                CHECK(*r <= 0.0);
            }
        }
    }

    auto bc1 = instance(ConditionId::BC1, pb, 1.0);
    const auto c1 = clauses(bc1);
    CHECK(c1[2].label == "BC1.unsafe");
    CHECK(*residual_at(c1[2], bc1, Vec{0.9, 0.9}, 8) == 0.0);

    auto bc3 = instance(ConditionId::BC3, pb, 1.0);
    bc3.scalars.gamma = 0.5;
    const auto c3 = clauses(bc3);
    CHECK(c3[4].label == "BC3.drift");
    CHECK(*residual_at(c3[4], bc3, Vec{0.3, 0.3}, 8) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("BC1 ranking clause is vacuous when the target covers the safe set")
{
    auto base = benchmark_problem("ex3");
    base.target = base.safe;
    base.init = Region::box({0.0, 0.0}, {0.0, 0.0});
    auto pb = std::make_shared<const ReachAvoidProblem>(base);
    const auto inst = instance(ConditionId::BC1, pb, 0.0);
    const auto cs = clauses(inst);
    CHECK(cs[5].label == "BC1.ranking");
    CHECK(region_grid(cs[5].domain, 0.05).empty());
    Rng rng(2);
    for (const Vec& x : cs[5].domain.sample(10, rng, 10000)) {
        CHECK(x.empty());
    }
}

TEST_CASE("certified bound examples")
{
    const auto pb = ex("ex3");
    auto bc3 = instance(ConditionId::BC3, pb);
    bc3.scalars.lambda_prime = 2.0;
    CHECK(certified_bound(bc3).kind == ProbabilityBound::Kind::Lower);
    CHECK(certified_bound(bc3).value == 0.5);
    auto up = instance(ConditionId::BC5_UPPER, pb);
    up.scalars.p = 0.3;
    CHECK(certified_bound(up).kind == ProbabilityBound::Kind::Upper);
    CHECK(certified_bound(up).value == 0.3);
    auto bc1 = instance(ConditionId::BC1, pb);
    bc1.scalars.p = 0.0;
    CHECK(certified_bound(bc1).value == 0.0);
    // monotone in lambda_prime
    double prev = -1.0;
    for (double lp = 1.01; lp < 50; lp *= 1.3) {
        bc3.scalars.lambda_prime = lp;
        const double v = certified_bound(bc3).value;
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("ARAS and MRAS conversions")
{
    auto m = aras_to_mras(0.1, 2.0);
    CHECK(m.gamma == doctest::Approx(0.95).epsilon(1e-15));
    CHECK(m.delta == 0.1);
    CHECK(m.lambda_prime == 2.0);
    m = aras_to_mras(1.0, 2.0);
    CHECK(m.gamma == 0.5);
    CHECK(m.delta == 1.0);
    CHECK_THROWS_AS(aras_to_mras(1.0001, 1.0001), ParameterDomainError);
    CHECK_THROWS_AS(aras_to_mras(3.0, 2.0), ParameterDomainError);

    auto a = mras_to_aras(0.5, 0.1, 2.0);
    CHECK(a.eps == doctest::Approx(0.05).epsilon(1e-15));
    CHECK(a.lambda == 2.0);
    a = mras_to_aras(0.9, 1.0, 3.0);
    CHECK(a.eps == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(mras_to_aras(1.0 - 1e-12, 1.0, 2.0).eps < 1e-11);

    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const double lam = rng.uniform(1.01, 20.0);
        const double eps = rng.uniform(1e-6, 0.999) * lam;
        const auto mr = aras_to_mras(eps, lam);
        const auto back = mras_to_aras(mr.gamma, mr.delta, mr.lambda_prime);
        CHECK(back.lambda == lam);
        CHECK(back.eps <= eps * (1 + 1e-12));
        CHECK(back.eps == doctest::Approx(eps * std::min(eps, lam) / lam).epsilon(1e-9));
    }
}

TEST_CASE("restricted BC4 constructions")
{
    const auto V = Certificate::constant(2, 1.0);
    const auto r = aras_to_bc4restricted(V, 0.1, 0.5);
    CHECK(std::abs(r.lambda_min - 1.0 / 1.05) <= 1e-12);
    CHECK(r.h.evaluate(Vec{0.0, 0.0}) == 0.5);
    CHECK(aras_to_bc4restricted(V, 1e-12, 0.5).lambda_min == doctest::Approx(1.0).epsilon(1e-11));

    const auto m = mras_to_bc4restricted(V, 0.5, 0.1, 2.0);
    CHECK(m.p == 0.5);
    CHECK(std::abs(m.lambda_min - 0.95 / 0.975) <= 1e-9);
    CHECK(std::abs(m.lambda_min - oracle::lambda_grid(0.5, 0.1, 2.0, 100001)) <= 1e-8);
    const auto m2 = mras_to_bc4restricted(V, 0.9, 0.5, 2.0);
    CHECK(std::abs(m2.lambda_min - 0.75 / 0.775) <= 1e-9);
    CHECK(mras_lambda_min(1e-12, 3.0, 3.0) == doctest::Approx(0.0));
    CHECK_THROWS_AS(mras_to_bc4restricted(V, 0.5, 3.0, 2.0), ParameterDomainError);
    CHECK_THROWS_AS(mras_to_bc4restricted(V, 1.5, 0.1, 2.0), ParameterDomainError);
}

TEST_CASE("ARAS and MRAS conversions hold on random local probes")
{
    const auto a = oracle::conversion_probes(false, 300, 11);
    CHECK(a.accepted == 300);
    CHECK(a.failures == 0);
    const auto m = oracle::conversion_probes(true, 300, 12);
    CHECK(m.accepted == 300);
    CHECK(m.failures == 0);
}

TEST_CASE("BC5 transform")
{
    const auto zero = Certificate::constant(2, 0.0);
    const auto [a, b] = bc5_transform(zero, zero);
    CHECK(a.evaluate(Vec{0.3, 0.1}) == 1.0);
    const auto [c, d] = bc5_transform(a, b);
    CHECK(c.kind() == CertificateKind::Polynomial);
    CHECK(c.parameters() == zero.parameters());

    // coupling line: h1 - E h2 + h2  vs transformed  E h2' - h2' - h1' + 1
    const auto pb = ex("ex4");
    Rng rng(4);
    for (int i = 0; i < 200; ++i) {
        const auto h1 = oracle::random_certificate(rng, pb->working_box);
        const auto h2 = oracle::random_certificate(rng, pb->working_box);
        const auto [t1, t2] = bc5_transform(h1, h2);
        const Vec x{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        const auto g1 = [&](std::span<const double> y) { return h2.evaluate(y); };
        const auto g2 = [&](std::span<const double> y) { return t2.evaluate(y); };
        const double lhs = h1.evaluate(x) - expectation(pb->system, g1, x, 8) + h2.evaluate(x);
        const double rhs = expectation(pb->system, g2, x, 8) - t2.evaluate(x) - (t1.evaluate(x) - 1.0);
        CHECK(std::abs(lhs - rhs) <= 1e-12);
    }
}
