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

#include "racert/conditions.hpp"

#include <algorithm>
#include <cmath>

#include "racert/errors.hpp"

namespace racert {

std::string to_string(ConditionId id)
{
    switch (id) {
    case ConditionId::BC1: return "BC1";
    case ConditionId::AS: return "AS";
    case ConditionId::BC2: return "BC2";
    case ConditionId::BC3: return "BC3";
    case ConditionId::BC4: return "BC4";
    case ConditionId::BC4_SINGLETON: return "BC4_SINGLETON";
    case ConditionId::BC4_RESTRICTED: return "BC4_RESTRICTED";
    case ConditionId::BC5: return "BC5";
    case ConditionId::BC5_UPPER: return "BC5_UPPER";
    }
    return "?";
}

std::string to_string(Role role)
{
    switch (role) {
    case Role::h1: return "h1";
    case Role::h2: return "h2";
    case Role::v: return "v";
    case Role::V: return "V";
    case Role::h: return "h";
    }
    return "?";
}

std::vector<ConditionId> all_conditions()
{
    return {ConditionId::BC1, ConditionId::AS, ConditionId::BC2, ConditionId::BC3, ConditionId::BC4,
            ConditionId::BC4_SINGLETON, ConditionId::BC4_RESTRICTED, ConditionId::BC5, ConditionId::BC5_UPPER};
}

ConditionId condition_from_string(const std::string& s)
{
    for (ConditionId id : all_conditions()) {
        if (to_string(id) == s) {
            return id;
        }
    }
    throw ParseError("condition_id", "unknown condition '" + s + "'");
}

Role role_from_string(const std::string& s)
{
    for (Role r : {Role::h1, Role::h2, Role::v, Role::V, Role::h}) {
        if (to_string(r) == s) {
            return r;
        }
    }
    throw ParseError("certificates", "unknown role '" + s + "'");
}

std::vector<Role> required_roles(ConditionId id)
{
    switch (id) {
    case ConditionId::BC1:
    case ConditionId::BC5:
    case ConditionId::BC5_UPPER: return {Role::h1, Role::h2};
    case ConditionId::AS: return {Role::v};
    case ConditionId::BC2:
    case ConditionId::BC3: return {Role::V};
    case ConditionId::BC4:
    case ConditionId::BC4_SINGLETON:
    case ConditionId::BC4_RESTRICTED: return {Role::h};
    }
    return {};
}

std::vector<std::string> required_scalars(ConditionId id)
{
    switch (id) {
    case ConditionId::BC1: return {"eps", "p"};
    case ConditionId::AS: return {"p"};
    case ConditionId::BC2: return {"eps", "p"};
    case ConditionId::BC3: return {"gamma", "delta", "lambda_prime"};
    case ConditionId::BC4: return {"lambda", "p"};
    case ConditionId::BC4_SINGLETON: return {"lambda", "p", "x0"};
    case ConditionId::BC4_RESTRICTED: return {"lambda", "p"};
    case ConditionId::BC5:
    case ConditionId::BC5_UPPER: return {"p"};
    }
    return {};
}

bool needs_invariant(ConditionId id)
{
    return id == ConditionId::BC2 || id == ConditionId::BC3 || id == ConditionId::BC4_RESTRICTED;
}

void ConditionInstance::validate() const
{
    const std::string name = to_string(id);
    if (!problem) {
        throw ContractViolation(name + ": instance has no problem");
    }
    const auto roles = required_roles(id);
    for (Role r : roles) {
        auto it = certificates.find(r);
        if (it == certificates.end()) {
            throw ContractViolation(name + ": missing certificate for role " + to_string(r));
        }
        if (it->second.dim() != problem->system.state_dim()) {
            throw ContractViolation(name + ": certificate " + to_string(r) + " has wrong dimension");
        }
    }
    for (const auto& [r, c] : certificates) {
        if (std::find(roles.begin(), roles.end(), r) == roles.end()) {
            throw ContractViolation(name + ": unexpected certificate role " + to_string(r));
        }
    }
    const auto req = required_scalars(id);
    const auto need = [&](const char* s) { return std::find(req.begin(), req.end(), s) != req.end(); };
    const auto check = [&](const char* s, bool present) {
        if (need(s) && !present) {
            throw ContractViolation(name + ": missing scalar " + s);
        }
        if (!need(s) && present) {
            throw ContractViolation(name + ": unexpected scalar " + s);
        }
    };
    check("eps", scalars.eps.has_value());
    check("lambda", scalars.lambda.has_value());
    check("gamma", scalars.gamma.has_value());
    check("delta", scalars.delta.has_value());
    check("lambda_prime", scalars.lambda_prime.has_value());
    check("p", scalars.p.has_value());
    check("x0", scalars.x0.has_value());
    const auto domain = [&](const char* s, bool ok, const char* range) {
        if (!ok) {
            throw ParameterDomainError(name + ": " + s + " must lie in " + range);
        }
    };
    if (scalars.eps) {
        domain("eps", *scalars.eps > 0.0, "(0, inf)");
    }
    if (scalars.lambda) {
        domain("lambda", *scalars.lambda > 0.0 && *scalars.lambda < 1.0, "(0, 1)");
    }
    if (scalars.gamma) {
        domain("gamma", *scalars.gamma > 0.0 && *scalars.gamma < 1.0, "(0, 1)");
    }
    if (scalars.delta) {
        domain("delta", *scalars.delta > 0.0, "(0, inf)");
    }
    if (scalars.lambda_prime) {
        domain("lambda_prime", *scalars.lambda_prime > 1.0 && std::isfinite(*scalars.lambda_prime),
               "(1, inf)");
    }
    if (scalars.p) {
        if (id == ConditionId::BC2) {
            domain("p", *scalars.p >= 0.0 && *scalars.p < 1.0, "[0, 1)");
        } else {
            domain("p", *scalars.p >= 0.0 && *scalars.p <= 1.0, "[0, 1]");
        }
    }
    if (scalars.x0) {
        if (scalars.x0->size() != problem->system.state_dim()) {
            throw ContractViolation(name + ": x0 has wrong dimension");
        }
        if (!problem->init.contains(*scalars.x0)) {
            throw ContractViolation(name + ": x0 must lie in the initial set");
        }
    }
    if (needs_invariant(id) && !problem->invariant) {
        throw MissingInvariantError(name + " requires a robust invariant set (Omega)");
    }
}

bool ResidualClause::has_expectation() const
{
    return std::any_of(terms.begin(), terms.end(), [](const Term& t) { return t.expectation; });
}

std::vector<ResidualClause> clauses(const ConditionInstance& inst)
{
    inst.validate();
    const ReachAvoidProblem& pb = *inst.problem;
    const Region hat = Region::box(pb.working_box);
    const Region x_hat_minus_x = Region::difference(hat, pb.safe);
    const Region x_minus_t = Region::difference(pb.safe, pb.target);
    const std::string id = to_string(inst.id);
    const auto value = [](Role r, double c = 1.0) { return Term{c, r, false}; };
    const auto expect = [](Role r, double c = 1.0) { return Term{c, r, true}; };
    const auto clause = [&](const std::string& tag, Region dom, double k, std::vector<Term> terms,
                            std::optional<Guard> guard = std::nullopt) {
        return ResidualClause{id + "." + tag, std::move(dom), k, std::move(terms), guard};
    };
    const Scalars& s = inst.scalars;
    switch (inst.id) {
    case ConditionId::BC1: {
        const double p = *s.p;
        return {clause("init", pb.init, -(1.0 - p), {value(Role::h1)}),
                clause("supermartingale", pb.safe, 0.0, {expect(Role::h1), value(Role::h1, -1.0)}),
                clause("unsafe", x_hat_minus_x, 1.0, {value(Role::h1, -1.0)}),
                clause("h1_nonneg", pb.safe, 0.0, {value(Role::h1, -1.0)}),
                clause("h2_nonneg", hat, 0.0, {value(Role::h2, -1.0)}),
                clause("ranking", x_minus_t, *s.eps, {expect(Role::h2), value(Role::h2, -1.0)})};
    }
    case ConditionId::AS: {
        const double p = *s.p;
        return {clause("init", pb.init, p, {value(Role::v, -1.0)}),
                clause("drift", x_minus_t, 0.0, {value(Role::v), expect(Role::v, -1.0)}),
                clause("target", pb.target, -1.0, {value(Role::v)}),
                clause("unsafe", x_hat_minus_x, 0.0, {value(Role::v)})};
    }
    case ConditionId::BC2: {
        const Region& om = *pb.invariant;
        const double level = 1.0 / (1.0 - *s.p);
        return {clause("nonneg", om, 0.0, {value(Role::V, -1.0)}),
                clause("init", pb.init, -1.0, {value(Role::V)}),
                clause("unsafe", Region::difference(om, pb.safe), level, {value(Role::V, -1.0)}),
                clause("drift", Region::difference(om, pb.target), *s.eps,
                       {expect(Role::V), value(Role::V, -1.0)}, Guard{Role::V, true, level})};
    }
    case ConditionId::BC3: {
        const Region& om = *pb.invariant;
        const Region om_minus_t = Region::difference(om, pb.target);
        const double lp = *s.lambda_prime;
        return {clause("nonneg", om, 0.0, {value(Role::V, -1.0)}),
                clause("lower", om_minus_t, *s.delta, {value(Role::V, -1.0)}),
                clause("init", pb.init, -1.0, {value(Role::V)}),
                clause("unsafe", Region::difference(om, pb.safe), lp, {value(Role::V, -1.0)}),
                clause("drift", om_minus_t, 0.0, {expect(Role::V), value(Role::V, -*s.gamma)},
                       Guard{Role::V, true, lp})};
    }
    case ConditionId::BC4:
    case ConditionId::BC4_SINGLETON: {
        const Region init = inst.id == ConditionId::BC4 ? pb.init : Region::point(*s.x0);
        return {clause("init", init, *s.p, {value(Role::h, -1.0)}),
                clause("unsafe", x_hat_minus_x, 0.0, {value(Role::h)}),
                clause("target", pb.target, -1.0, {value(Role::h)}),
                clause("drift", x_minus_t, 0.0, {value(Role::h), expect(Role::h, -*s.lambda)})};
    }
    case ConditionId::BC4_RESTRICTED: {
        const Region& om = *pb.invariant;
        return {clause("init", pb.init, *s.p, {value(Role::h, -1.0)}),
                clause("unsafe", Region::difference(om, pb.safe), 0.0, {value(Role::h)}),
                clause("upper", om, -1.0, {value(Role::h)}),
                clause("drift", x_minus_t, 0.0, {value(Role::h), expect(Role::h, -*s.lambda)},
                       Guard{Role::h, false, 0.0})};
    }
    case ConditionId::BC5: {
        return {clause("init", pb.init, *s.p, {value(Role::h1, -1.0)}),
                clause("unsafe", x_hat_minus_x, 0.0, {value(Role::h1)}),
                clause("target", pb.target, -1.0, {value(Role::h1)}),
                clause("submartingale", x_minus_t, 0.0, {value(Role::h1), expect(Role::h1, -1.0)}),
                clause("coupling", x_minus_t, 0.0,
                       {value(Role::h1), expect(Role::h2, -1.0), value(Role::h2)})};
    }
    case ConditionId::BC5_UPPER: {
        return {clause("init", pb.init, -*s.p, {value(Role::h1)}),
                clause("unsafe", x_hat_minus_x, 0.0, {value(Role::h1, -1.0)}),
                clause("target", pb.target, 1.0, {value(Role::h1, -1.0)}),
                clause("supermartingale", x_minus_t, 0.0, {expect(Role::h1), value(Role::h1, -1.0)}),
                clause("coupling", x_minus_t, 0.0,
                       {expect(Role::h2), value(Role::h2, -1.0), value(Role::h1, -1.0)})};
    }
    }
    return {};
}

double clause_residual(const ResidualClause& clause, const CertificateMap& certs, const SystemModel& system,
                       const QuadratureRule& rule, std::span<const double> x)
{
    double r = clause.constant;
    for (const Term& t : clause.terms) {
        const Certificate& c = certs.at(t.role);
        const double v = t.expectation
                             ? expectation_with(system, rule, x, [&](std::span<const double> y) { return c.evaluate(y); })
                             : c.evaluate(x);
        r += t.coef * v;
    }
    return r;
}

std::optional<double> residual_at(const ResidualClause& clause, const ConditionInstance& instance,
                                  std::span<const double> x, int quad_order)
{
    if (!clause.domain.contains(x)) {
        return std::nullopt;
    }
    if (clause.guard && !clause.guard->admits(instance.certificates.at(clause.guard->role).evaluate(x))) {
        return std::nullopt;
    }
    const auto rule = instance.problem->system.quadrature(quad_order);
    return clause_residual(clause, instance.certificates, instance.problem->system, *rule, x);
}

ProbabilityBound certified_bound(const ConditionInstance& instance)
{
    switch (instance.id) {
    case ConditionId::BC3:
        return {ProbabilityBound::Kind::Lower, 1.0 - 1.0 / *instance.scalars.lambda_prime};
    case ConditionId::BC5_UPPER: return {ProbabilityBound::Kind::Upper, *instance.scalars.p};
    default: return {ProbabilityBound::Kind::Lower, *instance.scalars.p};
    }
}

MrasParams aras_to_mras(double eps, double lambda)
{
    if (!(eps > 0.0)) {
        throw ParameterDomainError("aras_to_mras: eps must be > 0");
    }
    if (!(lambda > 1.0)) {
        throw ParameterDomainError("aras_to_mras: lambda must be > 1");
    }
    const double gamma = (lambda - eps) / lambda;
    if (!(gamma > 0.0)) {
        throw ParameterDomainError("aras_to_mras: gamma = (lambda - eps)/lambda must be > 0 (needs eps < lambda)");
    }
    return {gamma, std::min(eps, lambda), lambda};
}

ArasParams mras_to_aras(double gamma, double delta, double lambda)
{
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw ParameterDomainError("mras_to_aras: gamma must lie in (0, 1)");
    }
    if (!(delta > 0.0)) {
        throw ParameterDomainError("mras_to_aras: delta must be > 0");
    }
    if (!(lambda > 1.0)) {
        throw ParameterDomainError("mras_to_aras: lambda must be > 1");
    }
    return {(1.0 - gamma) * delta, lambda};
}

Bc4Restricted aras_to_bc4restricted(const Certificate& V, double eps, double p)
{
    if (!(eps > 0.0)) {
        throw ParameterDomainError("aras_to_bc4restricted: eps must be > 0");
    }
    if (!(p >= 0.0 && p < 1.0)) {
        throw ParameterDomainError("aras_to_bc4restricted: p must lie in [0, 1)");
    }
    return {Certificate::affine(-(1.0 - p), 1.0, V), 1.0 / (1.0 + (1.0 - p) * eps), p};
}

double mras_lambda_min(double gamma, double delta, double lambda_prime)
{
    const auto f = [&](double v) { return (1.0 - v / lambda_prime) / (1.0 - gamma * v / lambda_prime); };
    const int n = 4096;
    double best_v = delta;
    double best = f(delta);
    for (int i = 1; i <= n; ++i) {
        const double v = i == n ? lambda_prime : delta + (lambda_prime - delta) * i / n;
        const double fv = f(v);
        if (fv > best) {
            best = fv;
            best_v = v;
        }
    }
    // golden-section refinement on the bracketing grid interval
    const double step = (lambda_prime - delta) / n;
    double a = std::max(delta, best_v - step);
    double b = std::min(lambda_prime, best_v + step);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = f(c);
    double fd = f(d);
    while (b - a > 1e-12 * std::max(1.0, lambda_prime)) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return std::max({best, fc, fd, f(delta), f(lambda_prime)});
}

Bc4Restricted mras_to_bc4restricted(const Certificate& V, double gamma, double delta, double lambda_prime)
{
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw ParameterDomainError("mras_to_bc4restricted: gamma must lie in (0, 1)");
    }
    if (!(delta > 0.0)) {
        throw ParameterDomainError("mras_to_bc4restricted: delta must be > 0");
    }
    if (!(lambda_prime > 1.0)) {
        throw ParameterDomainError("mras_to_bc4restricted: lambda_prime must be > 1");
    }
    if (!(delta <= lambda_prime)) {
        throw ParameterDomainError("mras_to_bc4restricted: delta must not exceed lambda_prime");
    }
    const double p = 1.0 - 1.0 / lambda_prime;
    const double lam = mras_lambda_min(gamma, delta, lambda_prime);
    if (!(lam < 1.0)) {
        throw ParameterDomainError("mras_to_bc4restricted: lambda_min must be < 1");
    }
    return {Certificate::affine(-(1.0 - p), 1.0, V), lam, p};
}

std::pair<Certificate, Certificate> bc5_transform(const Certificate& h1, const Certificate& h2)
{
    const auto flip = [](const Certificate& c) {
        if (c.kind() == CertificateKind::Affine && c.affine_a() == -1.0 && c.affine_b() == 1.0) {
            return c.inner();
        }
        return Certificate::affine(-1.0, 1.0, c);
    };
    return {flip(h1), flip(h2)};
}

} // namespace racert
