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

#ifndef RACERT_CONDITIONS_HPP
#define RACERT_CONDITIONS_HPP

#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "racert/certificate.hpp"
#include "racert/region.hpp"
#include "racert/system.hpp"

namespace racert {

enum class ConditionId { BC1, AS, BC2, BC3, BC4, BC4_SINGLETON, BC4_RESTRICTED, BC5, BC5_UPPER };

enum class Role { h1, h2, v, V, h };

std::string to_string(ConditionId id);
std::string to_string(Role role);
ConditionId condition_from_string(const std::string& s);
Role role_from_string(const std::string& s);
std::vector<ConditionId> all_conditions();

struct Scalars {
    std::optional<double> eps;
    std::optional<double> lambda;
    std::optional<double> gamma;
    std::optional<double> delta;
    std::optional<double> lambda_prime;
    std::optional<double> p;
    std::optional<Vec> x0;
};

std::vector<Role> required_roles(ConditionId id);
// Names drawn from {eps, lambda, gamma, delta, lambda_prime, p, x0}.
std::vector<std::string> required_scalars(ConditionId id);
bool needs_invariant(ConditionId id);

using CertificateMap = std::map<Role, Certificate>;

struct ConditionInstance {
    ConditionId id = ConditionId::BC4;
    std::shared_ptr<const ReachAvoidProblem> problem;
    CertificateMap certificates;
    Scalars scalars;

    // Throws ContractViolation / ParameterDomainError / MissingInvariantError.
    void validate() const;
};

// residual = constant + sum coef * (role(x) or E[role(f(x, theta))]).
struct Term {
    double coef = 1.0;
    Role role = Role::h;
    bool expectation = false;
};

// Restricts a clause to {x : role(x) <= threshold} (upper) or
// {x : role(x) >= threshold} (!upper).
struct Guard {
    Role role = Role::V;
    bool upper = true;
    double threshold = 0.0;

    bool admits(double value) const { return upper ? value <= threshold : value >= threshold; }
};

struct ResidualClause {
    std::string label;
    Region domain;
    double constant = 0.0;
    std::vector<Term> terms;
    std::optional<Guard> guard;

    bool has_expectation() const;
};

// One clause per inequality line; complements of X are taken within X-hat,
// or within Omega for the invariant-based conditions.
std::vector<ResidualClause> clauses(const ConditionInstance& instance);

// Residual value at x, or nullopt (skipped) when x lies outside the domain or
// the guard rejects it.
std::optional<double> residual_at(const ResidualClause& clause, const ConditionInstance& instance,
                                  std::span<const double> x, int quad_order);

// Residual without domain/guard tests, with a prepared rule.
double clause_residual(const ResidualClause& clause, const CertificateMap& certs, const SystemModel& system,
                       const QuadratureRule& rule, std::span<const double> x);

struct ProbabilityBound {
    enum class Kind { Lower, Upper };
    Kind kind = Kind::Lower;
    double value = 0.0;
};

ProbabilityBound certified_bound(const ConditionInstance& instance);

struct MrasParams {
    double gamma;
    double delta;
    double lambda_prime;
};

struct ArasParams {
    double eps;
    double lambda;
};

MrasParams aras_to_mras(double eps, double lambda);
ArasParams mras_to_aras(double gamma, double delta, double lambda);

struct Bc4Restricted {
    Certificate h;
    double lambda_min;
    double p;
};

Bc4Restricted aras_to_bc4restricted(const Certificate& V, double eps, double p);
Bc4Restricted mras_to_bc4restricted(const Certificate& V, double gamma, double delta, double lambda_prime);

// max over v in [lo, hi] of (1 - v/lp) / (1 - gamma v/lp), to 1e-9 or better.
double mras_lambda_min(double gamma, double delta, double lambda_prime);

std::pair<Certificate, Certificate> bc5_transform(const Certificate& h1, const Certificate& h2);

} // namespace racert

#endif
