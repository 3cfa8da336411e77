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

#include "racert/system.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "racert/errors.hpp"
#include "racert/rng.hpp"

namespace racert {

SystemModel::SystemModel(std::vector<Expr> dynamics, std::vector<std::string> sources,
                         DisturbanceDistribution disturbance)
    : dynamics_(std::move(dynamics)), sources_(std::move(sources)), disturbance_(std::move(disturbance)),
      cache_(std::make_shared<Cache>())
{
    if (dynamics_.empty()) {
        throw ContractViolation("system needs at least one state coordinate");
    }
    if (sources_.size() != dynamics_.size()) {
        sources_.clear();
        for (const Expr& e : dynamics_) {
            sources_.push_back(e.str());
        }
    }
    const std::size_t n = dynamics_.size();
    jacobian_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            jacobian_[i].push_back(dynamics_[i].derivative(j));
        }
    }
}

SystemModel SystemModel::parse(const std::vector<std::string>& dynamics, DisturbanceDistribution disturbance)
{
    std::vector<Expr> exprs;
    const std::size_t m = disturbance.dim();
    for (std::size_t i = 0; i < dynamics.size(); ++i) {
        try {
            exprs.push_back(Expr::parse(dynamics[i], dynamics.size(), m));
        } catch (const ParseError& e) {
            throw ParseError("system.dynamics[" + std::to_string(i) + "]", e.what());
        }
    }
    return SystemModel(std::move(exprs), dynamics, std::move(disturbance));
}

void SystemModel::step(const double* x, const double* theta, double* out) const
{
    const std::size_t n = state_dim();
    const std::size_t m = disturbance_dim();
    double vars[64];
    std::vector<double> heap;
    double* v = vars;
    if (n + m > 64) {
        heap.resize(n + m);
        v = heap.data();
    }
    std::copy(x, x + n, v);
    std::copy(theta, theta + m, v + n);
    const std::span<const double> s(v, n + m);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = dynamics_[i].eval(s);
    }
}

Vec SystemModel::evaluate(std::span<const double> x, std::span<const double> theta) const
{
    if (x.size() != state_dim()) {
        throw ContractViolation("evaluate_dynamics: state has dimension " + std::to_string(x.size()) +
                                ", expected " + std::to_string(state_dim()));
    }
    if (theta.size() != disturbance_dim()) {
        throw ContractViolation("evaluate_dynamics: disturbance has dimension " +
                                std::to_string(theta.size()) + ", expected " +
                                std::to_string(disturbance_dim()));
    }
    Vec out(state_dim());
    step(x.data(), theta.data(), out.data());
    return out;
}

namespace {

std::vector<Interval> joint_box(const Box& cell, const Box& theta)
{
    std::vector<Interval> v = cell.intervals();
    for (std::size_t i = 0; i < theta.dim(); ++i) {
        v.emplace_back(theta.lo[i], theta.hi[i]);
    }
    return v;
}

} // namespace

Box SystemModel::image(const Box& cell) const
{
    const auto v = joint_box(cell, disturbance_.support());
    std::vector<Interval> out;
    out.reserve(state_dim());
    for (const Expr& e : dynamics_) {
        out.push_back(e.eval(std::span<const Interval>(v)));
    }
    return Box::from_intervals(out);
}

std::vector<Vec> SystemModel::jacobian_bound(const Box& cell) const
{
    const auto v = joint_box(cell, disturbance_.support());
    const std::size_t n = state_dim();
    std::vector<Vec> out(n, Vec(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            out[i][j] = jacobian_[i][j].eval(std::span<const Interval>(v)).mag();
        }
    }
    return out;
}

double SystemModel::lipschitz(const Box& cell) const
{
    // induced infinity norm: max row sum
    double best = 0.0;
    for (const Vec& row : jacobian_bound(cell)) {
        double s = 0.0;
        for (double a : row) {
            s += a;
        }
        best = std::max(best, s);
    }
    return best;
}

std::shared_ptr<const QuadratureRule> SystemModel::quadrature(int order) const
{
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto it = cache_->rules.find(order);
    if (it != cache_->rules.end()) {
        return it->second;
    }
    auto rule = std::make_shared<const QuadratureRule>(disturbance_.quadrature(order));
    cache_->rules.emplace(order, rule);
    return rule;
}

void SystemModel::successors(std::span<const double> x, const QuadratureRule& rule, Vec& out) const
{
    const std::size_t n = state_dim();
    out.resize(rule.size() * n);
    for (std::size_t k = 0; k < rule.size(); ++k) {
        step(x.data(), rule.node(k), out.data() + k * n);
    }
}

Region ReachAvoidProblem::universe() const
{
    if (invariant) {
        return *invariant;
    }
    return Region::box(working_box);
}

std::vector<std::string> ReachAvoidProblem::validate(std::size_t samples, std::uint64_t seed) const
{
    std::vector<std::string> issues;
    const std::size_t n = system.state_dim();
    const auto check_dim = [&](const Region& r, const char* name) {
        if (r.dim() != n) {
            issues.push_back(std::string(name) + " has dimension " + std::to_string(r.dim()));
        }
    };
    check_dim(init, "init");
    check_dim(safe, "safe");
    check_dim(target, "target");
    if (invariant) {
        check_dim(*invariant, "invariant");
    }
    if (working_box.dim() != n) {
        issues.push_back("working_box has dimension " + std::to_string(working_box.dim()));
    }
    if (!(threshold >= 0.0 && threshold <= 1.0)) {
        issues.push_back("threshold outside [0, 1]");
    }
    if (!issues.empty()) {
        return issues;
    }
    const auto fmt = [](std::span<const double> x) {
        std::ostringstream os;
        os << '(';
        for (std::size_t i = 0; i < x.size(); ++i) {
            os << (i ? ", " : "") << x[i];
        }
        os << ')';
        return os.str();
    };
    Rng rng(seed);
    for (const Vec& x : init.sample(samples, rng)) {
        if (!safe.contains(x) || target.contains(x)) {
            issues.push_back("init point " + fmt(x) + " not in safe \\ target");
            break;
        }
    }
    for (const Vec& x : target.sample(samples, rng)) {
        if (!safe.contains(x)) {
            issues.push_back("target point " + fmt(x) + " not in safe");
            break;
        }
    }
    Vec theta(system.disturbance_dim());
    Vec y(n);
    for (const Vec& x : safe.sample(samples, rng)) {
        if (!working_box.contains(x)) {
            issues.push_back("safe point " + fmt(x) + " outside working box");
            break;
        }
        system.disturbance().sample(rng, theta);
        system.step(x.data(), theta.data(), y.data());
        if (!working_box.contains(y)) {
            issues.push_back("successor " + fmt(y) + " of " + fmt(x) + " outside working box");
            break;
        }
    }
    return issues;
}

} // namespace racert
