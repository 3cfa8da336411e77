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

#ifndef RACERT_SYSTEM_HPP
#define RACERT_SYSTEM_HPP

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "racert/distribution.hpp"
#include "racert/expr.hpp"
#include "racert/geometry.hpp"
#include "racert/region.hpp"

namespace racert {

// x(l+1) = f(x(l), theta(l)) with theta i.i.d. from `disturbance`.
class SystemModel {
public:
    SystemModel(std::vector<Expr> dynamics, std::vector<std::string> sources,
                DisturbanceDistribution disturbance);

    // Parses one expression per state coordinate.
    static SystemModel parse(const std::vector<std::string>& dynamics, DisturbanceDistribution disturbance);

    std::size_t state_dim() const { return dynamics_.size(); }
    std::size_t disturbance_dim() const { return disturbance_.dim(); }
    const DisturbanceDistribution& disturbance() const { return disturbance_; }
    const std::vector<Expr>& dynamics() const { return dynamics_; }
    const std::vector<std::string>& sources() const { return sources_; }

    // Unchecked hot-path step: out = f(x, theta).
    void step(const double* x, const double* theta, double* out) const;

    // Checked evaluation; throws ContractViolation on dimension mismatch.
    Vec evaluate(std::span<const double> x, std::span<const double> theta) const;

    // Enclosure of f(cell, Theta).
    Box image(const Box& cell) const;

    // jac[i][j] >= sup |d f_i / d x_j| over cell x Theta.
    std::vector<Vec> jacobian_bound(const Box& cell) const;

    // Bound on the infinity-norm Lipschitz constant of f(., theta) on the cell.
    double lipschitz(const Box& cell) const;

    // Cached tensor rule for the disturbance.
    std::shared_ptr<const QuadratureRule> quadrature(int order) const;

    // Successor states f(x, theta_k) for every node of the rule, row-major.
    void successors(std::span<const double> x, const QuadratureRule& rule, Vec& out) const;

private:
    std::vector<Expr> dynamics_;
    std::vector<std::string> sources_;
    std::vector<std::vector<Expr>> jacobian_;
    DisturbanceDistribution disturbance_;

    struct Cache {
        std::mutex mutex;
        std::map<int, std::shared_ptr<const QuadratureRule>> rules;
    };
    std::shared_ptr<Cache> cache_;
};

// Sum over the rule of w_k * g(f(x, theta_k)).
template <class G>
double expectation_with(const SystemModel& system, const QuadratureRule& rule, std::span<const double> x, G&& g)
{
    const std::size_t n = system.state_dim();
    double buf[16];
    Vec heap;
    double* y = buf;
    if (n > 16) {
        heap.resize(n);
        y = heap.data();
    }
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
        system.step(x.data(), rule.node(k), y);
        acc += rule.weights[k] * g(std::span<const double>(y, n));
    }
    return acc;
}

// E_theta[g(f(x, theta))] by tensor Gauss quadrature with `order` nodes per
// axis piece. `g` is any callable taking std::span<const double>.
template <class G>
double expectation(const SystemModel& system, G&& g, std::span<const double> x, int quad_order)
{
    return expectation_with(system, *system.quadrature(quad_order), x, std::forward<G>(g));
}

// Reach-avoid problem: X0, X, T, optional robust invariant Omega and the
// working box X-hat that replaces R^n in complements.
struct ReachAvoidProblem {
    std::string name;
    SystemModel system;
    Region init;
    Region safe;
    Region target;
    double threshold = 0.5;
    std::optional<Region> invariant;
    Box working_box;

    // Universe used for complements: Omega when present, else X-hat.
    Region universe() const;

    // Sampling checks of X0 within X\T, T within X, X-hat containing X and
    // f(X, Theta). Returns human-readable problems; empty when consistent.
    std::vector<std::string> validate(std::size_t samples, std::uint64_t seed) const;
};

} // namespace racert

#endif
