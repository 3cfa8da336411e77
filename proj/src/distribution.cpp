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

#include "racert/distribution.hpp"

#include <cmath>

#include "racert/errors.hpp"

namespace racert {

std::string to_string(DisturbanceKind kind)
{
    return kind == DisturbanceKind::UniformBox ? "UniformBox" : "TriangularProduct";
}

DisturbanceKind disturbance_kind_from_string(const std::string& s)
{
    if (s == "UniformBox" || s == "uniform") {
        return DisturbanceKind::UniformBox;
    }
    if (s == "TriangularProduct" || s == "triangular") {
        return DisturbanceKind::TriangularProduct;
    }
    throw ParseError("disturbance.kind", "unknown disturbance kind '" + s + "'");
}

DisturbanceDistribution::DisturbanceDistribution(DisturbanceKind kind, Box support)
    : kind_(kind), support_(std::move(support))
{
    if (support_.lo.size() != support_.hi.size() || support_.lo.empty()) {
        throw ContractViolation("disturbance support must be a non-empty box");
    }
    for (std::size_t i = 0; i < support_.dim(); ++i) {
        if (!(support_.lo[i] < support_.hi[i])) {
            throw ContractViolation("disturbance support must have positive width on every axis");
        }
    }
}

double DisturbanceDistribution::axis_density(std::size_t axis, double t) const
{
    const double lo = support_.lo[axis];
    const double hi = support_.hi[axis];
    if (t < lo || t > hi) {
        return 0.0;
    }
    if (kind_ == DisturbanceKind::UniformBox) {
        return 1.0 / (hi - lo);
    }
    const double c = 0.5 * (lo + hi);
    const double w = 0.5 * (hi - lo);
    return (1.0 - std::abs(t - c) / w) / w;
}

double DisturbanceDistribution::density(std::span<const double> theta) const
{
    double d = 1.0;
    for (std::size_t i = 0; i < dim(); ++i) {
        d *= axis_density(i, theta[i]);
    }
    return d;
}

void DisturbanceDistribution::sample(Rng& rng, std::span<double> out) const
{
    for (std::size_t i = 0; i < dim(); ++i) {
        const double lo = support_.lo[i];
        const double hi = support_.hi[i];
        if (kind_ == DisturbanceKind::UniformBox) {
            out[i] = rng.uniform(lo, hi);
        } else {
            // sum of two uniforms on [0,1) is triangular on [0,2)
            const double s = rng.uniform01() + rng.uniform01();
            out[i] = lo + 0.5 * (hi - lo) * s;
        }
    }
}

void DisturbanceDistribution::axis_rule(std::size_t axis, int order, Vec& nodes, Vec& weights) const
{
    const double lo = support_.lo[axis];
    const double hi = support_.hi[axis];
    const double c = 0.5 * (lo + hi);
    const double w = 0.5 * (hi - lo);
    nodes.clear();
    weights.clear();
    if (kind_ == DisturbanceKind::UniformBox) {
        const GaussRule g = gauss_legendre(order);
        for (std::size_t k = 0; k < g.nodes.size(); ++k) {
            nodes.push_back(c + w * g.nodes[k]);
            weights.push_back(0.5 * g.weights[k]);
        }
        return;
    }
    const GaussRule g = gauss_triangular(order);
    for (std::size_t k = 0; k < g.nodes.size(); ++k) {
        nodes.push_back(c + w * g.nodes[k]);
        weights.push_back(g.weights[k]);
    }
}

QuadratureRule DisturbanceDistribution::quadrature(int order) const
{
    if (order < 1) {
        throw ContractViolation("quadrature order must be >= 1");
    }
    const std::size_t m = dim();
    std::vector<Vec> axis_nodes(m);
    std::vector<Vec> axis_weights(m);
    std::size_t total = 1;
    for (std::size_t i = 0; i < m; ++i) {
        axis_rule(i, order, axis_nodes[i], axis_weights[i]);
        total *= axis_nodes[i].size();
    }
    QuadratureRule rule;
    rule.dim = m;
    rule.nodes.resize(total * m);
    rule.weights.resize(total);
    std::vector<std::size_t> idx(m, 0);
    for (std::size_t k = 0; k < total; ++k) {
        double wt = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            rule.nodes[k * m + i] = axis_nodes[i][idx[i]];
            wt *= axis_weights[i][idx[i]];
        }
        rule.weights[k] = wt;
        for (std::size_t i = m; i-- > 0;) {
            if (++idx[i] < axis_nodes[i].size()) {
                break;
            }
            idx[i] = 0;
        }
    }
    return rule;
}

} // namespace racert
