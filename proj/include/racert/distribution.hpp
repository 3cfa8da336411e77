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

#ifndef RACERT_DISTRIBUTION_HPP
#define RACERT_DISTRIBUTION_HPP

#include <span>
#include <string>

#include "racert/geometry.hpp"
#include "racert/quadrature.hpp"
#include "racert/rng.hpp"

namespace racert {

enum class DisturbanceKind { UniformBox, TriangularProduct };

std::string to_string(DisturbanceKind kind);
DisturbanceKind disturbance_kind_from_string(const std::string& s);

// Product distribution over an axis-aligned support box. Each axis is either
// uniform on [lo, hi] or symmetric triangular on [lo, hi] (peak at the
// midpoint, density (1 - |t - c|/w)/w with c the midpoint, w the half-width).
class DisturbanceDistribution {
public:
    DisturbanceDistribution(DisturbanceKind kind, Box support);

    DisturbanceKind kind() const { return kind_; }
    const Box& support() const { return support_; }
    std::size_t dim() const { return support_.dim(); }

    double axis_density(std::size_t axis, double t) const;
    double density(std::span<const double> theta) const;

    // Draws one vector; always inside the support box.
    void sample(Rng& rng, std::span<double> out) const;

    // Tensor-product Gauss rule with `order` nodes per axis piece. Uniform
    // axes use Gauss-Legendre; triangular axes are split at the peak and use
    // Gauss-Jacobi(0,1) on each half so the linear density is absorbed into
    // the weight. Exact for integrands polynomial of degree <= 2*order-1 in
    // each disturbance coordinate.
    QuadratureRule quadrature(int order) const;

    // One-dimensional node/weight lists for a single axis.
    void axis_rule(std::size_t axis, int order, Vec& nodes, Vec& weights) const;

private:
    DisturbanceKind kind_;
    Box support_;
};

} // namespace racert

#endif
