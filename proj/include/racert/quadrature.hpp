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

#ifndef RACERT_QUADRATURE_HPP
#define RACERT_QUADRATURE_HPP

#include <cstddef>
#include <vector>

namespace racert {

// One-dimensional Gauss rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Jacobi rule for the weight (1-x)^alpha (1+x)^beta on [-1, 1] with
// `order` nodes (Golub-Welsch). Exact for polynomials of degree <= 2*order-1
// times the weight.
GaussRule gauss_jacobi(int order, double alpha, double beta);

inline GaussRule gauss_legendre(int order)
{
    return gauss_jacobi(order, 0.0, 0.0);
}

// Gauss rule for the triangular density 1 - |t| on [-1, 1]; weights sum to 1
// and the rule is exact for polynomials of degree <= 2*order-1.
GaussRule gauss_triangular(int order);

// Tensor-product rule for a probability measure on R^m. Node k occupies
// nodes[k*dim .. k*dim+dim); weights sum to 1.
struct QuadratureRule {
    std::size_t dim = 0;
    std::vector<double> nodes;
    std::vector<double> weights;

    std::size_t size() const { return weights.size(); }
    const double* node(std::size_t k) const { return nodes.data() + k * dim; }
};

} // namespace racert

#endif
