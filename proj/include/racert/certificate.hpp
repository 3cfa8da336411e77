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

#ifndef RACERT_CERTIFICATE_HPP
#define RACERT_CERTIFICATE_HPP

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "racert/geometry.hpp"
#include "racert/interval.hpp"
#include "racert/rng.hpp"

namespace racert {

enum class CertificateKind { Polynomial, Network, Affine };

std::string to_string(CertificateKind kind);

// Polynomial coefficients are confined to this box.
inline constexpr double kCoefficientBound = 100.0;

// Scalar field over R^n: polynomial template, feed-forward network with
// softplus hidden units, or an affine image a*inner + b of another
// certificate. Immutable value type; copies share the parameter storage.
class Certificate {
public:
    // Graded monomial basis: all exponent vectors of total degree <= degree,
    // ordered by degree, then lexicographically with x1 powers first.
    static std::vector<std::vector<int>> monomial_basis(std::size_t dim, int degree);

    static Certificate polynomial(std::size_t dim, int degree, Vec coefficients);
    static Certificate polynomial(std::vector<std::vector<int>> exponents, Vec coefficients);
    static Certificate constant(std::size_t dim, double value) { return polynomial(dim, 0, Vec{value}); }

    // layers = {n, w1, ..., 1}. Parameters are laid out layer by layer as the
    // row-major weight matrix (out x in) followed by the bias vector. Inputs
    // are normalized as (x - offset) * scale before the first layer.
    static Certificate network(std::vector<std::size_t> layers, Vec parameters, Vec input_offset = {},
                               Vec input_scale = {});
    // Network with He-style random weights and zero biases. The input
    // normalization maps `domain` onto [-1, 1]^n.
    static Certificate random_network(std::vector<std::size_t> layers, const Box& domain, Rng& rng);

    static Certificate affine(double a, double b, Certificate inner);

    CertificateKind kind() const;
    std::size_t dim() const;
    std::size_t parameter_count() const;

    double evaluate(std::span<const double> x) const;

    // d c(x) / d params. Throws NoTrainableParameters for the affine kind.
    Vec parameter_gradient(std::span<const double> x) const;

    // Returns c(x) and adds weight * d c(x)/d params into grad (length
    // parameter_count()). Hot path for the learner.
    double accumulate_gradient(std::span<const double> x, double weight, std::span<double> grad) const;

    const Vec& parameters() const;
    Certificate with_parameters(Vec params) const;
    // Clamps parameters into the template's admissible set in place.
    void project(std::span<double> params) const;

    // Enclosure of c over the box.
    Interval bound(const Box& box) const;
    // g[j] >= sup |d c / d x_j| over the box.
    Vec gradient_bound(const Box& box) const;
    // L with |c(x) - c(y)| <= L * ||x - y||_inf on the box.
    double lipschitz_bound(const Box& box) const;

    // Kind-specific accessors.
    const std::vector<std::vector<int>>& exponents() const;
    int degree() const;
    const std::vector<std::size_t>& layers() const;
    const Vec& input_offset() const;
    const Vec& input_scale() const;
    double affine_a() const;
    double affine_b() const;
    const Certificate& inner() const;

    std::string to_json() const;
    static Certificate from_json(const std::string& text);

    struct Impl;

private:
    explicit Certificate(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

} // namespace racert

#endif
