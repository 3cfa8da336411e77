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

#include "racert/quadrature.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "racert/errors.hpp"

namespace racert {

namespace {

// Golub-Welsch for a symmetric tridiagonal Jacobi matrix and total mass mu0.
GaussRule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& off, double mu0)
{
    const auto n = diag.size();
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    if (n == 1) {
        rule.nodes[0] = diag(0);
        rule.weights[0] = mu0;
        return rule;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw Error("quadrature: eigen-decomposition failed");
    }
    for (Eigen::Index k = 0; k < n; ++k) {
        const double v0 = solver.eigenvectors()(0, k);
        rule.nodes[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
        rule.weights[static_cast<std::size_t>(k)] = mu0 * v0 * v0;
    }
    return rule;
}

} // namespace

GaussRule gauss_jacobi(int order, double alpha, double beta)
{
    if (order < 1) {
        throw ContractViolation("gauss_jacobi: order must be >= 1");
    }
    if (alpha <= -1.0 || beta <= -1.0) {
        throw ContractViolation("gauss_jacobi: alpha, beta must exceed -1");
    }
    const int n = order;
    const double ab = alpha + beta;

    // Three-term recurrence of the monic Jacobi polynomials.
    Eigen::VectorXd diag(n);
    Eigen::VectorXd off(n > 1 ? n - 1 : 0);
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + ab;
        diag(k) = (k == 0) ? (beta - alpha) / (ab + 2.0)
                           : (beta * beta - alpha * alpha) / (s * (s + 2.0));
    }
    for (int k = 1; k < n; ++k) {
        const double s = 2.0 * k + ab;
        const double num = 4.0 * k * (k + alpha) * (k + beta) * (k + ab);
        const double den = s * s * (s + 1.0) * (s - 1.0);
        off(k - 1) = std::sqrt(num / den);
    }

    const double mu0 = std::pow(2.0, ab + 1.0) * std::tgamma(alpha + 1.0) *
                       std::tgamma(beta + 1.0) / std::tgamma(ab + 2.0);
    return golub_welsch(diag, off, mu0);
}

GaussRule gauss_triangular(int order)
{
    if (order < 1) {
        throw ContractViolation("gauss_triangular: order must be >= 1");
    }
    // Discrete measure exact up to degree 2m-1: Gauss-Jacobi(0,1) on each half,
    // where t = -+(1-u)/2 turns 1-|t| into (1+u)/2.
    const int m = order + 2;
    const GaussRule half = gauss_jacobi(m, 0.0, 1.0);
    std::vector<double> t;
    std::vector<double> w;
    for (std::size_t k = 0; k < half.nodes.size(); ++k) {
        const double s = 0.5 * (1.0 - half.nodes[k]);
        t.push_back(-s);
        w.push_back(0.25 * half.weights[k]);
        t.push_back(s);
        w.push_back(0.25 * half.weights[k]);
    }
    // Stieltjes procedure; the weight is even so every diagonal entry is 0.
    const std::size_t N = t.size();
    std::vector<double> prev(N, 0.0);
    std::vector<double> cur(N, 1.0);
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
    Eigen::VectorXd off(order > 1 ? order - 1 : 0);
    double norm_prev = 1.0;
    double norm = 1.0;
    for (int k = 0; k + 1 < order; ++k) {
        const double b = k == 0 ? 0.0 : norm / norm_prev;
        double next_norm = 0.0;
        for (std::size_t i = 0; i < N; ++i) {
            const double nx = t[i] * cur[i] - b * prev[i];
            prev[i] = cur[i];
            cur[i] = nx;
            next_norm += w[i] * nx * nx;
        }
        norm_prev = norm;
        norm = next_norm;
        off(k) = std::sqrt(norm / norm_prev);
    }
    GaussRule rule = golub_welsch(diag, off, 1.0);
    // exact symmetry
    const std::size_t n = rule.nodes.size();
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double x = 0.5 * (rule.nodes[n - 1 - k] - rule.nodes[k]);
        const double v = 0.5 * (rule.weights[n - 1 - k] + rule.weights[k]);
        rule.nodes[k] = -x;
        rule.nodes[n - 1 - k] = x;
        rule.weights[k] = v;
        rule.weights[n - 1 - k] = v;
    }
    if (n % 2 == 1) {
        rule.nodes[n / 2] = 0.0;
    }
    return rule;
}

} // namespace racert
