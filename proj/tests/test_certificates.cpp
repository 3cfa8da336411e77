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

#include <algorithm>
#include <cmath>
#include <cstring>

#include "racert/certificate.hpp"
#include "racert/errors.hpp"
#include "racert/io.hpp"

using namespace racert;

namespace {

double linf(const Vec& a, const Vec& b)
{
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

Certificate random_poly(std::size_t dim, int degree, Rng& rng)
{
    const auto basis = Certificate::monomial_basis(dim, degree);
    Vec c(basis.size());
    for (double& v : c) {
        v = rng.uniform(-3, 3);
    }
    return Certificate::polynomial(basis, c);
}

Vec random_point(const Box& b, Rng& rng)
{
    Vec x(b.dim());
    for (std::size_t i = 0; i < b.dim(); ++i) {
        x[i] = rng.uniform(b.lo[i], b.hi[i]);
    }
    return x;
}

void check_gradient(const Certificate& c, const Vec& x)
{
    const Vec g = c.parameter_gradient(x);
    Vec p = c.parameters();
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double h = 1e-5;
        Vec a = p;
        Vec b = p;
        a[k] += h;
        b[k] -= h;
        const double fd = (c.with_parameters(a).evaluate(x) - c.with_parameters(b).evaluate(x)) / (2 * h);
        CHECK(std::abs(fd - g[k]) <= 1e-4 * std::max(1.0, std::abs(g[k])));
    }
}

void check_lipschitz(const Certificate& c, const Box& box, Rng& rng, int pairs)
{
    const double L = c.lipschitz_bound(box);
    const Vec gb = c.gradient_bound(box);
    for (int i = 0; i < pairs; ++i) {
        const Vec x = random_point(box, rng);
        Vec y = random_point(box, rng);
        if (i % 2) {
            // nearby pairs probe the local slope
            for (std::size_t k = 0; k < y.size(); ++k) {
                y[k] = std::clamp(x[k] + 1e-3 * (y[k] - x[k]), box.lo[k], box.hi[k]);
            }
        }
        const double diff = std::abs(c.evaluate(x) - c.evaluate(y));
        REQUIRE(diff <= L * linf(x, y) + 1e-9);
        double weighted = 0.0;
        for (std::size_t k = 0; k < x.size(); ++k) {
            weighted += gb[k] * std::abs(x[k] - y[k]);
        }
        REQUIRE(diff <= weighted + 1e-9);
    }
}

} // namespace

TEST_CASE("evaluate examples")
{
    CHECK(Certificate::polynomial(2, 3, Vec(10, 0.0)).evaluate(Vec{0.7, -2.0}) == 0.0);
    const auto sq = Certificate::polynomial({{2, 0}, {0, 2}}, {1.0, 1.0});
    CHECK(sq.evaluate(Vec{0.3, 0.4}) == doctest::Approx(0.25).epsilon(1e-15));
    const auto V = Certificate::constant(2, 1.0);
    CHECK(Certificate::affine(-(1 - 0.5), 1.0, V).evaluate(Vec{0.1, 0.2}) == 0.5);
}

TEST_CASE("monomial basis is graded")
{
    const auto b = Certificate::monomial_basis(2, 2);
    REQUIRE(b.size() == 6);
    CHECK(b[0] == std::vector<int>{0, 0});
    CHECK(b[1] == std::vector<int>{1, 0});
    CHECK(b[2] == std::vector<int>{0, 1});
    CHECK(b[3] == std::vector<int>{2, 0});
    CHECK(b[5] == std::vector<int>{0, 2});
    CHECK(Certificate::monomial_basis(3, 4).size() == 35);
}

TEST_CASE("coefficients outside the admissible box are rejected")
{
    CHECK_THROWS_AS(Certificate::polynomial(1, 1, {0.0, 100.5}), ParameterDomainError);
    const auto c = Certificate::polynomial(1, 1, {0.0, 1.0});
    Vec p{250.0, -300.0};
    c.project(p);
    CHECK(p == Vec{100.0, -100.0});
}

TEST_CASE("parameter gradient examples")
{
    const auto lin = Certificate::polynomial({{0, 0}, {1, 0}}, {0.3, -0.2});
    CHECK(lin.parameter_gradient(Vec{2.0, 5.0}) == Vec{1.0, 2.0});

    Rng rng(1);
    const Box dom{{-1, -1}, {1, 1}};
    auto net = Certificate::random_network({2, 4, 4, 1}, dom, rng);
    Vec p = net.parameters();
    // zero final layer weights: 4*2+4 + 4*4+4 = 32, final weights occupy [32, 36)
    REQUIRE(p.size() == 37);
    std::fill(p.begin() + 32, p.begin() + 36, 0.0);
    net = net.with_parameters(p);
    const Vec g = net.parameter_gradient(Vec{0.3, -0.1});
    CHECK(g.back() == 1.0);
    for (std::size_t k = 0; k < 32; ++k) {
        CHECK(g[k] == 0.0);
    }

    CHECK_THROWS_AS(Certificate::affine(2.0, 1.0, lin).parameter_gradient(Vec{0.0, 0.0}), NoTrainableParameters);
    CHECK_THROWS_AS(Certificate::affine(2.0, 1.0, lin).with_parameters({}), NoTrainableParameters);
}

TEST_CASE("parameter gradients match central differences")
{
    Rng rng(2);
    const Box dom{{-1.2, -1.5}, {1.2, 1.5}};
    for (int trial = 0; trial < 10; ++trial) {
        check_gradient(Certificate::random_network({2, 4, 4, 1}, dom, rng), random_point(dom, rng));
        check_gradient(Certificate::random_network({2, 8, 8, 1}, dom, rng), random_point(dom, rng));
        check_gradient(random_poly(2, 4, rng), random_point(dom, rng));
    }
}

TEST_CASE("lipschitz examples")
{
    const Box box{{-1.0, -2.0}, {1.0, 3.0}};
    CHECK(Certificate::constant(2, 4.2).lipschitz_bound(box) == 0.0);
    CHECK(Certificate::polynomial({{1, 0}}, {3.0}).lipschitz_bound(box) == 3.0);
    const double L = Certificate::polynomial({{2}}, {1.0}).lipschitz_bound(Box{{-1.0}, {1.0}});
    CHECK(L >= 2.0);
    CHECK(L <= 2.0 + 1e-9);
}

TEST_CASE("lipschitz bounds are sound on random pairs")
{
    Rng rng(3);
    const Box big{{-1.2, -1.51}, {1.2, 1.51}};
    const Box small{{0.1, -0.2}, {0.15, -0.1}};
    for (int trial = 0; trial < 4; ++trial) {
        for (const Box& b : {big, small}) {
            check_lipschitz(Certificate::random_network({2, 8, 8, 1}, big, rng), b, rng, 10000);
            check_lipschitz(Certificate::random_network({2, 4, 4, 1}, big, rng), b, rng, 10000);
            check_lipschitz(random_poly(2, 5, rng), b, rng, 10000);
        }
    }
}

TEST_CASE("interval value bound encloses samples")
{
    Rng rng(4);
    const Box b{{-0.3, 0.2}, {0.1, 0.6}};
    for (int trial = 0; trial < 5; ++trial) {
        const auto net = Certificate::random_network({2, 8, 8, 1}, b, rng);
        const auto poly = random_poly(2, 4, rng);
        const Interval in = net.bound(b);
        const Interval ip = poly.bound(b);
        for (int i = 0; i < 2000; ++i) {
            const Vec x = random_point(b, rng);
            REQUIRE(in.contains(net.evaluate(x)));
            REQUIRE(ip.contains(poly.evaluate(x)));
        }
    }
}

TEST_CASE("affine composition law")
{
    Rng rng(5);
    const Box b{{-1, -1}, {1, 1}};
    const auto net = Certificate::random_network({2, 4, 4, 1}, b, rng);
    const auto aff = Certificate::affine(-0.4, 1.0, net);
    for (int i = 0; i < 100; ++i) {
        const Vec x = random_point(b, rng);
        CHECK(aff.evaluate(x) == -0.4 * net.evaluate(x) + 1.0);
    }
    CHECK(aff.lipschitz_bound(b) == 0.4 * net.lipschitz_bound(b));
}

TEST_CASE("json round trip is bit exact")
{
    Rng rng(6);
    const Box b{{-5, -7}, {5, 7}};
    const auto net = Certificate::random_network({2, 8, 8, 1}, b, rng);
    const auto poly = random_poly(2, 6, rng);
    const auto aff = Certificate::affine(-0.35, 1.0, net);
    for (const Certificate& c : {net, poly, aff}) {
        const Certificate back = Certificate::from_json(c.to_json());
        CHECK(back.kind() == c.kind());
        const auto& p0 = c.kind() == CertificateKind::Affine ? c.inner().parameters() : c.parameters();
        const auto& p1 = back.kind() == CertificateKind::Affine ? back.inner().parameters() : back.parameters();
        REQUIRE(p0.size() == p1.size());
        for (std::size_t k = 0; k < p0.size(); ++k) {
            CHECK(std::memcmp(&p0[k], &p1[k], sizeof(double)) == 0);
        }
        CHECK(back.to_json() == c.to_json());
    }
    CHECK_THROWS_AS(Certificate::from_json("{\"kind\": \"spline\"}"), ParseError);
}
