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

#include "racert/benchmarks.hpp"

#include "racert/errors.hpp"

namespace racert {

std::vector<std::string> benchmark_names()
{
    return {"ex1", "ex2", "ex3", "ex4"};
}

namespace {

Region diag_ellipsoid(Vec center, double q)
{
    return Region::ellipsoid(std::move(center), {{q, 0.0}, {0.0, q}});
}

} // namespace

ReachAvoidProblem benchmark_problem(const std::string& name)
{
    if (name == "ex1") {
        SystemModel sys = SystemModel::parse(
            {"x1 + 0.01*(-0.5*x1 - 0.5*x2 + 0.5*x1*x2)", "x2 + 0.01*(-0.5*x2 + 1 + θ1)"},
            DisturbanceDistribution(DisturbanceKind::UniformBox, Box{{-10.0}, {10.0}}));
        return ReachAvoidProblem{"ex1",
                                 std::move(sys),
                                 Region::ball({-0.2, -0.8}, 0.01),
                                 Region::ball({0.0, 0.0}, 1.0),
                                 diag_ellipsoid({0.0, 0.5}, 10.0),
                                 0.5,
                                 std::nullopt,
                                 Box{{-1.015, -1.085}, {1.015, 1.105}}};
    }
    if (name == "ex2") {
        SystemModel sys = SystemModel::parse(
            {"0.5*x1 - x2*x1", "(-0.5 + θ1)*x2 + x2*x1"},
            DisturbanceDistribution(DisturbanceKind::UniformBox, Box{{-1.0}, {1.0}}));
        return ReachAvoidProblem{"ex2",
                                 std::move(sys),
                                 Region::ball({-0.6, -0.5}, 0.01),
                                 Region::ball({0.0, 0.0}, 2.0),
                                 diag_ellipsoid({0.0, 0.0}, 100.0),
                                 0.9,
                                 std::nullopt,
                                 Box{{-5.0, -7.0}, {5.0, 7.0}}};
    }
    if (name == "ex3") {
        SystemModel sys = SystemModel::parse(
            {"0.6*x1 + 0.05*x2 + 0.01*θ1", "0.6*x2 + 0.005*θ2"},
            DisturbanceDistribution(DisturbanceKind::TriangularProduct, Box{{-1.0, -1.0}, {1.0, 1.0}}));
        return ReachAvoidProblem{"ex3",
                                 std::move(sys),
                                 Region::union_of({Region::box({-0.15, -0.1}, {-0.1, 0.1}),
                                                   Region::box({0.1, -0.1}, {0.15, 0.1})}),
                                 Region::box({-0.6, -0.6}, {0.6, 0.6}),
                                 Region::box({-0.1, -0.1}, {0.1, 0.1}),
                                 0.6,
                                 Region::box({-1.0, -1.0}, {1.0, 1.0}),
                                 Box{{-1.0, -1.0}, {1.0, 1.0}}};
    }
    if (name == "ex4") {
        SystemModel sys = SystemModel::parse(
            {"x1 + 0.2*x2", "x2 + 0.2*(sin(x1) - x2 + (-3*x1 - 0.5*x2) + θ1)"},
            DisturbanceDistribution(DisturbanceKind::UniformBox, Box{{-0.05}, {0.05}}));
        return ReachAvoidProblem{"ex4",
                                 std::move(sys),
                                 Region::box({0.2, -0.1}, {0.3, 0.1}),
                                 Region::box({-1.0, -1.0}, {1.0, 1.0}),
                                 Region::box({-0.2, -0.2}, {0.2, 0.2}),
                                 0.4,
                                 std::nullopt,
                                 Box{{-1.2, -1.51}, {1.2, 1.51}}};
    }
    if (name == "walk1d") {
        // unclamped walk used to cross-check the probability oracles
        SystemModel sys = SystemModel::parse(
            {"x1 + θ1"}, DisturbanceDistribution(DisturbanceKind::UniformBox, Box{{-0.5}, {0.5}}));
        return ReachAvoidProblem{"walk1d",
                                 std::move(sys),
                                 Region::box({-0.9}, {0.45}),
                                 Region::box({-1.0}, {1.0}),
                                 Region::box({0.5}, {1.0}),
                                 0.5,
                                 std::nullopt,
                                 Box{{-1.5}, {1.5}}};
    }
    throw ContractViolation("unknown benchmark '" + name + "'");
}

} // namespace racert
