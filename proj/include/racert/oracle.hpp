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

#ifndef RACERT_ORACLE_HPP
#define RACERT_ORACLE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "racert/io.hpp"
#include "racert/system.hpp"

namespace racert {

enum class TrajectoryOutcome { ReachedTarget, LeftSafe, Undecided };

struct TrajectoryResult {
    TrajectoryOutcome outcome = TrajectoryOutcome::Undecided;
    // step at which the outcome was decided (K when undecided)
    int step = 0;
};

// Simulates up to K steps from x0. Reached at step k means x_k in T and
// x_0..x_k in X; Left at step k means x_k outside X with no earlier hit.
TrajectoryResult sample_trajectory(const ReachAvoidProblem& problem, const Vec& x0, int K, Rng& rng);

struct ProbabilityEstimate {
    double p_hat = 0.0;
    double lo = 0.0;
    double hi = 1.0;
    double undecided = 0.0;
    std::size_t N = 0;
    int K = 0;
    double alpha = 0.05;
    std::uint64_t seed = 0;
};

Json estimate_to_json(const ProbabilityEstimate& e);

// Two-sided Clopper-Pearson interval for k successes out of n at level 1-alpha.
std::pair<double, double> clopper_pearson(std::size_t k, std::size_t n, double alpha);

// Trajectory i uses Rng(derive_seed(seed, i)), so results do not depend on
// the thread count.
ProbabilityEstimate estimate_reach_avoid(const ReachAvoidProblem& problem, const Vec& x0, std::size_t N, int K,
                                         double alpha, std::uint64_t seed, unsigned threads = 1);

// Probability of x_0..x_K all lying in region; undecided is always 0.
ProbabilityEstimate estimate_stay_probability(const ReachAvoidProblem& problem, const Vec& x0, const Region& region,
                                              std::size_t N, int K, double alpha, std::uint64_t seed,
                                              unsigned threads = 1);

struct ValueIterationOptions {
    double step = 0.01;
    int K = 100;
    // cells per disturbance axis for the expectation; 0 picks 400 in 1-D and 32 in 2-D
    int theta_cells = 0;
    bool keep_history = false;
};

// K-step reach-avoid values on a grid over the working box, multilinearly
// interpolated between nodes.
class ValueFunction {
public:
    // V_K(x) = 1_T(x) + 1_{X\T}(x) E[V_{K-1}(f(x, theta))] applied exactly at x.
    double operator()(const Vec& x) const;
    // Interpolated V_K at nodes.
    double interpolate(const Vec& x) const;

    int K() const { return K_; }
    // Set when some successor stencil straddled a jump of more than 0.5
    // between neighbouring nodes; values near set boundaries are then
    // smoothed by the interpolation.
    bool interpolation_flag() const { return flag_; }
    const std::vector<Vec>& history() const { return history_; }
    const std::vector<Vec>& axes() const { return axes_; }

private:
    friend ValueFunction value_iteration_oracle(const ReachAvoidProblem&, const ValueIterationOptions&);
    double interp(const Vec& values, const double* x, bool* straddle) const;
    double bellman(const Vec& values, const double* x, bool* straddle) const;

    const ReachAvoidProblem* problem_ = nullptr;
    std::vector<Vec> axes_;
    Vec prev_;
    Vec current_;
    std::vector<Vec> history_;
    Vec theta_nodes_;
    Vec theta_weights_;
    int K_ = 0;
    bool flag_ = false;
};

// Throws UnsupportedDimension when the state dimension exceeds 2. The
// problem must outlive the returned function.
ValueFunction value_iteration_oracle(const ReachAvoidProblem& problem, const ValueIterationOptions& options);

} // namespace racert

#endif
