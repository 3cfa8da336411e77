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

#include "racert/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <boost/math/distributions/beta.hpp>

#include "racert/errors.hpp"

namespace racert {

TrajectoryResult sample_trajectory(const ReachAvoidProblem& problem, const Vec& x0, int K, Rng& rng)
{
    const SystemModel& sys = problem.system;
    Vec x = x0;
    Vec next(x.size());
    Vec theta(sys.disturbance_dim());
    for (int k = 0;; ++k) {
        if (!problem.safe.contains(x)) {
            return {TrajectoryOutcome::LeftSafe, k};
        }
        if (problem.target.contains(x)) {
            return {TrajectoryOutcome::ReachedTarget, k};
        }
        if (k == K) {
            return {TrajectoryOutcome::Undecided, K};
        }
        sys.disturbance().sample(rng, theta);
        sys.step(x.data(), theta.data(), next.data());
        std::swap(x, next);
    }
}

std::pair<double, double> clopper_pearson(std::size_t k, std::size_t n, double alpha)
{
    if (n == 0 || k > n || !(alpha > 0.0 && alpha < 1.0)) {
        throw ContractViolation("clopper_pearson: need 0 <= k <= n, n > 0, alpha in (0,1)");
    }
    const double kk = static_cast<double>(k);
    const double nn = static_cast<double>(n);
    const double lo = k == 0 ? 0.0 : boost::math::quantile(boost::math::beta_distribution<>(kk, nn - kk + 1.0), alpha / 2);
    const double hi = k == n ? 1.0 : boost::math::quantile(boost::math::beta_distribution<>(kk + 1.0, nn - kk), 1.0 - alpha / 2);
    return {lo, hi};
}

Json estimate_to_json(const ProbabilityEstimate& e)
{
    return Json{{"p_hat", e.p_hat}, {"lo", e.lo},    {"hi", e.hi},       {"undecided", e.undecided},
                {"N", e.N},         {"K", e.K},      {"alpha", e.alpha}, {"seed", e.seed}};
}

namespace {

// Runs fn(i) for i in [0, N) over a static partition and sums the per-index
// counters, so the totals do not depend on the thread count.
template <class Fn>
std::vector<std::size_t> tally(std::size_t N, unsigned threads, std::size_t buckets, Fn fn)
{
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads, N));
    std::vector<std::vector<std::size_t>> part(workers, std::vector<std::size_t>(buckets, 0));
    auto run = [&](std::size_t w) {
        const std::size_t chunk = (N + workers - 1) / workers;
        for (std::size_t i = w * chunk; i < std::min(N, (w + 1) * chunk); ++i) {
            ++part[w][fn(i)];
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back(run, w);
        }
        for (auto& t : pool) {
            t.join();
        }
    }
    std::vector<std::size_t> total(buckets, 0);
    for (const auto& p : part) {
        for (std::size_t b = 0; b < buckets; ++b) {
            total[b] += p[b];
        }
    }
    return total;
}

void check_args(const ReachAvoidProblem& problem, const Vec& x0, std::size_t N, int K, double alpha)
{
    if (x0.size() != problem.system.state_dim()) {
        throw ContractViolation("estimate: x0 has the wrong dimension");
    }
    if (N < 100) {
        throw ContractViolation("estimate: N must be at least 100");
    }
    if (K < 0) {
        throw ContractViolation("estimate: K must be non-negative");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ContractViolation("estimate: alpha must lie in (0,1)");
    }
}

} // namespace

ProbabilityEstimate estimate_reach_avoid(const ReachAvoidProblem& problem, const Vec& x0, std::size_t N, int K,
                                         double alpha, std::uint64_t seed, unsigned threads)
{
    check_args(problem, x0, N, K, alpha);
    if (!problem.init.contains(x0)) {
        throw ContractViolation("estimate_reach_avoid: x0 must lie in X0");
    }
    const auto counts = tally(N, threads, 3, [&](std::size_t i) {
        Rng rng(derive_seed(seed, i));
        return static_cast<std::size_t>(sample_trajectory(problem, x0, K, rng).outcome);
    });
    ProbabilityEstimate e;
    e.N = N;
    e.K = K;
    e.alpha = alpha;
    e.seed = seed;
    const std::size_t hit = counts[static_cast<std::size_t>(TrajectoryOutcome::ReachedTarget)];
    e.p_hat = static_cast<double>(hit) / static_cast<double>(N);
    e.undecided = static_cast<double>(counts[static_cast<std::size_t>(TrajectoryOutcome::Undecided)]) /
                  static_cast<double>(N);
    std::tie(e.lo, e.hi) = clopper_pearson(hit, N, alpha);
    return e;
}

ProbabilityEstimate estimate_stay_probability(const ReachAvoidProblem& problem, const Vec& x0, const Region& region,
                                              std::size_t N, int K, double alpha, std::uint64_t seed,
                                              unsigned threads)
{
    check_args(problem, x0, N, K, alpha);
    const SystemModel& sys = problem.system;
    const auto counts = tally(N, threads, 2, [&](std::size_t i) -> std::size_t {
        Rng rng(derive_seed(seed, i));
        Vec x = x0;
        Vec next(x.size());
        Vec theta(sys.disturbance_dim());
        for (int k = 0;; ++k) {
            if (!region.contains(x)) {
                return 0;
            }
            if (k == K) {
                return 1;
            }
            sys.disturbance().sample(rng, theta);
            sys.step(x.data(), theta.data(), next.data());
            std::swap(x, next);
        }
    });
    ProbabilityEstimate e;
    e.N = N;
    e.K = K;
    e.alpha = alpha;
    e.seed = seed;
    e.p_hat = static_cast<double>(counts[1]) / static_cast<double>(N);
    std::tie(e.lo, e.hi) = clopper_pearson(counts[1], N, alpha);
    return e;
}

namespace {

// Distribution function of one disturbance axis.
double axis_cdf(const DisturbanceDistribution& d, std::size_t axis, double t)
{
    const double lo = d.support().lo[axis];
    const double hi = d.support().hi[axis];
    if (t <= lo) {
        return 0.0;
    }
    if (t >= hi) {
        return 1.0;
    }
    const double u = (t - lo) / (hi - lo);
    if (d.kind() == DisturbanceKind::UniformBox) {
        return u;
    }
    return u <= 0.5 ? 2.0 * u * u : 1.0 - 2.0 * (1.0 - u) * (1.0 - u);
}

} // namespace

double ValueFunction::interp(const Vec& values, const double* x, bool* straddle) const
{
    const std::size_t n = axes_.size();
    std::size_t base[2] = {0, 0};
    double frac[2] = {0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const Vec& a = axes_[i];
        if (x[i] < a.front() || x[i] > a.back()) {
            return 0.0;
        }
        const double h = (a.back() - a.front()) / static_cast<double>(a.size() - 1);
        std::size_t j = static_cast<std::size_t>((x[i] - a.front()) / h);
        j = std::min(j, a.size() - 2);
        base[i] = j;
        frac[i] = std::clamp((x[i] - a[j]) / (a[j + 1] - a[j]), 0.0, 1.0);
    }
    if (n == 1) {
        const double v0 = values[base[0]];
        const double v1 = values[base[0] + 1];
        if (straddle && std::abs(v1 - v0) > 0.5) {
            *straddle = true;
        }
        return v0 + frac[0] * (v1 - v0);
    }
    const std::size_t ny = axes_[1].size();
    const double v00 = values[base[0] * ny + base[1]];
    const double v01 = values[base[0] * ny + base[1] + 1];
    const double v10 = values[(base[0] + 1) * ny + base[1]];
    const double v11 = values[(base[0] + 1) * ny + base[1] + 1];
    if (straddle) {
        const double mx = std::max({v00, v01, v10, v11});
        const double mn = std::min({v00, v01, v10, v11});
        if (mx - mn > 0.5) {
            *straddle = true;
        }
    }
    const double a = v00 + frac[1] * (v01 - v00);
    const double b = v10 + frac[1] * (v11 - v10);
    return a + frac[0] * (b - a);
}

double ValueFunction::bellman(const Vec& values, const double* x, bool* straddle) const
{
    const std::size_t n = axes_.size();
    const std::span<const double> xs(x, n);
    if (!problem_->safe.contains(xs)) {
        return 0.0;
    }
    if (problem_->target.contains(xs)) {
        return 1.0;
    }
    const std::size_t m = problem_->system.disturbance_dim();
    double s = 0.0;
    double next[2];
    for (std::size_t q = 0; q < theta_weights_.size(); ++q) {
        problem_->system.step(x, &theta_nodes_[q * m], next);
        s += theta_weights_[q] * interp(values, next, straddle);
    }
    return s;
}

double ValueFunction::operator()(const Vec& x) const
{
    if (x.size() != axes_.size()) {
        throw ContractViolation("value function: wrong dimension");
    }
    if (K_ == 0) {
        return problem_->safe.contains(x) && problem_->target.contains(x) ? 1.0 : 0.0;
    }
    return bellman(prev_, x.data(), nullptr);
}

double ValueFunction::interpolate(const Vec& x) const
{
    if (x.size() != axes_.size()) {
        throw ContractViolation("value function: wrong dimension");
    }
    return interp(current_, x.data(), nullptr);
}

ValueFunction value_iteration_oracle(const ReachAvoidProblem& problem, const ValueIterationOptions& options)
{
    const std::size_t n = problem.system.state_dim();
    if (n > 2) {
        throw UnsupportedDimension("value iteration supports state dimension <= 2, got " + std::to_string(n));
    }
    if (!(options.step > 0.0) || options.K < 0) {
        throw ContractViolation("value iteration: need step > 0 and K >= 0");
    }
    const std::size_t m = problem.system.disturbance_dim();
    if (m > 2) {
        throw UnsupportedDimension("value iteration supports disturbance dimension <= 2");
    }
    ValueFunction vf;
    vf.problem_ = &problem;
    vf.K_ = options.K;
    const Box& box = problem.working_box;
    std::size_t nodes = 1;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = box.hi[i] - box.lo[i];
        const std::size_t cnt = static_cast<std::size_t>(std::ceil(w / options.step - 1e-9)) + 1;
        Vec a(cnt);
        for (std::size_t k = 0; k < cnt; ++k) {
            a[k] = box.lo[i] + w * static_cast<double>(k) / static_cast<double>(cnt - 1);
        }
        nodes *= cnt;
        if (nodes > 20'000'000) {
            throw ResourceLimitError("value iteration grid too large");
        }
        vf.axes_.push_back(std::move(a));
    }
    // midpoint nodes weighted by the exact mass of each disturbance cell
    const int cells = options.theta_cells > 0 ? options.theta_cells : (m == 1 ? 400 : 32);
    const auto& dist = problem.system.disturbance();
    std::vector<Vec> an(m);
    std::vector<Vec> aw(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double lo = dist.support().lo[i];
        const double hi = dist.support().hi[i];
        for (int c = 0; c < cells; ++c) {
            const double a = lo + (hi - lo) * c / cells;
            const double b = lo + (hi - lo) * (c + 1) / cells;
            an[i].push_back(0.5 * (a + b));
            aw[i].push_back(axis_cdf(dist, i, b) - axis_cdf(dist, i, a));
        }
    }
    const std::size_t total = m == 1 ? an[0].size() : an[0].size() * an[1].size();
    for (std::size_t q = 0; q < total; ++q) {
        if (m == 1) {
            vf.theta_nodes_.push_back(an[0][q]);
            vf.theta_weights_.push_back(aw[0][q]);
        } else {
            const std::size_t a = q / an[1].size();
            const std::size_t b = q % an[1].size();
            vf.theta_nodes_.push_back(an[0][a]);
            vf.theta_nodes_.push_back(an[1][b]);
            vf.theta_weights_.push_back(aw[0][a] * aw[1][b]);
        }
    }
    auto node_point = [&](std::size_t idx, double* x) {
        if (n == 1) {
            x[0] = vf.axes_[0][idx];
        } else {
            const std::size_t ny = vf.axes_[1].size();
            x[0] = vf.axes_[0][idx / ny];
            x[1] = vf.axes_[1][idx % ny];
        }
    };
    Vec v(nodes);
    double x[2];
    for (std::size_t k = 0; k < nodes; ++k) {
        node_point(k, x);
        const std::span<const double> xs(x, n);
        v[k] = problem.safe.contains(xs) && problem.target.contains(xs) ? 1.0 : 0.0;
    }
    if (options.keep_history) {
        vf.history_.push_back(v);
    }
    vf.prev_ = v;
    for (int it = 0; it < options.K; ++it) {
        Vec next(nodes);
        for (std::size_t k = 0; k < nodes; ++k) {
            node_point(k, x);
            next[k] = vf.bellman(v, x, &vf.flag_);
        }
        vf.prev_ = std::move(v);
        v = std::move(next);
        if (options.keep_history) {
            vf.history_.push_back(v);
        }
    }
    vf.current_ = std::move(v);
    return vf;
}

} // namespace racert
