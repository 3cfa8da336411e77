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

#ifndef RACERT_VERIFIER_HPP
#define RACERT_VERIFIER_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "racert/conditions.hpp"
#include "racert/io.hpp"

namespace racert {

enum class VerifyStatus { Certified, Violated, Inconclusive };

std::string to_string(VerifyStatus s);

struct Counterexample {
    std::string clause;
    Vec x;
    double residual = 0.0;
};

struct ClauseReport {
    std::string label;
    VerifyStatus status = VerifyStatus::Certified;
    // Largest residual(center) + Lipschitz slack over checked cells; <= 0
    // everywhere means the clause is certified.
    double worst_margin = -std::numeric_limits<double>::infinity();
    Vec worst_center;
    std::size_t cells_checked = 0;
    std::size_t cells_guard_skipped = 0;
    std::size_t cells_certified = 0;
    std::vector<Counterexample> counterexamples;
    // Cells whose margin test failed without an exact violation; refine()
    // re-examines exactly these.
    std::vector<Cell> inconclusive;
    // margin - residual(center) for each inconclusive cell
    std::vector<double> inconclusive_slack;
};

struct VerificationVerdict {
    VerifyStatus status = VerifyStatus::Certified;
    double resolution = 0.0;
    int quad_order = 8;
    std::size_t evaluations = 0;
    std::vector<ClauseReport> clauses;

    std::vector<Counterexample> counterexamples() const;
    // Centers of all inconclusive cells, tagged by clause label.
    std::vector<Counterexample> hard_points() const;
};

struct VerifyOptions {
    int quad_order = 8;
    unsigned threads = 1;
    std::uint64_t seed = 0;
    std::size_t max_cells = 10'000'000;
    std::size_t max_evaluations = 100'000'000;
    std::size_t max_counterexamples = 2000;
    // Random probes inside a failing cell, on top of center and 2n axis points.
    int random_probes = 8;
};

// Covers each clause domain with cells of side <= r and discharges
// "residual <= 0" per cell by residual(center) + sum_j rad_j G_j <= 0, where
// G_j bounds |d residual / d x_j| on the cell.
VerificationVerdict verify(const ConditionInstance& instance, double r, const VerifyOptions& options = {});

// Re-checks only inconclusive cells at the finer resolution r_next.
VerificationVerdict refine(const VerificationVerdict& verdict, const ConditionInstance& instance, double r_next,
                           const VerifyOptions& options = {});

// Clause-level forms used by the instance overloads; the clause list must
// reference roles present in `certificates`.
VerificationVerdict verify(const std::vector<ResidualClause>& clauses, const CertificateMap& certificates,
                           const SystemModel& system, double r, const VerifyOptions& options = {});
VerificationVerdict refine(const VerificationVerdict& verdict, const std::vector<ResidualClause>& clauses,
                           const CertificateMap& certificates, const SystemModel& system, double r_next,
                           const VerifyOptions& options = {});

// verify at r0, then halve the resolution while inconclusive and r >= r_min.
VerificationVerdict verify_adaptive(const ConditionInstance& instance, double r0, double r_min,
                                    const VerifyOptions& options = {});

Json verdict_to_json(const VerificationVerdict& v);
std::string verdict_table(const VerificationVerdict& v);
// clause,x1..xn,residual
std::string counterexamples_csv(const VerificationVerdict& v, std::size_t dim);
// clause,worst_residual,worst_point  (one row per clause)
std::string clause_csv(const VerificationVerdict& v);

} // namespace racert

#endif
