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

#ifndef RACERT_CEGIS_HPP
#define RACERT_CEGIS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "racert/conditions.hpp"
#include "racert/io.hpp"
#include "racert/verifier.hpp"

namespace racert {

// Shape of the certificates to train.
struct TemplateSpec {
    CertificateKind kind = CertificateKind::Network;
    std::vector<std::size_t> hidden{8, 8};
    int degree = 4;

    // "net8x8", "poly4"
    std::string name() const;
    static TemplateSpec parse(const std::string& name);
    Certificate instantiate(const Box& domain, Rng& rng) const;
};

struct LearnerConfig {
    int steps = 300;
    double step_size = 0.05;
    // 0 = full batch
    std::size_t batch_size = 0;
    // negative: derived from the first verifier resolution
    double tau = -1.0;
    int quad_order = 2;
};

struct CegisConfig {
    int max_iterations = 10;
    int restarts = 3;
    std::uint64_t seed = 0;
    std::size_t samples_per_clause = 400;
    std::size_t max_new_points = 200;
    // loss weight of absorbed counterexamples relative to other samples
    double counterexample_weight = 10.0;
    LearnerConfig learner;
    double resolution = 0.05;
    double min_resolution = 0.00078125;
    int verify_quad_order = 5;
    unsigned threads = 1;
    TemplateSpec templ;
    // Scalar assignments tried in order; each fills the template's unset
    // scalars. Empty means the template's own scalars.
    std::vector<Scalars> scalar_sweep;

    void validate() const;
};

CegisConfig cegis_config_from_json(const Json& j);
Json cegis_config_to_json(const CegisConfig& c);

// Defaults used when a config leaves the sweep empty and the template lacks
// a scalar.
std::vector<Scalars> default_scalar_sweep(ConditionId id);

// Scalars that encode the probability threshold p for a condition: p itself
// where the condition takes it, lambda' = 1/(1-p) for BC3.
Scalars scalars_for_threshold(ConditionId id, double p);

struct CegisState {
    int restart = 0;
    int iteration = 0;
    Scalars scalars;
    std::vector<std::string> labels;
    // per clause, in clause order; grows monotonically within a restart
    std::vector<std::vector<Vec>> samples;
    // per sample: hinge target below zero, at least the learner's tau
    std::vector<std::vector<double>> margins;
    // per sample loss weight; missing entries count as 1
    std::vector<std::vector<double>> weights;
    CertificateMap certificates;
    std::vector<double> loss_history;
    std::optional<VerificationVerdict> last_verdict;
    bool stalled = false;
    std::vector<std::string> empty_clauses;
};

struct LearnerReport {
    double initial_loss = 0.0;
    double final_loss = 0.0;
    double tau = 0.0;
    int steps = 0;
    bool stalled = false;
    // loss after each step
    std::vector<double> trace;
};

// Gradient descent on sum_c mean_{x in S_c} max(0, residual_c(x) + max(tau, m_x)) with
// monotone backtracking. Updates state.certificates and state.loss_history.
LearnerReport learner_step(const ConditionInstance& instance, CegisState& state, const CegisConfig& config);

// Hinge loss of the current certificates on the state's samples.
double hinge_loss(const ConditionInstance& instance, const CegisState& state, double tau, int quad_order);

// Seeds a fresh state: uniform samples per clause domain plus region corners.
CegisState initial_state(const ConditionInstance& instance, const CegisConfig& config, std::uint64_t seed);

struct CegisOutcome {
    bool feasible = false;
    CertificateMap certificates;
    Scalars scalars;
    std::optional<VerificationVerdict> verdict;
    CegisState state;
    std::vector<Json> telemetry;
};

// instance_template supplies the condition, problem, the fixed scalars
// (typically p) and, if certificates are present, their shapes; missing
// roles are filled from config.templ.
// on_iteration, when set, receives each telemetry record as it is produced.
CegisOutcome run_cegis(const ConditionInstance& instance_template, const CegisConfig& config,
                       const std::function<void(const Json&)>& on_iteration = {});

} // namespace racert

#endif
