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

#include "racert/cegis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "racert/errors.hpp"

namespace racert {

std::string TemplateSpec::name() const
{
    if (kind == CertificateKind::Polynomial) {
        return "poly" + std::to_string(degree);
    }
    std::string s = "net";
    for (std::size_t i = 0; i < hidden.size(); ++i) {
        s += (i ? "x" : "") + std::to_string(hidden[i]);
    }
    return s;
}

TemplateSpec TemplateSpec::parse(const std::string& name)
{
    TemplateSpec t;
    try {
        if (name.rfind("poly", 0) == 0) {
            t.kind = CertificateKind::Polynomial;
            std::size_t used = 0;
            t.degree = std::stoi(name.substr(4), &used);
            if (used != name.size() - 4 || t.degree < 0) {
                throw std::invalid_argument(name);
            }
            return t;
        }
        if (name.rfind("net", 0) == 0) {
            t.kind = CertificateKind::Network;
            t.hidden.clear();
            std::stringstream ss(name.substr(3));
            std::string part;
            while (std::getline(ss, part, 'x')) {
                std::size_t used = 0;
                const int w = std::stoi(part, &used);
                if (used != part.size() || w <= 0) {
                    throw std::invalid_argument(name);
                }
                t.hidden.push_back(static_cast<std::size_t>(w));
            }
            if (t.hidden.empty() || name.back() == 'x') {
                throw std::invalid_argument(name);
            }
            return t;
        }
    } catch (const std::logic_error&) {
    }
    throw ParseError("template", "expected polyD or netAxB..., got '" + name + "'");
}

Certificate TemplateSpec::instantiate(const Box& domain, Rng& rng) const
{
    const std::size_t n = domain.dim();
    if (kind == CertificateKind::Polynomial) {
        const auto basis = Certificate::monomial_basis(n, degree);
        Vec coefs(basis.size());
        for (double& c : coefs) {
            c = 0.1 * rng.normal();
        }
        return Certificate::polynomial(n, degree, coefs);
    }
    std::vector<std::size_t> layers{n};
    layers.insert(layers.end(), hidden.begin(), hidden.end());
    layers.push_back(1);
    return Certificate::random_network(layers, domain, rng);
}

void CegisConfig::validate() const
{
    if (max_iterations < 1) {
        throw ContractViolation("cegis: max_iterations must be >= 1");
    }
    if (restarts < 1) {
        throw ContractViolation("cegis: restarts must be >= 1");
    }
    if (!(resolution > 0.0) || !(min_resolution > 0.0) || min_resolution > resolution) {
        throw ContractViolation("cegis: need 0 < min_resolution <= resolution");
    }
    if (!(counterexample_weight > 0.0)) {
        throw ContractViolation("cegis: counterexample_weight must be positive");
    }
    if (learner.steps < 0 || !(learner.step_size > 0.0) || learner.quad_order < 1 || verify_quad_order < 1) {
        throw ContractViolation("cegis: invalid learner or quadrature settings");
    }
}

std::vector<Scalars> default_scalar_sweep(ConditionId id)
{
    Scalars s;
    switch (id) {
    case ConditionId::BC1: s.eps = 1e-6; break;
    case ConditionId::BC2: s.eps = 1e-2; break;
    case ConditionId::BC3:
        s.gamma = 0.9;
        s.delta = 0.01;
        s.lambda_prime = 2.5;
        break;
    case ConditionId::BC4:
    case ConditionId::BC4_SINGLETON:
    case ConditionId::BC4_RESTRICTED: s.lambda = 0.9999; break;
    default: break;
    }
    return {s};
}

Scalars scalars_for_threshold(ConditionId id, double p)
{
    Scalars s;
    for (const auto& name : required_scalars(id)) {
        if (name == "p") {
            s.p = p;
        }
        if (name == "lambda_prime") {
            if (!(p >= 0.0 && p < 1.0)) {
                throw ParameterDomainError("threshold p must lie in [0,1) for " + to_string(id));
            }
            s.lambda_prime = 1.0 / (1.0 - p);
        }
    }
    return s;
}

namespace {

template <class T>
void get_opt(const Json& j, const char* key, T& out, const std::string& path)
{
    if (!j.contains(key)) {
        return;
    }
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + "." + key, e.what());
    }
}

void merge_scalars(Scalars& into, const Scalars& from)
{
    if (!into.eps) into.eps = from.eps;
    if (!into.lambda) into.lambda = from.lambda;
    if (!into.gamma) into.gamma = from.gamma;
    if (!into.delta) into.delta = from.delta;
    if (!into.lambda_prime) into.lambda_prime = from.lambda_prime;
    if (!into.p) into.p = from.p;
    if (!into.x0) into.x0 = from.x0;
}

// Drops scalars the condition does not take so validate() accepts the mix.
Scalars restrict_scalars(ConditionId id, const Scalars& s)
{
    Scalars out;
    for (const auto& name : required_scalars(id)) {
        if (name == "eps") out.eps = s.eps;
        if (name == "lambda") out.lambda = s.lambda;
        if (name == "gamma") out.gamma = s.gamma;
        if (name == "delta") out.delta = s.delta;
        if (name == "lambda_prime") out.lambda_prime = s.lambda_prime;
        if (name == "p") out.p = s.p;
        if (name == "x0") out.x0 = s.x0;
    }
    return out;
}

} // namespace

CegisConfig cegis_config_from_json(const Json& j)
{
    if (!j.is_object()) {
        throw ParseError("config", "expected an object");
    }
    CegisConfig c;
    get_opt(j, "max_iterations", c.max_iterations, "config");
    get_opt(j, "restarts", c.restarts, "config");
    get_opt(j, "seed", c.seed, "config");
    get_opt(j, "samples_per_clause", c.samples_per_clause, "config");
    get_opt(j, "max_new_points", c.max_new_points, "config");
    get_opt(j, "counterexample_weight", c.counterexample_weight, "config");
    get_opt(j, "threads", c.threads, "config");
    if (j.contains("learner")) {
        const Json& l = j.at("learner");
        get_opt(l, "steps", c.learner.steps, "config.learner");
        get_opt(l, "step_size", c.learner.step_size, "config.learner");
        get_opt(l, "batch_size", c.learner.batch_size, "config.learner");
        get_opt(l, "tau", c.learner.tau, "config.learner");
        get_opt(l, "quad_order", c.learner.quad_order, "config.learner");
    }
    if (j.contains("verifier")) {
        const Json& v = j.at("verifier");
        get_opt(v, "resolution", c.resolution, "config.verifier");
        get_opt(v, "min_resolution", c.min_resolution, "config.verifier");
        get_opt(v, "quad_order", c.verify_quad_order, "config.verifier");
    }
    if (j.contains("template")) {
        std::string name;
        get_opt(j, "template", name, "config");
        c.templ = TemplateSpec::parse(name);
    }
    if (j.contains("scalar_sweep")) {
        const Json& s = j.at("scalar_sweep");
        if (!s.is_array()) {
            throw ParseError("config.scalar_sweep", "expected an array");
        }
        for (std::size_t i = 0; i < s.size(); ++i) {
            c.scalar_sweep.push_back(scalars_from_json(s[i], "config.scalar_sweep[" + std::to_string(i) + "]"));
        }
    }
    try {
        c.validate();
    } catch (const ContractViolation& e) {
        throw ParseError("config", e.what());
    }
    return c;
}

Json cegis_config_to_json(const CegisConfig& c)
{
    Json sweep = Json::array();
    for (const auto& s : c.scalar_sweep) {
        sweep.push_back(scalars_to_json(s));
    }
    return Json{{"max_iterations", c.max_iterations},
                {"restarts", c.restarts},
                {"seed", c.seed},
                {"samples_per_clause", c.samples_per_clause},
                {"max_new_points", c.max_new_points},
                {"counterexample_weight", c.counterexample_weight},
                {"threads", c.threads},
                {"learner",
                 {{"steps", c.learner.steps},
                  {"step_size", c.learner.step_size},
                  {"batch_size", c.learner.batch_size},
                  {"tau", c.learner.tau},
                  {"quad_order", c.learner.quad_order}}},
                {"verifier",
                 {{"resolution", c.resolution},
                  {"min_resolution", c.min_resolution},
                  {"quad_order", c.verify_quad_order}}},
                {"template", c.templ.name()},
                {"scalar_sweep", sweep}};
}

CegisState initial_state(const ConditionInstance& instance, const CegisConfig& config, std::uint64_t seed)
{
    CegisState st;
    st.scalars = instance.scalars;
    st.certificates = instance.certificates;
    const auto cls = clauses(instance);
    for (std::size_t c = 0; c < cls.size(); ++c) {
        st.labels.push_back(cls[c].label);
        Rng rng(derive_seed(seed, c));
        std::vector<Vec> pts;
        for (const Vec& corner : cls[c].domain.box_corners()) {
            if (cls[c].domain.contains(corner)) {
                pts.push_back(corner);
            }
        }
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        const auto uniform = cls[c].domain.sample(config.samples_per_clause, rng);
        pts.insert(pts.end(), uniform.begin(), uniform.end());
        if (pts.empty()) {
            // rejection sampling found nothing; confirm by grid before calling it empty
            if (region_grid(cls[c].domain, config.resolution).empty()) {
                st.empty_clauses.push_back(cls[c].label);
            }
        }
        st.margins.emplace_back(pts.size(), 0.0);
        st.weights.emplace_back(pts.size(), 1.0);
        st.samples.push_back(std::move(pts));
    }
    return st;
}

namespace {

struct RoleSlot {
    Role role;
    std::size_t offset;
    std::size_t count;
};

// Per-clause training data with successors f(x, theta_k) precomputed.
struct ClauseData {
    const ResidualClause* clause;
    const std::vector<Vec>* points;
    const std::vector<double>* margins;
    const std::vector<double>* weights;
    Vec successors; // points x nodes x n
};

class Objective {
public:
    Objective(const ConditionInstance& inst, const CegisState& st, int quad_order)
        : cls_(clauses(inst)), system_(inst.problem->system), rule_(system_.quadrature(quad_order))
    {
        for (const auto& [role, cert] : st.certificates) {
            if (cert.kind() == CertificateKind::Affine) {
                throw NoTrainableParameters("learner: role " + to_string(role) + " is not trainable");
            }
            slots_.push_back({role, total_, cert.parameter_count()});
            total_ += cert.parameter_count();
        }
        const std::size_t n = system_.state_dim();
        const std::size_t nodes = rule_->size();
        for (std::size_t c = 0; c < cls_.size(); ++c) {
            ClauseData d{&cls_[c], &st.samples[c], &st.margins[c],
                         c < st.weights.size() ? &st.weights[c] : nullptr, {}};
            if (cls_[c].has_expectation()) {
                d.successors.resize(st.samples[c].size() * nodes * n);
                for (std::size_t s = 0; s < st.samples[c].size(); ++s) {
                    for (std::size_t k = 0; k < nodes; ++k) {
                        system_.step(st.samples[c][s].data(), rule_->node(k),
                                     &d.successors[(s * nodes + k) * n]);
                    }
                }
            }
            data_.push_back(std::move(d));
        }
    }

    std::size_t size() const { return total_; }

    Vec pack(const CertificateMap& certs) const
    {
        Vec p(total_);
        for (const auto& s : slots_) {
            const Vec& v = certs.at(s.role).parameters();
            std::copy(v.begin(), v.end(), p.begin() + static_cast<std::ptrdiff_t>(s.offset));
        }
        return p;
    }

    CertificateMap unpack(const CertificateMap& like, const Vec& p) const
    {
        CertificateMap out;
        for (const auto& s : slots_) {
            out.emplace(s.role, like.at(s.role).with_parameters(
                                    Vec(p.begin() + static_cast<std::ptrdiff_t>(s.offset),
                                        p.begin() + static_cast<std::ptrdiff_t>(s.offset + s.count))));
        }
        return out;
    }

    void project(const CertificateMap& like, Vec& p) const
    {
        for (const auto& s : slots_) {
            like.at(s.role).project(std::span<double>(p.data() + s.offset, s.count));
        }
    }

    // Loss; when grad is non-null it is overwritten with the gradient.
    double eval(const CertificateMap& certs, double tau, Vec* grad) const
    {
        if (grad) {
            grad->assign(total_, 0.0);
        }
        const std::size_t n = system_.state_dim();
        const std::size_t nodes = rule_->size();
        double loss = 0.0;
        for (const auto& d : data_) {
            const auto& pts = *d.points;
            if (pts.empty()) {
                continue;
            }
            const double w0 = 1.0 / static_cast<double>(pts.size());
            const ResidualClause& cl = *d.clause;
            for (std::size_t s = 0; s < pts.size(); ++s) {
                const double w = d.weights && s < d.weights->size() ? w0 * (*d.weights)[s] : w0;
                if (cl.guard && !cl.guard->admits(certs.at(cl.guard->role).evaluate(pts[s]))) {
                    continue;
                }
                double r = cl.constant;
                for (const Term& t : cl.terms) {
                    const Certificate& c = certs.at(t.role);
                    if (!t.expectation) {
                        r += t.coef * c.evaluate(pts[s]);
                        continue;
                    }
                    double e = 0.0;
                    for (std::size_t k = 0; k < nodes; ++k) {
                        e += rule_->weights[k] * c.evaluate(std::span<const double>(&d.successors[(s * nodes + k) * n], n));
                    }
                    r += t.coef * e;
                }
                const double target = std::max(tau, (*d.margins)[s]);
                if (r + target <= 0.0) {
                    continue;
                }
                loss += w * (r + target);
                if (!grad) {
                    continue;
                }
                for (const Term& t : cl.terms) {
                    const RoleSlot& slot = slot_of(t.role);
                    const Certificate& c = certs.at(t.role);
                    std::span<double> g(grad->data() + slot.offset, slot.count);
                    if (!t.expectation) {
                        c.accumulate_gradient(pts[s], w * t.coef, g);
                        continue;
                    }
                    for (std::size_t k = 0; k < nodes; ++k) {
                        c.accumulate_gradient(std::span<const double>(&d.successors[(s * nodes + k) * n], n),
                                              w * t.coef * rule_->weights[k], g);
                    }
                }
            }
        }
        return loss;
    }

private:
    const RoleSlot& slot_of(Role r) const
    {
        for (const auto& s : slots_) {
            if (s.role == r) {
                return s;
            }
        }
        throw ContractViolation("learner: missing certificate for role " + to_string(r));
    }

    std::vector<ResidualClause> cls_;
    const SystemModel& system_;
    std::shared_ptr<const QuadratureRule> rule_;
    std::vector<RoleSlot> slots_;
    std::size_t total_ = 0;
    std::vector<ClauseData> data_;
};

double auto_tau(const CegisState& st, const ConditionInstance& inst, const CegisConfig& cfg)
{
    if (cfg.learner.tau >= 0.0) {
        return cfg.learner.tau;
    }
    // L r / 2 at the first resolution, using the certificates' bound on the working box
    const Box hat = inst.problem->universe().bounding_box();
    double L = 0.0;
    for (const auto& [role, c] : st.certificates) {
        L = std::max(L, c.lipschitz_bound(hat));
    }
    return std::clamp(0.5 * cfg.resolution * L, 1e-3, 0.05);
}

} // namespace

double hinge_loss(const ConditionInstance& instance, const CegisState& state, double tau, int quad_order)
{
    const Objective obj(instance, state, quad_order);
    return obj.eval(state.certificates, tau, nullptr);
}

LearnerReport learner_step(const ConditionInstance& instance, CegisState& state, const CegisConfig& config)
{
    const Objective obj(instance, state, config.learner.quad_order);
    LearnerReport rep;
    rep.tau = auto_tau(state, instance, config);
    if (obj.size() == 0) {
        throw NoTrainableParameters("learner: no trainable parameters");
    }
    Vec theta = obj.pack(state.certificates);
    Vec grad;
    double loss = obj.eval(state.certificates, rep.tau, &grad);
    rep.initial_loss = loss;
    Vec m(theta.size(), 0.0);
    Vec v(theta.size(), 0.0);
    const double b1 = 0.9;
    const double b2 = 0.999;
    double lr = config.learner.step_size;
    CertificateMap current = state.certificates;
    int t = 0;
    for (int step = 0; step < config.learner.steps && loss > 0.0; ++step) {
        double gnorm = 0.0;
        for (double g : grad) {
            gnorm += g * g;
        }
        // quadrature weights sum to 1 only up to rounding
        if (gnorm <= 1e-24) {
            rep.stalled = true;
            break;
        }
        ++t;
        const double c1 = 1.0 - std::pow(b1, t);
        const double c2 = 1.0 - std::pow(b2, t);
        for (std::size_t i = 0; i < theta.size(); ++i) {
            m[i] = b1 * m[i] + (1.0 - b1) * grad[i];
            v[i] = b2 * v[i] + (1.0 - b2) * grad[i] * grad[i];
        }
        // backtrack along the Adam direction until the loss does not increase
        bool accepted = false;
        for (int tries = 0; tries < 8 && !accepted; ++tries) {
            Vec trial = theta;
            for (std::size_t i = 0; i < theta.size(); ++i) {
                trial[i] -= lr * (m[i] / c1) / (std::sqrt(v[i] / c2) + 1e-8);
            }
            obj.project(current, trial);
            CertificateMap cand = obj.unpack(current, trial);
            Vec g2;
            const double l2 = obj.eval(cand, rep.tau, &g2);
            if (l2 <= loss) {
                theta = std::move(trial);
                current = std::move(cand);
                grad = std::move(g2);
                loss = l2;
                accepted = true;
                lr = std::min(config.learner.step_size, lr * 1.1);
            } else {
                lr *= 0.5;
            }
        }
        if (!accepted) {
            // the Adam direction need not descend at a hinge kink; try the
            // plain gradient before giving up on this scale
            const double gn = std::sqrt(gnorm);
            double eta = config.learner.step_size;
            for (int tries = 0; tries < 12 && !accepted; ++tries, eta *= 0.5) {
                Vec trial = theta;
                for (std::size_t i = 0; i < theta.size(); ++i) {
                    trial[i] -= eta * grad[i] / gn;
                }
                obj.project(current, trial);
                CertificateMap cand = obj.unpack(current, trial);
                Vec g2;
                const double l2 = obj.eval(cand, rep.tau, &g2);
                if (l2 < loss) {
                    theta = std::move(trial);
                    current = std::move(cand);
                    grad = std::move(g2);
                    loss = l2;
                    accepted = true;
                }
            }
        }
        rep.steps = step + 1;
        rep.trace.push_back(loss);
        if (!accepted) {
            // no descent at this scale; restart the moments
            std::fill(m.begin(), m.end(), 0.0);
            std::fill(v.begin(), v.end(), 0.0);
            t = 0;
            if (lr < 1e-6 * config.learner.step_size) {
                break;
            }
        }
    }
    rep.final_loss = loss;
    state.certificates = std::move(current);
    state.loss_history.push_back(loss);
    state.stalled = rep.stalled;
    return rep;
}

namespace {

ConditionInstance with_certificates(const ConditionInstance& tmpl, const CertificateMap& certs, const Scalars& s)
{
    ConditionInstance inst = tmpl;
    inst.certificates = certs;
    inst.scalars = s;
    return inst;
}

// Appends counterexamples (worst first) and inconclusive cell centers,
// each capped per clause.
std::size_t absorb(CegisState& st, const ConditionInstance& inst, const VerificationVerdict& v, const CegisConfig& cfg,
                   std::size_t& hard_added)
{
    const auto cls = clauses(inst);
    std::size_t added = 0;
    hard_added = 0;
    for (std::size_t c = 0; c < v.clauses.size(); ++c) {
        const ClauseReport& rep = v.clauses[c];
        const std::size_t take = std::min(rep.counterexamples.size(), cfg.max_new_points);
        for (std::size_t i = 0; i < take; ++i) {
            const auto& e = rep.counterexamples[i];
            const auto r = residual_at(cls[c], inst, e.x, v.quad_order);
            if (!r || !(*r > 0.0)) {
                throw Error("cegis: counterexample for " + rep.label + " does not reproduce");
            }
            st.samples[c].push_back(e.x);
            st.margins[c].push_back(0.0);
            st.weights[c].push_back(cfg.counterexample_weight);
            ++added;
        }
        const std::size_t room = cfg.max_new_points - take;
        const std::size_t open = rep.inconclusive.size();
        const std::size_t h = std::min(room, open);
        for (std::size_t i = 0; i < h; ++i) {
            // evenly spaced over the grid-ordered list
            const std::size_t k = i * open / h;
            st.samples[c].push_back(rep.inconclusive[k].center);
            // aim past the cell's Lipschitz slack so the margin test can close;
            // only meaningful once refinement has bottomed out
            const bool final = v.status == VerifyStatus::Inconclusive;
            st.margins[c].push_back(final ? std::min(1.25 * rep.inconclusive_slack[k], 1.0) : 0.0);
            st.weights[c].push_back(1.0);
            ++hard_added;
        }
    }
    return added;
}

} // namespace

CegisOutcome run_cegis(const ConditionInstance& instance_template, const CegisConfig& config,
                       const std::function<void(const Json&)>& on_iteration)
{
    config.validate();
    const auto& pb = *instance_template.problem;
    const Box hat = pb.universe().bounding_box();
    std::vector<Scalars> sweep = config.scalar_sweep;
    if (sweep.empty()) {
        sweep = default_scalar_sweep(instance_template.id);
    }
    VerifyOptions vopt;
    vopt.quad_order = config.verify_quad_order;
    vopt.threads = config.threads;
    vopt.seed = config.seed;

    CegisOutcome out;
    for (std::size_t si = 0; si < sweep.size(); ++si) {
        Scalars scalars = instance_template.scalars;
        merge_scalars(scalars, sweep[si]);
        scalars = restrict_scalars(instance_template.id, scalars);
        for (int restart = 0; restart < config.restarts; ++restart) {
            const std::uint64_t seed = derive_seed(config.seed, si * 1000 + static_cast<std::uint64_t>(restart));
            Rng rng(seed);
            CertificateMap certs;
            const bool warm = restart == 0 && !instance_template.certificates.empty();
            for (Role role : required_roles(instance_template.id)) {
                const auto it = instance_template.certificates.find(role);
                if (warm && it != instance_template.certificates.end()) {
                    certs.emplace(role, it->second);
                } else {
                    certs.emplace(role, config.templ.instantiate(hat, rng));
                }
            }
            ConditionInstance inst = with_certificates(instance_template, certs, scalars);
            inst.validate();
            CegisState st = initial_state(inst, config, derive_seed(seed, 1));
            st.restart = restart;
            st.certificates = certs;
            for (int it = 1; it <= config.max_iterations; ++it) {
                st.iteration = it;
                const auto t0 = std::chrono::steady_clock::now();
                LearnerReport lr;
                if (!(warm && it == 1)) {
                    lr = learner_step(inst, st, config);
                    inst.certificates = st.certificates;
                }
                const auto verdict = verify_adaptive(inst, config.resolution, config.min_resolution, vopt);
                st.last_verdict = verdict;
                std::size_t hard = 0;
                std::size_t cex = 0;
                if (verdict.status != VerifyStatus::Certified) {
                    cex = absorb(st, inst, verdict, config, hard);
                }
                std::size_t total = 0;
                for (const auto& s : st.samples) {
                    total += s.size();
                }
                out.telemetry.push_back(Json{{"scalars", scalars_to_json(scalars)},
                                             {"restart", restart},
                                             {"iteration", it},
                                             {"loss_initial", lr.initial_loss},
                                             {"loss", lr.final_loss},
                                             {"tau", lr.tau},
                                             {"learner_steps", lr.steps},
                                             {"stalled", lr.stalled},
                                             {"status", to_string(verdict.status)},
                                             {"resolution", verdict.resolution},
                                             {"counterexamples", cex},
                                             {"hard_points", hard},
                                             {"samples", total},
                                             {"wall_time", std::chrono::duration<double>(
                                                               std::chrono::steady_clock::now() - t0)
                                                               .count()}});
                if (on_iteration) {
                    on_iteration(out.telemetry.back());
                }
                if (verdict.status == VerifyStatus::Certified) {
                    out.feasible = true;
                    out.certificates = st.certificates;
                    out.scalars = scalars;
                    out.verdict = verdict;
                    out.state = std::move(st);
                    return out;
                }
            }
            out.state = std::move(st);
        }
    }
    return out;
}

} // namespace racert
