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

#include "racert/certificate.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "racert/errors.hpp"

namespace racert {

std::string to_string(CertificateKind kind)
{
    switch (kind) {
    case CertificateKind::Polynomial: return "polynomial";
    case CertificateKind::Network: return "network";
    case CertificateKind::Affine: return "affine";
    }
    return "?";
}

struct Certificate::Impl {
    CertificateKind kind = CertificateKind::Polynomial;
    std::size_t dim = 0;
    Vec params;

    // polynomial
    std::vector<std::vector<int>> exps;
    int degree = 0;

    // network
    std::vector<std::size_t> layers;
    std::vector<std::size_t> w_off; // start of each layer's weights in params
    std::vector<std::size_t> b_off;
    Vec offset;
    Vec scale;
    double norm_product = 0.0;

    // affine
    double a = 1.0;
    double b = 0.0;
    std::shared_ptr<const Certificate> inner;
};

namespace {

constexpr std::size_t kStackUnits = 512;

double softplus(double z)
{
    return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z)
{
    if (z >= 0.0) {
        return 1.0 / (1.0 + std::exp(-z));
    }
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// Monotone maps over intervals, padded for the ~1 ulp error of exp/log1p.
Interval softplus(Interval z)
{
    Interval r = widen(detail::down(softplus(z.lo)), detail::up(softplus(z.hi)));
    r.lo = std::max(r.lo, 0.0);
    return r;
}

Interval sigmoid(Interval z)
{
    Interval r = widen(detail::down(sigmoid(z.lo)), detail::up(sigmoid(z.hi)));
    r.lo = std::max(r.lo, 0.0);
    r.hi = std::min(r.hi, 1.0);
    return r;
}

double norm_product(const Certificate::Impl& m)
{
    double prod = 1.0;
    for (std::size_t l = 0; l + 1 < m.layers.size(); ++l) {
        const std::size_t in = m.layers[l];
        const std::size_t out = m.layers[l + 1];
        double best = 0.0;
        for (std::size_t r = 0; r < out; ++r) {
            double s = 0.0;
            for (std::size_t c = 0; c < in; ++c) {
                s += std::abs(m.params[m.w_off[l] + r * in + c]) * (l == 0 ? m.scale[c] : 1.0);
            }
            best = std::max(best, s);
        }
        prod *= best;
    }
    // slack for rounding in the sums and products above
    return prod * (1.0 + 1e-12);
}

void layout_network(Certificate::Impl& m)
{
    m.w_off.clear();
    m.b_off.clear();
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < m.layers.size(); ++l) {
        m.w_off.push_back(off);
        off += m.layers[l] * m.layers[l + 1];
        m.b_off.push_back(off);
        off += m.layers[l + 1];
    }
}

std::size_t network_parameter_count(const std::vector<std::size_t>& layers)
{
    std::size_t c = 0;
    for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
        c += layers[l] * layers[l + 1] + layers[l + 1];
    }
    return c;
}

std::size_t total_units(const std::vector<std::size_t>& layers)
{
    std::size_t s = 0;
    for (std::size_t w : layers) {
        s += w;
    }
    return s;
}

// Forward pass storing pre-activations z and activations a for every layer
// (layer 0 holds the normalized input in a). Returns the output.
double net_forward(const Certificate::Impl& m, std::span<const double> x, double* z, double* a)
{
    const double* p = m.params.data();
    std::size_t in_pos = 0;
    for (std::size_t i = 0; i < m.dim; ++i) {
        a[i] = (x[i] - m.offset[i]) * m.scale[i];
        z[i] = a[i];
    }
    const std::size_t last = m.layers.size() - 2;
    for (std::size_t l = 0; l + 1 < m.layers.size(); ++l) {
        const std::size_t in = m.layers[l];
        const std::size_t out = m.layers[l + 1];
        const std::size_t out_pos = in_pos + in;
        const double* w = p + m.w_off[l];
        const double* b = p + m.b_off[l];
        for (std::size_t r = 0; r < out; ++r) {
            double s = b[r];
            const double* row = w + r * in;
            for (std::size_t c = 0; c < in; ++c) {
                s += row[c] * a[in_pos + c];
            }
            z[out_pos + r] = s;
            a[out_pos + r] = l == last ? s : softplus(s);
        }
        in_pos = out_pos;
    }
    return a[in_pos];
}

double net_accumulate(const Certificate::Impl& m, std::span<const double> x, double weight, double* grad)
{
    const std::size_t units = total_units(m.layers);
    std::array<double, kStackUnits * 3> stack;
    std::vector<double> heap;
    double* buf = stack.data();
    if (units > kStackUnits) {
        heap.resize(units * 3);
        buf = heap.data();
    }
    double* z = buf;
    double* a = buf + units;
    double* delta = buf + 2 * units;
    const double value = net_forward(m, x, z, a);
    if (weight == 0.0) {
        return value;
    }
    // positions of each layer in the unit arrays
    std::vector<std::size_t> pos(m.layers.size());
    for (std::size_t l = 1; l < m.layers.size(); ++l) {
        pos[l] = pos[l - 1] + m.layers[l - 1];
    }
    const std::size_t L = m.layers.size() - 1;
    delta[pos[L]] = weight;
    for (std::size_t l = L; l >= 1; --l) {
        const std::size_t in = m.layers[l - 1];
        const std::size_t out = m.layers[l];
        const double* w = m.params.data() + m.w_off[l - 1];
        double* gw = grad + m.w_off[l - 1];
        double* gb = grad + m.b_off[l - 1];
        for (std::size_t r = 0; r < out; ++r) {
            const double d = delta[pos[l] + r];
            gb[r] += d;
            for (std::size_t c = 0; c < in; ++c) {
                gw[r * in + c] += d * a[pos[l - 1] + c];
            }
        }
        if (l == 1) {
            break;
        }
        for (std::size_t c = 0; c < in; ++c) {
            double s = 0.0;
            for (std::size_t r = 0; r < out; ++r) {
                s += w[r * in + c] * delta[pos[l] + r];
            }
            delta[pos[l - 1] + c] = s * sigmoid(z[pos[l - 1] + c]);
        }
    }
    return value;
}

Interval dot_interval(const double* w, std::span<const Interval> v, double bias)
{
    Interval s(bias);
    for (std::size_t c = 0; c < v.size(); ++c) {
        s = s + w[c] * v[c];
    }
    return s;
}

// Interval forward pass; fills per-layer pre-activation enclosures.
std::vector<std::vector<Interval>> net_intervals(const Certificate::Impl& m, const Box& box)
{
    std::vector<std::vector<Interval>> zs;
    std::vector<Interval> a(m.dim);
    for (std::size_t i = 0; i < m.dim; ++i) {
        a[i] = (Interval(box.lo[i], box.hi[i]) - Interval(m.offset[i])) * Interval(m.scale[i]);
    }
    zs.push_back(a);
    for (std::size_t l = 0; l + 1 < m.layers.size(); ++l) {
        const std::size_t in = m.layers[l];
        const std::size_t out = m.layers[l + 1];
        std::vector<Interval> z(out);
        for (std::size_t r = 0; r < out; ++r) {
            z[r] = dot_interval(m.params.data() + m.w_off[l] + r * in, a, m.params[m.b_off[l] + r]);
        }
        zs.push_back(z);
        a.resize(out);
        for (std::size_t r = 0; r < out; ++r) {
            a[r] = l + 2 == m.layers.size() ? z[r] : softplus(z[r]);
        }
    }
    return zs;
}

Interval monomial_interval(const std::vector<int>& e, const std::vector<Interval>& xs)
{
    Interval v(1.0);
    bool first = true;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) {
            continue;
        }
        const Interval t = pow(xs[i], e[i]);
        v = first ? t : v * t;
        first = false;
    }
    return v;
}

// Sum of c_k * I_k where constant monomials are accumulated exactly first.
class IntervalSum {
public:
    void add_const(double c) { constant_ += c; has_const_ = true; }
    void add(double c, Interval v)
    {
        const Interval t = c * v;
        acc_ = any_ ? acc_ + t : t;
        any_ = true;
    }
    Interval result() const
    {
        if (!any_) {
            return Interval(constant_);
        }
        return has_const_ ? acc_ + Interval(constant_) : acc_;
    }

private:
    double constant_ = 0.0;
    bool has_const_ = false;
    Interval acc_;
    bool any_ = false;
};

const Certificate::Impl& require(const std::shared_ptr<const Certificate::Impl>& p, CertificateKind kind,
                                 const char* what)
{
    if (p->kind != kind) {
        throw ContractViolation(std::string(what) + " requires a " + to_string(kind) + " certificate");
    }
    return *p;
}

} // namespace

std::vector<std::vector<int>> Certificate::monomial_basis(std::size_t dim, int degree)
{
    std::vector<std::vector<int>> out;
    std::vector<int> e(dim, 0);
    for (int d = 0; d <= degree; ++d) {
        // compositions of d into dim parts, x1 power descending
        const auto rec = [&](auto&& self, std::size_t i, int left) -> void {
            if (i + 1 == dim) {
                e[i] = left;
                out.push_back(e);
                return;
            }
            for (int k = left; k >= 0; --k) {
                e[i] = k;
                self(self, i + 1, left - k);
            }
        };
        rec(rec, 0, d);
    }
    return out;
}

Certificate Certificate::polynomial(std::size_t dim, int degree, Vec coefficients)
{
    if (degree < 0) {
        throw ContractViolation("polynomial degree must be non-negative");
    }
    if (dim == 0) {
        throw ContractViolation("polynomial dimension must be positive");
    }
    return polynomial(monomial_basis(dim, degree), std::move(coefficients));
}

Certificate Certificate::polynomial(std::vector<std::vector<int>> exponents, Vec coefficients)
{
    if (exponents.empty() || exponents.size() != coefficients.size()) {
        throw ContractViolation("polynomial needs one coefficient per monomial");
    }
    auto m = std::make_shared<Impl>();
    m->kind = CertificateKind::Polynomial;
    m->dim = exponents[0].size();
    for (const auto& e : exponents) {
        if (e.size() != m->dim) {
            throw ContractViolation("monomial exponent vectors differ in length");
        }
        int d = 0;
        for (int k : e) {
            if (k < 0) {
                throw ContractViolation("negative monomial exponent");
            }
            d += k;
        }
        m->degree = std::max(m->degree, d);
    }
    for (double c : coefficients) {
        if (!(std::abs(c) <= kCoefficientBound)) {
            throw ParameterDomainError("polynomial coefficient outside [-100, 100]");
        }
    }
    m->exps = std::move(exponents);
    m->params = std::move(coefficients);
    return Certificate(std::move(m));
}

Certificate Certificate::network(std::vector<std::size_t> layers, Vec parameters, Vec input_offset,
                                 Vec input_scale)
{
    if (layers.size() < 2 || layers.back() != 1 || layers[0] == 0) {
        throw ContractViolation("network layers must be {n, ..., 1}");
    }
    for (std::size_t w : layers) {
        if (w == 0) {
            throw ContractViolation("network layer widths must be positive");
        }
    }
    if (parameters.size() != network_parameter_count(layers)) {
        throw ContractViolation("network expects " + std::to_string(network_parameter_count(layers)) +
                                " parameters, got " + std::to_string(parameters.size()));
    }
    auto m = std::make_shared<Impl>();
    m->kind = CertificateKind::Network;
    m->dim = layers[0];
    m->offset = input_offset.empty() ? Vec(m->dim, 0.0) : std::move(input_offset);
    m->scale = input_scale.empty() ? Vec(m->dim, 1.0) : std::move(input_scale);
    if (m->offset.size() != m->dim || m->scale.size() != m->dim) {
        throw ContractViolation("network input normalization has wrong dimension");
    }
    for (double s : m->scale) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw ContractViolation("network input scale must be positive");
        }
    }
    for (double v : parameters) {
        if (!std::isfinite(v)) {
            throw ContractViolation("network parameter is not finite");
        }
    }
    m->layers = std::move(layers);
    m->params = std::move(parameters);
    layout_network(*m);
    m->norm_product = norm_product(*m);
    return Certificate(std::move(m));
}

Certificate Certificate::random_network(std::vector<std::size_t> layers, const Box& domain, Rng& rng)
{
    if (layers.empty() || domain.dim() != layers[0]) {
        throw ContractViolation("random_network: domain dimension must match the input layer");
    }
    Vec params(network_parameter_count(layers), 0.0);
    std::size_t off = 0;
    for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
        const std::size_t in = layers[l];
        const std::size_t out = layers[l + 1];
        const double sd = std::sqrt((l + 2 == layers.size() ? 1.0 : 2.0) / static_cast<double>(in));
        for (std::size_t k = 0; k < in * out; ++k) {
            params[off + k] = sd * rng.normal();
        }
        off += in * out + out;
    }
    Vec offset(domain.dim());
    Vec scale(domain.dim());
    for (std::size_t i = 0; i < domain.dim(); ++i) {
        offset[i] = 0.5 * (domain.lo[i] + domain.hi[i]);
        const double w = domain.hi[i] - domain.lo[i];
        scale[i] = w > 0.0 ? 2.0 / w : 1.0;
    }
    return network(std::move(layers), std::move(params), std::move(offset), std::move(scale));
}

Certificate Certificate::affine(double a, double b, Certificate inner)
{
    if (!std::isfinite(a) || !std::isfinite(b)) {
        throw ContractViolation("affine coefficients must be finite");
    }
    auto m = std::make_shared<Impl>();
    m->kind = CertificateKind::Affine;
    m->dim = inner.dim();
    m->a = a;
    m->b = b;
    m->inner = std::make_shared<const Certificate>(std::move(inner));
    return Certificate(std::move(m));
}

CertificateKind Certificate::kind() const { return impl_->kind; }
std::size_t Certificate::dim() const { return impl_->dim; }

std::size_t Certificate::parameter_count() const
{
    return impl_->kind == CertificateKind::Affine ? 0 : impl_->params.size();
}

const Vec& Certificate::parameters() const { return impl_->params; }

double Certificate::evaluate(std::span<const double> x) const
{
    const Impl& m = *impl_;
    switch (m.kind) {
    case CertificateKind::Polynomial: {
        std::array<double, 64> pw{};
        const int stride = m.degree + 1;
        std::vector<double> heap;
        double* p = pw.data();
        if (m.dim * static_cast<std::size_t>(stride) > pw.size()) {
            heap.resize(m.dim * static_cast<std::size_t>(stride));
            p = heap.data();
        }
        for (std::size_t i = 0; i < m.dim; ++i) {
            p[i * stride] = 1.0;
            for (int k = 1; k <= m.degree; ++k) {
                p[i * stride + k] = p[i * stride + k - 1] * x[i];
            }
        }
        double s = 0.0;
        for (std::size_t k = 0; k < m.exps.size(); ++k) {
            double t = m.params[k];
            for (std::size_t i = 0; i < m.dim; ++i) {
                t *= p[i * stride + m.exps[k][i]];
            }
            s += t;
        }
        return s;
    }
    case CertificateKind::Network: {
        const std::size_t units = total_units(m.layers);
        std::array<double, kStackUnits * 2> stack;
        std::vector<double> heap;
        double* buf = stack.data();
        if (units > kStackUnits) {
            heap.resize(units * 2);
            buf = heap.data();
        }
        return net_forward(m, x, buf, buf + units);
    }
    case CertificateKind::Affine: return m.a * m.inner->evaluate(x) + m.b;
    }
    return 0.0;
}

double Certificate::accumulate_gradient(std::span<const double> x, double weight, std::span<double> grad) const
{
    const Impl& m = *impl_;
    switch (m.kind) {
    case CertificateKind::Polynomial: {
        double s = 0.0;
        for (std::size_t k = 0; k < m.exps.size(); ++k) {
            double t = 1.0;
            for (std::size_t i = 0; i < m.dim; ++i) {
                for (int e = 0; e < m.exps[k][i]; ++e) {
                    t *= x[i];
                }
            }
            grad[k] += weight * t;
            s += m.params[k] * t;
        }
        return s;
    }
    case CertificateKind::Network: return net_accumulate(m, x, weight, grad.data());
    case CertificateKind::Affine:
        throw NoTrainableParameters("affine certificate wraps a frozen inner certificate");
    }
    return 0.0;
}

Vec Certificate::parameter_gradient(std::span<const double> x) const
{
    if (impl_->kind == CertificateKind::Affine) {
        throw NoTrainableParameters("affine certificate wraps a frozen inner certificate");
    }
    Vec g(parameter_count(), 0.0);
    accumulate_gradient(x, 1.0, g);
    return g;
}

Certificate Certificate::with_parameters(Vec params) const
{
    const Impl& m = *impl_;
    switch (m.kind) {
    case CertificateKind::Polynomial: return polynomial(m.exps, std::move(params));
    case CertificateKind::Network: return network(m.layers, std::move(params), m.offset, m.scale);
    case CertificateKind::Affine:
        throw NoTrainableParameters("affine certificate wraps a frozen inner certificate");
    }
    return *this;
}

void Certificate::project(std::span<double> params) const
{
    if (impl_->kind == CertificateKind::Polynomial) {
        for (double& c : params) {
            c = std::clamp(c, -kCoefficientBound, kCoefficientBound);
        }
    }
}

Interval Certificate::bound(const Box& box) const
{
    const Impl& m = *impl_;
    switch (m.kind) {
    case CertificateKind::Polynomial: {
        const auto xs = box.intervals();
        IntervalSum sum;
        for (std::size_t k = 0; k < m.exps.size(); ++k) {
            const bool is_const = std::all_of(m.exps[k].begin(), m.exps[k].end(), [](int e) { return e == 0; });
            if (is_const) {
                sum.add_const(m.params[k]);
            } else if (m.params[k] != 0.0) {
                sum.add(m.params[k], monomial_interval(m.exps[k], xs));
            }
        }
        return sum.result();
    }
    case CertificateKind::Network: {
        const auto zs = net_intervals(m, box);
        return zs.back()[0];
    }
    case CertificateKind::Affine: {
        const Interval v = m.inner->bound(box);
        return Interval(m.a) * v + Interval(m.b);
    }
    }
    return {};
}

Vec Certificate::gradient_bound(const Box& box) const
{
    const Impl& m = *impl_;
    Vec g(m.dim, 0.0);
    switch (m.kind) {
    case CertificateKind::Polynomial: {
        const auto xs = box.intervals();
        for (std::size_t j = 0; j < m.dim; ++j) {
            IntervalSum sum;
            for (std::size_t k = 0; k < m.exps.size(); ++k) {
                const int ej = m.exps[k][j];
                if (ej == 0 || m.params[k] == 0.0) {
                    continue;
                }
                std::vector<int> e = m.exps[k];
                e[j] -= 1;
                const double c = m.params[k] * ej;
                if (std::all_of(e.begin(), e.end(), [](int v) { return v == 0; })) {
                    sum.add_const(c);
                } else {
                    sum.add(c, monomial_interval(e, xs));
                }
            }
            g[j] = sum.result().mag();
        }
        return g;
    }
    case CertificateKind::Network: {
        const auto zs = net_intervals(m, box);
        for (std::size_t j = 0; j < m.dim; ++j) {
            // forward-mode interval derivative along input axis j
            std::vector<Interval> d(m.dim, Interval(0.0));
            d[j] = Interval(m.scale[j]);
            for (std::size_t l = 0; l + 1 < m.layers.size(); ++l) {
                const std::size_t in = m.layers[l];
                const std::size_t out = m.layers[l + 1];
                std::vector<Interval> nd(out);
                for (std::size_t r = 0; r < out; ++r) {
                    Interval s = dot_interval(m.params.data() + m.w_off[l] + r * in, d, 0.0);
                    if (l + 2 < m.layers.size()) {
                        s = sigmoid(zs[l + 1][r]) * s;
                    }
                    nd[r] = s;
                }
                d = std::move(nd);
            }
            g[j] = std::min(d[0].mag(), m.norm_product);
        }
        return g;
    }
    case CertificateKind::Affine: {
        g = m.inner->gradient_bound(box);
        for (double& v : g) {
            v = detail::up(std::abs(m.a) * v);
        }
        return g;
    }
    }
    return g;
}

double Certificate::lipschitz_bound(const Box& box) const
{
    const Impl& m = *impl_;
    if (m.kind == CertificateKind::Affine) {
        return std::abs(m.a) * m.inner->lipschitz_bound(box);
    }
    const Vec g = gradient_bound(box);
    double s = 0.0;
    for (double v : g) {
        s += v;
    }
    if (m.kind == CertificateKind::Network) {
        s = std::min(detail::up(s), m.norm_product);
    } else if (std::count_if(g.begin(), g.end(), [](double v) { return v != 0.0; }) > 1) {
        s = detail::up(s);
    }
    return s;
}

const std::vector<std::vector<int>>& Certificate::exponents() const
{
    return require(impl_, CertificateKind::Polynomial, "exponents").exps;
}

int Certificate::degree() const
{
    return require(impl_, CertificateKind::Polynomial, "degree").degree;
}

const std::vector<std::size_t>& Certificate::layers() const
{
    return require(impl_, CertificateKind::Network, "layers").layers;
}

const Vec& Certificate::input_offset() const
{
    return require(impl_, CertificateKind::Network, "input_offset").offset;
}

const Vec& Certificate::input_scale() const
{
    return require(impl_, CertificateKind::Network, "input_scale").scale;
}

double Certificate::affine_a() const
{
    return require(impl_, CertificateKind::Affine, "affine_a").a;
}

double Certificate::affine_b() const
{
    return require(impl_, CertificateKind::Affine, "affine_b").b;
}

const Certificate& Certificate::inner() const
{
    return *require(impl_, CertificateKind::Affine, "inner").inner;
}

} // namespace racert
