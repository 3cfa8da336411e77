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

#include "racert/region.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "racert/errors.hpp"

namespace racert {

struct Region::Data {
    Kind kind = Kind::Box;
    std::size_t dim = 0;
    Box box;                    // Box kind parameters
    Vec center;                 // Ball / Ellipsoid
    double radius = 0.0;        // Ball
    std::vector<Vec> q;         // Ellipsoid
    std::vector<Region> parts;  // Union / Intersection / Difference(base, minus)
    Box bbox;
};

namespace {

void require_dim(std::size_t a, std::size_t b, const char* what)
{
    if (a != b) {
        throw ContractViolation(std::string(what) + ": dimension mismatch");
    }
}

Interval quadratic_form(const std::vector<Vec>& q, const Vec& c, const Box& cell)
{
    const std::size_t n = c.size();
    std::vector<Interval> d(n);
    for (std::size_t i = 0; i < n; ++i) {
        d[i] = Interval(cell.lo[i], cell.hi[i]) - Interval(c[i]);
    }
    Interval s(0.0);
    for (std::size_t i = 0; i < n; ++i) {
        s = s + Interval(q[i][i]) * pow(d[i], 2);
        for (std::size_t j = i + 1; j < n; ++j) {
            if (q[i][j] != 0.0) {
                s = s + Interval(2.0 * q[i][j]) * (d[i] * d[j]);
            }
        }
    }
    return s;
}

} // namespace

Region Region::box(Vec lo, Vec hi)
{
    require_dim(lo.size(), hi.size(), "Region::box");
    if (lo.empty()) {
        throw ContractViolation("Region::box: empty dimension");
    }
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (!(lo[i] <= hi[i])) {
            throw ContractViolation("Region::box: lo must not exceed hi");
        }
    }
    auto d = std::make_shared<Data>();
    d->kind = Kind::Box;
    d->dim = lo.size();
    d->box = Box{lo, hi};
    d->bbox = d->box;
    return Region(std::move(d));
}

Region Region::ball(Vec center, double radius)
{
    if (!(radius >= 0.0) || center.empty()) {
        throw ContractViolation("Region::ball: invalid center or radius");
    }
    auto d = std::make_shared<Data>();
    d->kind = Kind::Ball;
    d->dim = center.size();
    d->center = center;
    d->radius = radius;
    d->bbox.lo.resize(d->dim);
    d->bbox.hi.resize(d->dim);
    for (std::size_t i = 0; i < d->dim; ++i) {
        d->bbox.lo[i] = detail::down(center[i] - radius);
        d->bbox.hi[i] = detail::up(center[i] + radius);
    }
    return Region(std::move(d));
}

Region Region::ellipsoid(Vec center, std::vector<Vec> q)
{
    const std::size_t n = center.size();
    if (n == 0 || q.size() != n) {
        throw ContractViolation("Region::ellipsoid: matrix must be n x n");
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        require_dim(q[i].size(), n, "Region::ellipsoid");
        for (std::size_t j = 0; j < n; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = q[i][j];
        }
    }
    if (!m.isApprox(m.transpose(), 1e-12)) {
        throw ContractViolation("Region::ellipsoid: matrix must be symmetric");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) {
        throw ContractViolation("Region::ellipsoid: matrix must be positive definite");
    }
    const Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(m.rows(), m.cols()));
    auto d = std::make_shared<Data>();
    d->kind = Kind::Ellipsoid;
    d->dim = n;
    d->center = center;
    d->q = std::move(q);
    d->bbox.lo.resize(n);
    d->bbox.hi.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        // half-extent sqrt((Q^-1)_ii), padded against rounding in the solve
        const double h = std::sqrt(inv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i))) *
                         (1.0 + 1e-12);
        d->bbox.lo[i] = detail::down(center[i] - h);
        d->bbox.hi[i] = detail::up(center[i] + h);
    }
    return Region(std::move(d));
}

Region Region::union_of(std::vector<Region> parts)
{
    if (parts.empty()) {
        throw ContractViolation("Region::union_of: no parts");
    }
    auto d = std::make_shared<Data>();
    d->kind = Kind::Union;
    d->dim = parts[0].dim();
    d->bbox = parts[0].bounding_box();
    for (const Region& p : parts) {
        require_dim(p.dim(), d->dim, "Region::union_of");
        const Box& b = p.bounding_box();
        for (std::size_t i = 0; i < d->dim; ++i) {
            d->bbox.lo[i] = std::min(d->bbox.lo[i], b.lo[i]);
            d->bbox.hi[i] = std::max(d->bbox.hi[i], b.hi[i]);
        }
    }
    d->parts = std::move(parts);
    return Region(std::move(d));
}

Region Region::intersection_of(std::vector<Region> parts)
{
    if (parts.empty()) {
        throw ContractViolation("Region::intersection_of: no parts");
    }
    auto d = std::make_shared<Data>();
    d->kind = Kind::Intersection;
    d->dim = parts[0].dim();
    d->bbox = parts[0].bounding_box();
    for (const Region& p : parts) {
        require_dim(p.dim(), d->dim, "Region::intersection_of");
        const Box& b = p.bounding_box();
        for (std::size_t i = 0; i < d->dim; ++i) {
            d->bbox.lo[i] = std::max(d->bbox.lo[i], b.lo[i]);
            d->bbox.hi[i] = std::min(d->bbox.hi[i], b.hi[i]);
        }
    }
    for (std::size_t i = 0; i < d->dim; ++i) {
        // empty intersection: collapse to a degenerate box at the clash
        if (d->bbox.lo[i] > d->bbox.hi[i]) {
            d->bbox.hi[i] = d->bbox.lo[i];
        }
    }
    d->parts = std::move(parts);
    return Region(std::move(d));
}

Region Region::difference(Region base, Region minus)
{
    require_dim(base.dim(), minus.dim(), "Region::difference");
    auto d = std::make_shared<Data>();
    d->kind = Kind::Difference;
    d->dim = base.dim();
    d->bbox = base.bounding_box();
    d->parts = {std::move(base), std::move(minus)};
    return Region(std::move(d));
}

Region::Kind Region::kind() const { return d_->kind; }
std::size_t Region::dim() const { return d_->dim; }
const Box& Region::bounding_box() const { return d_->bbox; }
const Vec& Region::center() const { return d_->center; }
double Region::radius() const { return d_->radius; }
const std::vector<Vec>& Region::matrix() const { return d_->q; }
const std::vector<Region>& Region::parts() const { return d_->parts; }
const Box& Region::box_params() const { return d_->box; }

bool Region::contains(std::span<const double> x) const
{
    const Data& d = *d_;
    switch (d.kind) {
    case Kind::Box: return d.box.contains(x);
    case Kind::Ball: {
        double s = 0.0;
        for (std::size_t i = 0; i < d.dim; ++i) {
            const double t = x[i] - d.center[i];
            s += t * t;
        }
        return s <= d.radius * d.radius;
    }
    case Kind::Ellipsoid: {
        double s = 0.0;
        for (std::size_t i = 0; i < d.dim; ++i) {
            for (std::size_t j = 0; j < d.dim; ++j) {
                s += (x[i] - d.center[i]) * d.q[i][j] * (x[j] - d.center[j]);
            }
        }
        return s <= 1.0;
    }
    case Kind::Union:
        return std::any_of(d.parts.begin(), d.parts.end(), [&](const Region& r) { return r.contains(x); });
    case Kind::Intersection:
        return std::all_of(d.parts.begin(), d.parts.end(), [&](const Region& r) { return r.contains(x); });
    case Kind::Difference: return d.parts[0].contains(x) && !d.parts[1].contains(x);
    }
    return false;
}

CellRelation Region::classify(const Box& cell) const
{
    const Data& d = *d_;
    switch (d.kind) {
    case Kind::Box: {
        bool inside = true;
        for (std::size_t i = 0; i < d.dim; ++i) {
            if (cell.hi[i] < d.box.lo[i] || cell.lo[i] > d.box.hi[i]) {
                return CellRelation::Outside;
            }
            if (cell.lo[i] < d.box.lo[i] || cell.hi[i] > d.box.hi[i]) {
                inside = false;
            }
        }
        return inside ? CellRelation::Inside : CellRelation::Partial;
    }
    case Kind::Ball: {
        std::vector<Vec> eye(d.dim, Vec(d.dim, 0.0));
        for (std::size_t i = 0; i < d.dim; ++i) {
            eye[i][i] = 1.0;
        }
        const Interval s = quadratic_form(eye, d.center, cell);
        const double r2 = d.radius * d.radius;
        if (s.hi <= detail::down(r2)) {
            return CellRelation::Inside;
        }
        if (s.lo > detail::up(r2)) {
            return CellRelation::Outside;
        }
        return CellRelation::Partial;
    }
    case Kind::Ellipsoid: {
        const Interval s = quadratic_form(d.q, d.center, cell);
        if (s.hi <= detail::down(1.0)) {
            return CellRelation::Inside;
        }
        if (s.lo > detail::up(1.0)) {
            return CellRelation::Outside;
        }
        return CellRelation::Partial;
    }
    case Kind::Union: {
        bool all_out = true;
        for (const Region& r : d.parts) {
            const CellRelation c = r.classify(cell);
            if (c == CellRelation::Inside) {
                return CellRelation::Inside;
            }
            all_out = all_out && c == CellRelation::Outside;
        }
        return all_out ? CellRelation::Outside : CellRelation::Partial;
    }
    case Kind::Intersection: {
        bool all_in = true;
        for (const Region& r : d.parts) {
            const CellRelation c = r.classify(cell);
            if (c == CellRelation::Outside) {
                return CellRelation::Outside;
            }
            all_in = all_in && c == CellRelation::Inside;
        }
        return all_in ? CellRelation::Inside : CellRelation::Partial;
    }
    case Kind::Difference: {
        const CellRelation a = d.parts[0].classify(cell);
        const CellRelation b = d.parts[1].classify(cell);
        if (a == CellRelation::Outside || b == CellRelation::Inside) {
            return CellRelation::Outside;
        }
        if (a == CellRelation::Inside && b == CellRelation::Outside) {
            return CellRelation::Inside;
        }
        return CellRelation::Partial;
    }
    }
    return CellRelation::Partial;
}

std::vector<Vec> Region::box_corners() const
{
    std::vector<Vec> out;
    if (d_->kind == Kind::Box) {
        const std::size_t n = d_->dim;
        for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
            Vec c(n);
            for (std::size_t i = 0; i < n; ++i) {
                c[i] = (mask >> i) & 1U ? d_->box.hi[i] : d_->box.lo[i];
            }
            if (std::find(out.begin(), out.end(), c) == out.end()) {
                out.push_back(std::move(c));
            }
        }
        return out;
    }
    for (const Region& p : d_->parts) {
        for (Vec& c : p.box_corners()) {
            if (std::find(out.begin(), out.end(), c) == out.end()) {
                out.push_back(std::move(c));
            }
        }
    }
    return out;
}

Vec Region::breakpoints(std::size_t axis) const
{
    Vec out;
    if (d_->kind == Kind::Box) {
        out = {d_->box.lo[axis], d_->box.hi[axis]};
    }
    for (const Region& p : d_->parts) {
        const Vec b = p.breakpoints(axis);
        out.insert(out.end(), b.begin(), b.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<Vec> Region::sample(std::size_t count, Rng& rng, std::size_t max_tries) const
{
    if (max_tries == 0) {
        max_tries = 1000 * count + 1000;
    }
    const Box& b = bounding_box();
    std::vector<Vec> out;
    out.reserve(count);
    Vec x(dim());
    for (std::size_t t = 0; t < max_tries && out.size() < count; ++t) {
        for (std::size_t i = 0; i < dim(); ++i) {
            x[i] = rng.uniform(b.lo[i], b.hi[i]);
        }
        if (contains(x)) {
            out.push_back(x);
        }
    }
    return out;
}

namespace {

// Appends grid cells over `box` (n_i cells on axis i) not provably outside
// `region`.
void grid_over(const Box& box, const std::vector<std::size_t>& counts, const Region& region,
               std::size_t max_cells, std::vector<GridCell>& out)
{
    const std::size_t n = box.dim();
    std::vector<Vec> edges(n);
    for (std::size_t i = 0; i < n; ++i) {
        edges[i].resize(counts[i] + 1);
        for (std::size_t k = 0; k <= counts[i]; ++k) {
            edges[i][k] = box.lo[i] + (box.hi[i] - box.lo[i]) * static_cast<double>(k) /
                                          static_cast<double>(counts[i]);
        }
        edges[i][counts[i]] = box.hi[i];
        const Vec bps = region.breakpoints(i);
        const double tol = 1e-9 * (box.hi[i] - box.lo[i]) / static_cast<double>(counts[i]);
        for (std::size_t k = 1; k < counts[i]; ++k) {
            const auto it = std::lower_bound(bps.begin(), bps.end(), edges[i][k] - tol);
            if (it != bps.end() && *it <= edges[i][k] + tol) {
                edges[i][k] = *it;
            }
        }
    }
    std::vector<std::size_t> idx(n, 0);
    Box cb{Vec(n), Vec(n)};
    for (;;) {
        for (std::size_t i = 0; i < n; ++i) {
            cb.lo[i] = edges[i][idx[i]];
            cb.hi[i] = edges[i][idx[i] + 1];
        }
        const CellRelation rel = region.classify(cb);
        if (rel != CellRelation::Outside) {
            if (out.size() >= max_cells) {
                throw ResourceLimitError("grid cell count exceeds cap of " + std::to_string(max_cells));
            }
            GridCell g;
            g.relation = rel;
            g.cell.center.resize(n);
            g.cell.radius.resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                const double c = 0.5 * (cb.lo[i] + cb.hi[i]);
                g.cell.center[i] = c;
                g.cell.radius[i] = detail::up(std::max(cb.hi[i] - c, c - cb.lo[i]));
                if (cb.hi[i] == cb.lo[i]) {
                    g.cell.radius[i] = 0.0;
                }
            }
            out.push_back(std::move(g));
        }
        std::size_t i = n;
        while (i-- > 0) {
            if (++idx[i] < counts[i]) {
                break;
            }
            idx[i] = 0;
        }
        if (i == static_cast<std::size_t>(-1)) {
            break;
        }
    }
}

std::vector<std::size_t> cell_counts(const Box& box, double resolution, std::size_t max_cells)
{
    std::vector<std::size_t> counts(box.dim());
    double total = 1.0;
    for (std::size_t i = 0; i < box.dim(); ++i) {
        const double w = box.hi[i] - box.lo[i];
        // 1e-9 relative slack so that e.g. 1.2 / 0.05 yields 24, not 25
        const double q = std::ceil(w / resolution * (1.0 - 1e-9));
        counts[i] = static_cast<std::size_t>(std::max(1.0, q));
        total *= static_cast<double>(counts[i]);
    }
    if (total > static_cast<double>(max_cells)) {
        throw ResourceLimitError("grid cell count " + std::to_string(static_cast<long long>(total)) +
                                 " exceeds cap of " + std::to_string(max_cells));
    }
    return counts;
}

} // namespace

std::vector<GridCell> region_grid(const Region& region, double resolution, std::size_t max_cells)
{
    if (!(resolution > 0.0)) {
        throw ContractViolation("region_grid: resolution must be positive");
    }
    const Box& bb = region.bounding_box();
    const auto counts = cell_counts(bb, resolution, max_cells);
    std::vector<GridCell> out;
    grid_over(bb, counts, region, max_cells, out);
    return out;
}

std::vector<GridCell> subdivide(const Cell& cell, const Region& region, double resolution,
                                std::size_t max_cells)
{
    if (!(resolution > 0.0)) {
        throw ContractViolation("subdivide: resolution must be positive");
    }
    const Box box = cell.box();
    const auto counts = cell_counts(box, resolution, max_cells);
    std::vector<GridCell> out;
    grid_over(box, counts, region, max_cells, out);
    return out;
}

} // namespace racert
