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

#ifndef RACERT_REGION_HPP
#define RACERT_REGION_HPP

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "racert/geometry.hpp"
#include "racert/rng.hpp"

namespace racert {

// How a closed cell box relates to a region. Inside and Outside are only
// reported when provable; anything undecided is Partial.
enum class CellRelation { Inside, Outside, Partial };

// Membership-testable subset of R^n built from boxes, balls and ellipsoids
// with union, intersection and difference. Immutable; copies share state.
class Region {
public:
    enum class Kind { Box, Ball, Ellipsoid, Union, Intersection, Difference };

    static Region box(Vec lo, Vec hi);
    static Region box(const Box& b) { return box(b.lo, b.hi); }
    static Region point(Vec x) { return box(x, x); }
    static Region ball(Vec center, double radius);
    // {x : (x-c)^T Q (x-c) <= 1}, Q symmetric positive definite.
    static Region ellipsoid(Vec center, std::vector<Vec> q);
    static Region union_of(std::vector<Region> parts);
    static Region intersection_of(std::vector<Region> parts);
    static Region difference(Region base, Region minus);
    static Region complement_within(const Box& box, Region of) { return difference(Region::box(box), std::move(of)); }

    Kind kind() const;
    std::size_t dim() const;

    bool contains(std::span<const double> x) const;
    // Box guaranteed to contain the region.
    const Box& bounding_box() const;
    CellRelation classify(const Box& cell) const;

    // Corners of every box leaf (used to seed samples at likely violation sites).
    std::vector<Vec> box_corners() const;

    // Sorted lo/hi coordinates of every box leaf along \`axis\`.
    Vec breakpoints(std::size_t axis) const;

    // Rejection sampling inside the bounding box. Returns fewer than `count`
    // points if the acceptance rate is too low after max_tries draws.
    std::vector<Vec> sample(std::size_t count, Rng& rng, std::size_t max_tries = 0) const;

    // Accessors for serialization.
    const Vec& center() const;
    double radius() const;
    const std::vector<Vec>& matrix() const;
    const std::vector<Region>& parts() const;
    const Box& box_params() const;

    struct Data;

private:
    explicit Region(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
    std::shared_ptr<const Data> d_;
};

// Covers region ∩ bounding_box with a uniform grid whose cells have side
// length <= `resolution` on every axis (so infinity-radius <= resolution/2).
// Axis i uses ceil(width_i / resolution) cells; edges within a rounding error
// of a box-leaf boundary snap onto it. Cells provably disjoint from the region
// are dropped. Throws ResourceLimitError past `max_cells`.
struct GridCell {
    Cell cell;
    CellRelation relation = CellRelation::Partial;
};

std::vector<GridCell> region_grid(const Region& region, double resolution,
                                  std::size_t max_cells = 50'000'000);

// Splits a cell into sub-cells of side <= resolution, keeping those not
// provably outside `region`.
std::vector<GridCell> subdivide(const Cell& cell, const Region& region, double resolution,
                                std::size_t max_cells = 50'000'000);

} // namespace racert

#endif
