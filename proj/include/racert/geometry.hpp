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

#ifndef RACERT_GEOMETRY_HPP
#define RACERT_GEOMETRY_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "racert/interval.hpp"

namespace racert {

using Vec = std::vector<double>;

// Axis-aligned closed box [lo, hi].
struct Box {
    Vec lo;
    Vec hi;

    std::size_t dim() const { return lo.size(); }

    bool contains(std::span<const double> x) const
    {
        for (std::size_t i = 0; i < lo.size(); ++i) {
            if (x[i] < lo[i] || x[i] > hi[i]) {
                return false;
            }
        }
        return true;
    }

    std::vector<Interval> intervals() const
    {
        std::vector<Interval> out(lo.size());
        for (std::size_t i = 0; i < lo.size(); ++i) {
            out[i] = Interval(lo[i], hi[i]);
        }
        return out;
    }

    static Box from_intervals(std::span<const Interval> iv)
    {
        Box b;
        for (const Interval& i : iv) {
            b.lo.push_back(i.lo);
            b.hi.push_back(i.hi);
        }
        return b;
    }

    bool operator==(const Box&) const = default;
};

// Grid cell: axis-aligned box given by center and per-axis half-widths.
// `radius` is rounded up so that center +- radius encloses the cell box.
struct Cell {
    Vec center;
    Vec radius;

    double max_radius() const
    {
        double r = 0.0;
        for (double v : radius) {
            r = v > r ? v : r;
        }
        return r;
    }

    Box box() const
    {
        Box b;
        b.lo.resize(center.size());
        b.hi.resize(center.size());
        for (std::size_t i = 0; i < center.size(); ++i) {
            b.lo[i] = center[i] - radius[i];
            b.hi[i] = center[i] + radius[i];
        }
        return b;
    }
};

} // namespace racert

#endif
