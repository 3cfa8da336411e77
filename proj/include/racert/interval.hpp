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

#ifndef RACERT_INTERVAL_HPP
#define RACERT_INTERVAL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace racert {

// Closed interval [lo, hi] with outward rounding: every operation widens its
// result by one ulp on each side, so the enclosure survives round-to-nearest.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    constexpr Interval() = default;
    constexpr explicit Interval(double v) : lo(v), hi(v) {}
    constexpr Interval(double l, double u) : lo(l), hi(u) {}

    double mid() const { return 0.5 * (lo + hi); }
    double width() const { return hi - lo; }
    // Largest absolute value in the interval.
    double mag() const { return std::max(std::abs(lo), std::abs(hi)); }
    bool contains(double v) const { return lo <= v && v <= hi; }
};

namespace detail {

inline double down(double v)
{
    return std::isfinite(v) ? std::nextafter(v, -std::numeric_limits<double>::infinity()) : v;
}

inline double up(double v)
{
    return std::isfinite(v) ? std::nextafter(v, std::numeric_limits<double>::infinity()) : v;
}

} // namespace detail

inline Interval widen(double lo, double hi)
{
    return {detail::down(lo), detail::up(hi)};
}

inline Interval operator+(Interval a, Interval b)
{
    return widen(a.lo + b.lo, a.hi + b.hi);
}

inline Interval operator-(Interval a, Interval b)
{
    return widen(a.lo - b.hi, a.hi - b.lo);
}

inline Interval operator-(Interval a)
{
    return {-a.hi, -a.lo};
}

inline Interval operator*(Interval a, Interval b)
{
    // exact zero scalars keep degenerate boxes tight
    if ((a.lo == 0.0 && a.hi == 0.0) || (b.lo == 0.0 && b.hi == 0.0)) {
        return Interval(0.0);
    }
    const double p1 = a.lo * b.lo;
    const double p2 = a.lo * b.hi;
    const double p3 = a.hi * b.lo;
    const double p4 = a.hi * b.hi;
    return widen(std::min(std::min(p1, p2), std::min(p3, p4)),
                 std::max(std::max(p1, p2), std::max(p3, p4)));
}

inline Interval operator*(double s, Interval a)
{
    return Interval(s) * a;
}

inline Interval hull(Interval a, Interval b)
{
    return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

// Integer power; even exponents map to a non-negative range.
inline Interval pow(Interval a, int k)
{
    if (k == 0) {
        return Interval(1.0);
    }
    if (k == 1) {
        return a;
    }
    const double l = std::pow(a.lo, k);
    const double u = std::pow(a.hi, k);
    if (k % 2 == 1) {
        return widen(l, u);
    }
    if (a.lo >= 0.0) {
        return widen(l, u);
    }
    if (a.hi <= 0.0) {
        return widen(u, l);
    }
    return {0.0, detail::up(std::max(l, u))};
}

// sin over an interval: endpoint values, plus +1 / -1 whenever a crest
// (pi/2 + 2k pi) or trough (-pi/2 + 2k pi) falls inside.
inline Interval sin(Interval a)
{
    constexpr double pi = std::numbers::pi;
    if (!(a.width() < 2.0 * pi)) {
        return {-1.0, 1.0};
    }
    double lo = std::min(std::sin(a.lo), std::sin(a.hi));
    double hi = std::max(std::sin(a.lo), std::sin(a.hi));
    const double crest = std::ceil((a.lo - pi / 2) / (2 * pi)) * 2 * pi + pi / 2;
    if (crest <= a.hi) {
        hi = 1.0;
    }
    const double trough = std::ceil((a.lo + pi / 2) / (2 * pi)) * 2 * pi - pi / 2;
    if (trough <= a.hi) {
        lo = -1.0;
    }
    // std::sin carries ~1 ulp error; one extra ulp of slack on top of widen
    Interval r = widen(detail::down(lo), detail::up(hi));
    r.lo = std::max(r.lo, -1.0);
    r.hi = std::min(r.hi, 1.0);
    return r;
}

inline Interval cos(Interval a)
{
    return sin(a + Interval(std::numbers::pi / 2));
}

} // namespace racert

#endif
