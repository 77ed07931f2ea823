#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

#include "cyclebound/polyalg/poly2.hpp"

namespace cyclebound::polyalg {

// Closed interval with outward rounding: every operation widens its result
// by one ulp on each side, so enclosures survive round-to-nearest.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    constexpr Interval(double point) : lo(point), hi(point) {}
    Interval(double l, double h);

    static Interval hull(double a, double b) { return {std::min(a, b), std::max(a, b)}; }

    double width() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
    double radius() const { return 0.5 * (hi - lo); }
    double mag() const { return std::max(std::fabs(lo), std::fabs(hi)); }
    bool contains(double v) const { return lo <= v && v <= hi; }
    bool contains_zero() const { return lo <= 0.0 && 0.0 <= hi; }
    bool subset_of_interior(const Interval& o) const { return o.lo < lo && hi < o.hi; }
    bool intersects(const Interval& o) const { return lo <= o.hi && o.lo <= hi; }

    friend Interval operator+(const Interval& a, const Interval& b);
    friend Interval operator-(const Interval& a, const Interval& b);
    friend Interval operator-(const Interval& a);
    friend Interval operator*(const Interval& a, const Interval& b);
    friend bool operator==(const Interval&, const Interval&) = default;
};

Interval sqr(const Interval& a);
Interval pow(const Interval& a, unsigned n);
Interval intersect(const Interval& a, const Interval& b);  // caller checks intersects()
Interval hull(const Interval& a, const Interval& b);

// Enclosure of an exact rational.
Interval enclose(const Rational& q);

struct Box2 {
    Interval x;
    Interval y;

    double max_width() const { return std::max(x.width(), y.width()); }
    bool intersects(const Box2& o) const { return x.intersects(o.x) && y.intersects(o.y); }
    bool contains(double px, double py) const { return x.contains(px) && y.contains(py); }
};

// Natural interval extension of p over the box: the result contains
// {p(x, y) : (x, y) in box}.
Interval interval_eval(const Poly2& p, const Box2& box);

} // namespace cyclebound::polyalg
