#include "cyclebound/polyalg/interval.hpp"

#include <stdexcept>
#include <vector>

namespace cyclebound::polyalg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double down(double v) { return std::nextafter(v, -kInf); }
double up(double v) { return std::nextafter(v, kInf); }

Interval widened(double lo, double hi) {
    Interval r;
    r.lo = down(lo);
    r.hi = up(hi);
    return r;
}

} // namespace

Interval::Interval(double l, double h) : lo(l), hi(h) {
    if (!(l <= h)) throw std::invalid_argument("Interval: lo > hi");
}

Interval operator+(const Interval& a, const Interval& b) { return widened(a.lo + b.lo, a.hi + b.hi); }

Interval operator-(const Interval& a, const Interval& b) { return widened(a.lo - b.hi, a.hi - b.lo); }

Interval operator-(const Interval& a) {
    Interval r;
    r.lo = -a.hi;
    r.hi = -a.lo;
    return r;
}

Interval operator*(const Interval& a, const Interval& b) {
    const double p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo, p4 = a.hi * b.hi;
    return widened(std::min(std::min(p1, p2), std::min(p3, p4)),
                   std::max(std::max(p1, p2), std::max(p3, p4)));
}

Interval sqr(const Interval& a) {
    const double l2 = a.lo * a.lo, h2 = a.hi * a.hi;
    if (a.lo >= 0.0) return widened(l2, h2);
    if (a.hi <= 0.0) return widened(h2, l2);
    Interval r;
    r.lo = 0.0;
    r.hi = up(std::max(l2, h2));
    return r;
}

Interval pow(const Interval& a, unsigned n) {
    if (n == 0) return Interval(1.0);
    if (n == 1) return a;
    if (n % 2 == 0) {
        Interval h = pow(a, n / 2);
        return sqr(h);
    }
    // Odd powers are monotone: evaluate the endpoints by repeated multiplication
    // with outward rounding.
    Interval lo_pow(a.lo), hi_pow(a.hi);
    for (unsigned k = 1; k < n; ++k) {
        lo_pow = lo_pow * Interval(a.lo);
        hi_pow = hi_pow * Interval(a.hi);
    }
    Interval r;
    r.lo = lo_pow.lo;
    r.hi = hi_pow.hi;
    return r;
}

Interval intersect(const Interval& a, const Interval& b) {
    Interval r;
    r.lo = std::max(a.lo, b.lo);
    r.hi = std::min(a.hi, b.hi);
    return r;
}

Interval hull(const Interval& a, const Interval& b) {
    Interval r;
    r.lo = std::min(a.lo, b.lo);
    r.hi = std::max(a.hi, b.hi);
    return r;
}

Interval enclose(const Rational& q) {
    const double d = q.get_d();  // truncates toward zero
    if (Rational(d) == q) return Interval(d);
    return widened(d, d);
}

Interval interval_eval(const Poly2& p, const Box2& box) {
    const int deg = p.degree();
    if (deg < 0) return Interval(0.0);
    std::vector<Interval> xp(static_cast<std::size_t>(deg + 1)), yp(static_cast<std::size_t>(deg + 1));
    for (int k = 0; k <= deg; ++k) {
        xp[static_cast<std::size_t>(k)] = pow(box.x, static_cast<unsigned>(k));
        yp[static_cast<std::size_t>(k)] = pow(box.y, static_cast<unsigned>(k));
    }
    Interval acc(0.0);
    for (const auto& [e, c] : p.terms()) acc = acc + enclose(c) * (xp[e.i] * yp[e.j]);
    return acc;
}

} // namespace cyclebound::polyalg
