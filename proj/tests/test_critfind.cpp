#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cyclebound/critfind/critfind.hpp"
#include "cyclebound/errors.hpp"
#include "cyclebound/polyalg/parser.hpp"
#include "support/generators.hpp"

using namespace cyclebound;
using namespace cyclebound::critfind;
using polyalg::parse_poly;
using polyalg::Poly2;
using polyalg::Rational;

namespace {

VectorField field(const char* p, const char* q) { return VectorField(parse_poly(p), parse_poly(q)); }

// P = (x - a1)(x - a2), Q = (y - b1)(y - b2 + c (x - a1)): zeros are known in
// closed form and all nondegenerate when the roots are distinct.
struct Factored {
    VectorField v;
    std::vector<Point> zeros;
};

Factored factored(std::mt19937_64& g) {
    auto root = [&] { return testgen::ratio(testgen::uniform_int(g, -16, 16), 8); };
    Rational a1 = root(), a2 = root(), b1 = root(), b2 = root();
    while (a2 == a1) a2 = root();
    while (b2 == b1) b2 = root();
    const Rational c = testgen::ratio(testgen::uniform_int(g, -2, 2), 4);
    const Poly2 x = Poly2::x(), y = Poly2::y();
    const Poly2 p = (x - Poly2(a1)) * (x - Poly2(a2));
    const Poly2 q = (y - Poly2(b1)) * (y - Poly2(b2) + c * (x - Poly2(a1)));
    std::vector<Point> z;
    for (const Rational& xa : {a1, a2}) {
        z.push_back({xa.get_d(), b1.get_d()});
        const Rational yb = b2 - c * (xa - a1);
        if (yb != b1) z.push_back({xa.get_d(), yb.get_d()});
    }
    return {VectorField(p, q), z};
}

} // namespace

TEST_CASE("find_critical_points examples") {
    const auto a = find_critical_points(field("x", "y"));
    REQUIRE(a.size() == 1);
    CHECK(norm(a[0].location) < 1e-12);
    CHECK(a[0].nondegenerate);
    CHECK(a[0].index == 1);
    CHECK(a[0].certified);

    const auto b = find_critical_points(field("x^2 - 1", "y"));
    REQUIRE(b.size() == 2);
    CHECK(distance(b[0].location, {-1, 0}) < 1e-12);
    CHECK(distance(b[1].location, {1, 0}) < 1e-12);
    CHECK(b[0].index == -1);
    CHECK(b[1].index == 1);
    CHECK(b[0].id == 0);
    CHECK(b[1].id == 1);

    const auto c = find_critical_points(field("y", "(1 - x^2)*y - x"));
    REQUIRE(c.size() == 1);
    CHECK(norm(c[0].location) < 1e-12);
    CHECK(c[0].jacobian.det() == doctest::Approx(1.0));

    CHECK(find_critical_points(field("x^2 + 1", "y")).empty());
}

TEST_CASE("degenerate and non-isolated zeros") {
    const auto d = find_critical_points(field("x^2", "y"));
    REQUIRE(d.size() == 1);
    CHECK_FALSE(d[0].nondegenerate);
    CHECK(norm(d[0].location) < 1e-6);
    CHECK_THROWS_AS(find_critical_points(field("x", "0")), DepthLimitExceeded);
}

TEST_CASE("zeros on the box boundary are flagged") {
    const auto v = field("x - 5", "y");
    const auto cps = find_critical_points(v);
    REQUIRE(cps.size() == 1);
    CHECK(cps[0].on_boundary);
}

TEST_CASE("poincare_index examples") {
    CHECK(poincare_index(field("x", "y"), {0, 0}, 1.0) == 1);
    CHECK(poincare_index(field("x", "-y"), {0, 0}, 1.0) == -1);
    // Brute-force angle accumulation at 1e4 samples gives 2.000000.
    CHECK(poincare_index(field("x^2 - y^2", "2*x*y"), {0, 0}, 1.0) == 2);
    CHECK(poincare_index(field("x - 3", "y"), {0, 0}, 1.0) == 0);
    CHECK_THROWS_AS(poincare_index(field("x - 1", "y"), {0, 0}, 1.0), ZeroOnCircle);
}

TEST_CASE("is_nondegenerate examples") {
    CHECK(is_nondegenerate(field("x", "y"), {0, 0}));
    CHECK_FALSE(is_nondegenerate(field("x^2", "y"), {0, 0}));
    CHECK(is_nondegenerate(field("y", "(1 - x^2)*y - x"), {0, 0}));
}

TEST_CASE("property: factored systems are solved completely") {
    std::mt19937_64 g(31);
    for (int k = 0; k < 20; ++k) {
        const auto f = factored(g);
        INFO("system " << k << ": P = " << render(f.v.p()) << ", Q = " << render(f.v.q()));
        const auto cps = find_critical_points(f.v);
        REQUIRE(cps.size() == f.zeros.size());
        for (const Point z : f.zeros) {
            const bool hit = std::any_of(cps.begin(), cps.end(), [&](const CriticalPoint& c) { return distance(c.location, z) <= 1e-9; });
            CHECK(hit);
        }
        for (std::size_t i = 0; i < cps.size(); ++i) {
            CHECK(norm(f.v(cps[i].location)) <= 1e-12);
            CHECK(cps[i].enclosure.contains(cps[i].location.x, cps[i].location.y));
        }
    }
}

TEST_CASE("property: index equals sign(det) at nondegenerate zeros") {
    std::mt19937_64 g(32);
    int seen = 0;
    for (int k = 0; k < 20; ++k) {
        const auto f = factored(g);
        for (const auto& cp : find_critical_points(f.v)) {
            if (!cp.nondegenerate) continue;
            ++seen;
            CHECK(cp.index == (cp.jacobian.det() > 0 ? 1 : -1));
            // Independent check by winding number on a small circle.
            CHECK(poincare_index(f.v, cp.location, 0.05) == cp.index);
        }
    }
    CHECK(seen > 40);
}

TEST_CASE("property: translation equivariance") {
    std::mt19937_64 g(33);
    for (int k = 0; k < 10; ++k) {
        const auto f = factored(g);
        const Rational cx = testgen::ratio(testgen::uniform_int(g, -8, 8), 8), cy = testgen::ratio(testgen::uniform_int(g, -8, 8), 8);
        polyalg::AffineMap shift;
        shift.b1 = cx;
        shift.b2 = cy;
        polyalg::SearchBox box = f.v.box();
        box.x_lo -= cx;
        box.x_hi -= cx;
        box.y_lo -= cy;
        box.y_hi -= cy;
        const VectorField moved(f.v.p().compose(shift), f.v.q().compose(shift), std::nullopt, box);
        const auto a = find_critical_points(f.v);
        const auto b = find_critical_points(moved);
        REQUIRE(a.size() == b.size());
        for (const auto& cp : a) {
            const Point want = cp.location - Point{cx.get_d(), cy.get_d()};
            const bool hit = std::any_of(b.begin(), b.end(), [&](const CriticalPoint& c) { return distance(c.location, want) <= 1e-9; });
            CHECK(hit);
        }
    }
}

TEST_CASE("property: enclosures are pairwise disjoint") {
    std::mt19937_64 g(34);
    for (int k = 0; k < 20; ++k) {
        const auto cps = find_critical_points(testgen::field_with_zero(g, 3).field);
        for (std::size_t i = 0; i < cps.size(); ++i)
            for (std::size_t j = i + 1; j < cps.size(); ++j) CHECK_FALSE(cps[i].enclosure.intersects(cps[j].enclosure));
    }
}

TEST_CASE("property: the planted zero is found") {
    std::mt19937_64 g(35);
    for (int k = 0; k < 20; ++k) {
        const auto f = testgen::field_with_zero(g, 3);
        const auto cps = find_critical_points(f.field);
        const bool found = std::any_of(cps.begin(), cps.end(), [&](const CriticalPoint& c) { return distance(c.location, f.zero) <= 1e-9; });
        CHECK(found);
    }
}
