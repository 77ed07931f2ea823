#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "cyclebound/errors.hpp"
#include "cyclebound/milnorfiber/milnorfiber.hpp"
#include "cyclebound/polyalg/parser.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace cyclebound;
using namespace cyclebound::milnor;
using polyalg::parse_poly;

namespace {

VectorField field(const char* p, const char* q) { return VectorField(parse_poly(p), parse_poly(q)); }

CriticalPoint at(Point p, int id = 0) {
    CriticalPoint cp;
    cp.id = id;
    cp.location = p;
    return cp;
}

VectorField corpus(const std::string& name) { return polyalg::load_vector_field(std::string(CORPUS_DIR) + "/" + name + ".vf"); }

const std::vector<std::string> kCorpus = {"cubic_one_cycle", "van_der_pol", "linear_center", "two_cycle", "radial", "rotation", "saddle_pair", "degenerate"};

double vertex_residual(const VectorField& v, Point c, double eta, Point x) {
    const Point f = v(x) - v(c);
    return std::abs(dot(f, f) - eta * eta);
}

} // namespace

TEST_CASE("select_radii examples") {
    const auto v = field("x", "y");
    const std::vector<CriticalPoint> one{at({0, 0})};
    const Radii r = select_radii(v, one[0], one);
    CHECK(r.delta == doctest::Approx(2.5));
    CHECK(r.sphere_min == doctest::Approx(2.5).epsilon(1e-9));
    CHECK(r.eta_max == doctest::Approx(1.25).epsilon(1e-9));
    REQUIRE(r.eta_sweep.size() == 8);
    CHECK(r.eta_sweep.back() == doctest::Approx(1.25).epsilon(1e-9));
    CHECK(r.eta_sweep.front() == doctest::Approx(0.0125).epsilon(1e-9));
    CHECK(std::is_sorted(r.eta_sweep.begin(), r.eta_sweep.end()));

    const auto w = field("x^2 - 1", "y");
    const std::vector<CriticalPoint> two{at({-1, 0}, 0), at({1, 0}, 1)};
    CHECK(select_radii(w, two[1], two).delta <= 1.0);

    const auto c = field("x - 4.9", "y - 4.9");
    const std::vector<CriticalPoint> corner{at({4.9, 4.9})};
    CHECK(select_radii(c, corner[0], corner).delta <= 0.05 + 1e-12);

    const auto d = field("x - 5", "y");
    const std::vector<CriticalPoint> edge{at({5, 0})};
    CHECK_THROWS_AS(select_radii(d, edge[0], edge), DeltaCollapse);
}

TEST_CASE("extract_fiber examples") {
    for (const auto& v : {field("x", "y"), field("-y", "x")}) {
        const FiberCurve f = extract_fiber(v, at({0, 0}), 2.0, 1.0);
        REQUIRE(f.components.size() == 1);
        CHECK(f.components[0].closed);
        CHECK(f.components[0].vertices.front() == f.components[0].vertices.back());
        CHECK(f.max_residual <= 1e-3);
        for (const Point x : f.components[0].vertices) CHECK(norm(x) == doctest::Approx(1.0).epsilon(1e-3));
    }
    // |V| = r^2, so the eta = 1/4 fiber is the circle of radius 1/2; the
    // sign-grid oracle at 512^2 agrees (one region pair, one closed curve).
    const auto sq = field("x^2 - y^2", "2*x*y");
    const FiberCurve f = extract_fiber(sq, at({0, 0}), 2.0, 0.25);
    REQUIRE(f.components.size() == 1);
    CHECK(f.components[0].closed);
    for (const Point x : f.components[0].vertices) CHECK(norm(x) == doctest::Approx(0.5).epsilon(1e-3));
    const auto t = oracle::flood_fill(sample_level_grid(sq, {0, 0}, 2.0, 0.25, 512));
    CHECK(t.b0 == 1);
    CHECK(t.closed == 1);
}

TEST_CASE("extract_fiber preconditions") {
    const auto v = field("x", "y");
    CHECK_THROWS_AS(extract_fiber(v, at({0, 0}), 2.0, 0.0), InvalidArgument);
    MilnorConfig small;
    small.grid = 16;
    CHECK_THROWS_AS(extract_fiber(v, at({0, 0}), 2.0, 1.0, small), InvalidArgument);
    // eta equal to min |f| on the sphere: the fiber touches the sphere.
    CHECK_THROWS_AS(extract_fiber(v, at({0, 0}), 2.0, 2.0), EtaTooLarge);
}

TEST_CASE("betti examples") {
    FiberCurve f;
    CHECK(betti(f).b0 == 0);
    CHECK(betti(f).closed_count == 0);
    Component circle;
    circle.closed = true;
    circle.vertices = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}, {1, 0}};
    f.components.push_back(circle);
    CHECK(betti(f).b0 == 1);
    CHECK(betti(f).closed_count == 1);
    Component arc;
    arc.vertices = {{2, 0}, {2, 1}, {2, 2}};
    arc.arc_endpoints_on_sphere = true;
    f.components.push_back(arc);
    CHECK(betti(f).b0 == 2);
    CHECK(betti(f).closed_count == 1);
}

TEST_CASE("saddle fiber has four arcs") {
    // |x^2 - y^2| = eta is four hyperbola branches, none closed.
    const auto v = field("x^2 - y^2", "0");
    const FiberCurve f = extract_fiber(v, at({0, 0}), 1.0, 0.1);
    CHECK(betti(f).closed_count == 0);
    CHECK(betti(f).b0 == 4);
    for (const auto& c : f.components) CHECK(c.arc_endpoints_on_sphere);
}

TEST_CASE("property: components are closed or end on the sphere") {
    std::mt19937_64 g(41);
    int fibers = 0;
    for (int k = 0; k < 20; ++k) {
        const auto fz = testgen::field_with_zero(g, testgen::uniform_int(g, 1, 4));
        const std::vector<CriticalPoint> cps{at(fz.zero)};
        for (const double eta : {0.05, 0.2, 0.6}) {
            try {
                const FiberCurve f = extract_fiber(fz.field, cps[0], 0.5, eta);
                ++fibers;
                for (const auto& c : f.components) {
                    CHECK(c.vertices.size() >= 3);
                    if (c.closed) CHECK(c.vertices.front() == c.vertices.back());
                    else CHECK(c.arc_endpoints_on_sphere);
                    for (const Point x : c.vertices) CHECK(distance(x, fz.zero) <= 0.5 + f.delta * 2 / f.grid_resolution * std::sqrt(2.0) + 1e-12);
                }
            } catch (const Error& e) {
                MESSAGE("case " << k << " eta " << eta << ": " << std::string(e.what()));
            }
        }
    }
    CHECK(fibers >= 40);
}

TEST_CASE("property: marching squares matches the flood-fill oracle") {
    std::mt19937_64 g(42);
    int fields = 0, levels = 0;
    for (int attempt = 0; fields < 10 && attempt < 100; ++attempt) {
        const auto fz = testgen::field_with_zero(g, testgen::uniform_int(g, 2, 4));
        std::vector<CriticalPoint> cps;
        Radii r;
        try {
            cps = critfind::find_critical_points(fz.field);
            auto it = std::find_if(cps.begin(), cps.end(), [&](const CriticalPoint& c) { return distance(c.location, fz.zero) < 1e-9; });
            REQUIRE(it != cps.end());
            r = select_radii(fz.field, *it, cps);
            ++fields;
            for (const double eta : r.eta_sweep) {
                const LevelGrid grid = sample_level_grid(fz.field, it->location, r.delta, eta, 512);
                const auto comps = march(grid);
                const int closed = static_cast<int>(std::count_if(comps.begin(), comps.end(), [](const Component& c) { return c.closed; }));
                const auto t = oracle::flood_fill(grid);
                INFO("field " << attempt << " eta " << eta);
                CHECK(static_cast<int>(comps.size()) == t.b0);
                CHECK(closed == t.closed);
                ++levels;
            }
        } catch (const Error& e) {
            MESSAGE("attempt " << attempt << " skipped: " << std::string(e.what()));
        }
    }
    CHECK(fields == 10);
    CHECK(levels == 80);
}

TEST_CASE("property: vertex residuals within the Lipschitz bound") {
    std::mt19937_64 g(43);
    for (int k = 0; k < 10; ++k) {
        const auto fz = testgen::field_with_zero(g, testgen::uniform_int(g, 1, 4));
        const double delta = 0.5, eta = testgen::uniform(g, 0.05, 0.5);
        FiberCurve f;
        try {
            f = extract_fiber(fz.field, at(fz.zero), delta, eta);
        } catch (const Error& e) {
            MESSAGE(std::string(e.what()));
            continue;
        }
        // Lipschitz estimate of g from node differences at the accepted grid.
        const LevelGrid grid = sample_level_grid(fz.field, fz.zero, delta, eta, f.grid_resolution);
        double lip = 0.0;
        for (int j = 0; j < grid.n; ++j)
            for (int i = 0; i < grid.n; ++i) {
                lip = std::max(lip, std::abs(grid.value(i + 1, j) - grid.value(i, j)) / grid.h);
                lip = std::max(lip, std::abs(grid.value(i, j + 1) - grid.value(i, j)) / grid.h);
            }
        const double bound = 2.0 * grid.h * std::sqrt(2.0) * lip;
        double worst = 0.0;
        for (const auto& c : f.components)
            for (const Point x : c.vertices) worst = std::max(worst, vertex_residual(fz.field, fz.zero, eta, x));
        CHECK(worst <= bound);
        CHECK(worst == doctest::Approx(f.max_residual));
    }
}

TEST_CASE("property: rigid motions leave (l, stable) unchanged") {
    // Exact rotation by (3/5, 4/5): W(x) = R^T V(R x).
    polyalg::AffineMap rot;
    rot.a11 = polyalg::Rational(3, 5);
    rot.a12 = polyalg::Rational(-4, 5);
    rot.a21 = polyalg::Rational(4, 5);
    rot.a22 = polyalg::Rational(3, 5);
    for (const std::string& name : kCorpus) {
        const auto v = corpus(name);
        const auto p = v.p().compose(rot), q = v.q().compose(rot);
        // Same (centered) search box, so the edge distance feeding delta agrees.
        const VectorField w(rot.a11 * p + rot.a21 * q, rot.a12 * p + rot.a22 * q, std::nullopt, v.box());
        const auto a = critfind::find_critical_points(v);
        const auto b = critfind::find_critical_points(w);
        REQUIRE(a.size() == b.size());
        for (const auto& cp : a) {
            const Point img{0.6 * cp.location.x + 0.8 * cp.location.y, -0.8 * cp.location.x + 0.6 * cp.location.y};
            auto it = std::find_if(b.begin(), b.end(), [&](const CriticalPoint& c) { return distance(c.location, img) < 1e-6; });
            REQUIRE(it != b.end());
            const auto ma = vanishing_cycle_count(v, cp, a);
            const auto mb = vanishing_cycle_count(w, *it, b);
            INFO(name << " point " << cp.id);
            CHECK(ma.l == mb.l);
            CHECK(ma.stable == mb.stable);
        }
    }
}

TEST_CASE("nondegenerate corpus points have l = 1") {
    int seen = 0;
    for (const std::string& name : kCorpus) {
        const auto v = corpus(name);
        const auto cps = critfind::find_critical_points(v);
        for (const auto& cp : cps) {
            if (!cp.nondegenerate) continue;
            ++seen;
            const auto m = vanishing_cycle_count(v, cp, cps);
            INFO(name << " point " << cp.id);
            CHECK(m.stable);
            CHECK(m.l == 1);
        }
    }
    CHECK(seen == 8);
}

TEST_CASE("vanishing_cycle_count examples") {
    {
        const auto v = field("x", "y");
        const std::vector<CriticalPoint> cps{at({0, 0})};
        const auto m = vanishing_cycle_count(v, cps[0], cps);
        CHECK(m.l == 1);
        CHECK(m.stable);
        CHECK(m.submersion_ok);
        CHECK_FALSE(m.failed);
        for (const auto& e : m.counts_per_eta) {
            CHECK(e.closed_count == 1);
            CHECK(e.arc_count == 0);
        }
    }
    {
        // The flood-fill oracle gives (b0, closed) = (1, 1) at every sweep
        // level at 512^2.
        const auto v = corpus("cubic_one_cycle");
        const auto cps = critfind::find_critical_points(v);
        REQUIRE(cps.size() == 1);
        const auto m = vanishing_cycle_count(v, cps[0], cps);
        CHECK(m.stable);
        CHECK(m.l == 1);
        for (const double eta : m.eta_sweep) {
            const auto t = oracle::flood_fill(sample_level_grid(v, cps[0].location, m.delta, eta, 512));
            CHECK(t.closed == 1);
        }
    }
    {
        const auto v = field("x^2 - 1", "y");
        const auto cps = critfind::find_critical_points(v);
        REQUIRE(cps.size() == 2);
        const auto m = vanishing_cycle_count(v, cps[1], cps);
        CHECK(m.l == 1);
        CHECK(m.stable);
        CHECK(m.delta <= 1.0);
    }
    {
        const auto v = field("x - 5", "y");
        const std::vector<CriticalPoint> cps{at({5, 0})};
        const auto m = vanishing_cycle_count(v, cps[0], cps);
        CHECK(m.failed);
        CHECK_FALSE(m.stable);
        CHECK(m.error.find("DeltaCollapse") != std::string::npos);
    }
}

TEST_CASE("submersion_check examples") {
    const std::vector<double> sweep{0.01, 0.1, 0.5};
    CHECK(submersion_check(field("x", "y"), at({0, 0}), 2.0, sweep).ok);
    CHECK(submersion_check(field("x^2 - y^2", "2*x*y"), at({0, 0}), 2.0, sweep).ok);
    CHECK(submersion_check(field("y", "-x"), at({0, 0}), 2.0, sweep).ok);
    // P = x^2 has a critical line x = 0 crossing every fiber.
    const auto r = submersion_check(field("x^2", "y"), at({0, 0}), 1.0, sweep);
    CHECK_FALSE(r.ok);
    REQUIRE(r.witness.has_value());
    CHECK(std::abs(r.witness->x) < 1e-2);
}

TEST_CASE("fiber svg") {
    std::ostringstream os;
    write_fiber_svg(os, extract_fiber(field("x", "y"), at({0, 0}), 2.0, 1.0));
    const std::string s = os.str();
    CHECK(s.find("<svg") != std::string::npos);
    CHECK(s.find("</svg>") != std::string::npos);
}
