#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "cyclebound/cycledetect/cycledetect.hpp"
#include "cyclebound/errors.hpp"
#include "cyclebound/polyalg/parser.hpp"
#include "support/oracles.hpp"

using namespace cyclebound;
using namespace cyclebound::cycles;
using polyalg::parse_poly;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kVdpPeriod = 6.663286859323;  // RK4 oracle, see test_odeflow

VectorField field(const char* p, const char* q) { return VectorField(parse_poly(p), parse_poly(q)); }

VectorField corpus(const std::string& name) { return polyalg::load_vector_field(std::string(CORPUS_DIR) + "/" + name + ".vf"); }

struct Run {
    VectorField v;
    std::vector<CriticalPoint> cps;
    std::vector<LimitCycle> cycles;
};

const Run& detected(const std::string& name) {
    static std::map<std::string, Run> cache;
    auto it = cache.find(name);
    if (it == cache.end()) {
        const auto v = corpus(name);
        auto cps = critfind::find_critical_points(v);
        auto cyc = detect_limit_cycles(v, cps);
        it = cache.emplace(name, Run{v, std::move(cps), std::move(cyc)}).first;
    }
    return it->second;
}

const std::vector<std::string> kCyclic = {"cubic_one_cycle", "van_der_pol", "two_cycle", "linear_center", "radial", "rotation", "saddle_pair"};

Polyline circle(double r, int n = 256) {
    Polyline p;
    for (int k = 0; k <= n; ++k) p.push_back(r * Point{std::cos(kTwoPi * k / n), std::sin(kTwoPi * k / n)});
    p.back() = p.front();
    return p;
}

LimitCycle circle_cycle(double r) {
    LimitCycle c;
    c.points = circle(r);
    c.period = kTwoPi;
    return c;
}

CriticalPoint cp_at(Point p, int id = 0) {
    CriticalPoint cp;
    cp.id = id;
    cp.location = p;
    return cp;
}

} // namespace

TEST_CASE("cubic system: one attracting unit circle") {
    const auto& r = detected("cubic_one_cycle");
    REQUIRE(r.cycles.size() == 1);
    const auto& c = r.cycles[0];
    CHECK(c.stability == Stability::attracting);
    CHECK(std::abs(c.period - kTwoPi) <= 1e-6);
    CHECK(hausdorff(c.points, circle(1.0, 4096)) <= 1e-4);
    // Polar form r' = r(1 - r^2): return derivative exp(-2 * 2 pi).
    CHECK(c.return_derivative == doctest::Approx(std::exp(-4.0 * std::numbers::pi)).epsilon(1e-4));
    CHECK(c.enclosed_cp_ids == std::vector<int>{0});
}

TEST_CASE("linear center has no limit cycles") {
    CHECK(detected("linear_center").cycles.empty());
    CHECK(detected("rotation").cycles.empty());
    CHECK(detected("radial").cycles.empty());
}

TEST_CASE("Van der Pol: one attracting cycle") {
    const auto& r = detected("van_der_pol");
    REQUIRE(r.cycles.size() == 1);
    CHECK(std::abs(r.cycles[0].period - kVdpPeriod) <= 1e-3);
    CHECK(r.cycles[0].stability == Stability::attracting);
    CHECK(r.cycles[0].return_derivative < 1.0);
}

TEST_CASE("two-cycle system: inner attracting, outer repelling") {
    const auto& r = detected("two_cycle");
    REQUIRE(r.cycles.size() == 2);
    CHECK(std::abs(r.cycles[0].mean_radius - 1.0) <= 1e-3);
    CHECK(std::abs(r.cycles[1].mean_radius - 2.0) <= 1e-3);
    CHECK(r.cycles[0].stability == Stability::attracting);
    CHECK(r.cycles[1].stability == Stability::repelling);
    CHECK(hausdorff(r.cycles[0].points, circle(1.0, 4096)) <= 1e-3);
    CHECK(hausdorff(r.cycles[1].points, circle(2.0, 4096)) <= 1e-3);
}

TEST_CASE("return_map examples") {
    const auto rot = field("-y", "x");
    const auto s = ode::Section::make({1.0, 0.0}, {0.0, 1.0}, 1.0);
    const auto r = return_map(rot, s, {1, 0});
    CHECK(distance(r.x_next, {1, 0}) < 1e-8);
    CHECK(r.t_return == doctest::Approx(kTwoPi).epsilon(1e-9));

    CHECK_THROWS_AS(return_map(field("x", "y"), s, {1, 0}), NoReturn);

    // Fixed point of the Van der Pol section map from the RK4 oracle.
    const auto vdp = field("y", "(1 - x^2)*y - x");
    auto f = [&](Point x) { return vdp(x); };
    const auto times = oracle::rk4_downward_crossings(f, {2, 0}, 60.0, 5e-4);
    REQUIRE(times.size() >= 5);
    const Point star = oracle::rk4_flow(f, {2, 0}, times.back(), 5e-4);
    CHECK(std::abs(star.y) < 1e-9);
    const auto sec = ode::Section::make({2.5, 0.0}, {0.0, -1.0}, 2.5);
    for (const double x : {1.5, 2.3, 3.0}) {
        const auto m = return_map(vdp, sec, {x, 0});
        CHECK(std::abs(m.x_next.x - star.x) < std::abs(x - star.x));
    }
    const auto fixed = return_map(vdp, sec, star);
    CHECK(std::abs(fixed.x_next.x - star.x) < 1e-8);
    CHECK(fixed.t_return == doctest::Approx(kVdpPeriod).epsilon(1e-8));
}

TEST_CASE("enclosure_matrix examples") {
    const std::vector<LimitCycle> cyc{circle_cycle(1.0)};
    const std::vector<CriticalPoint> cps{cp_at({0, 0}, 0), cp_at({5, 5}, 1)};
    const auto m = enclosure_matrix(cyc, cps);
    REQUIRE(m.size() == 1);
    CHECK(m[0] == std::vector<int>{1, 0});
    const std::vector<CriticalPoint> on{cp_at({1, 0})};
    CHECK_THROWS_AS(enclosure_matrix(cyc, on), PointOnCycle);
}

TEST_CASE("fiber_residence examples") {
    const auto rot = field("-y", "x");
    const auto a = fiber_residence(circle_cycle(0.7), rot, cp_at({0, 0}));
    CHECK(a.mean_speed == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(a.relative_variation < 1e-9);

    const auto& cubic = detected("cubic_one_cycle");
    const auto b = fiber_residence(cubic.cycles.at(0), cubic.v, cubic.cps.at(0));
    CHECK(b.mean_speed == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(b.relative_variation < 1e-6);

    const auto& vdp = detected("van_der_pol");
    const auto c = fiber_residence(vdp.cycles.at(0), vdp.v, vdp.cps.at(0));
    CHECK(c.relative_variation > 0.1);
}

TEST_CASE("cycle_class_map examples") {
    milnor::FiberCurve f;
    f.delta = 2.0;
    milnor::Component comp;
    comp.closed = true;
    comp.vertices = circle(1.0);
    f.components.push_back(comp);
    const auto same = cycle_class_map(circle_cycle(1.0), f);
    REQUIRE(same.component_index.has_value());
    CHECK(*same.component_index == 0);
    CHECK(same.hausdorff < 1e-12);

    LimitCycle far = circle_cycle(1.0);
    for (auto& p : far.points) p = p + Point{10, 0};
    const auto out = cycle_class_map(far, f);
    CHECK(out.hausdorff > f.delta);

    const auto& cubic = detected("cubic_one_cycle");
    const auto m = milnor::vanishing_cycle_count(cubic.v, cubic.cps[0], cubic.cps);
    REQUIRE(m.delta > 1.0);
    const auto fiber = milnor::extract_fiber(cubic.v, cubic.cps[0], m.delta, 1.0);
    const auto matched = cycle_class_map(cubic.cycles[0], fiber);
    REQUIRE(matched.component_index.has_value());
    CHECK(matched.hausdorff < 1e-2);
}

TEST_CASE("property: closure residual and enclosure across the corpus") {
    int total = 0;
    for (const std::string& name : kCyclic) {
        const auto& r = detected(name);
        for (const auto& c : r.cycles) {
            ++total;
            INFO(name);
            CHECK(c.closure_residual <= 1e-8);
            CHECK_FALSE(c.enclosed_cp_ids.empty());
            int sum = 0;
            for (const int id : c.enclosed_cp_ids) sum += r.cps.at(static_cast<std::size_t>(id)).index;
            CHECK(sum == 1);
            const auto m = enclosure_matrix(std::vector<LimitCycle>{c}, r.cps);
            int row = 0;
            for (const int w : m[0]) row += w;
            CHECK(row >= 1);
            CHECK(c.points.front() == c.points.back());
        }
    }
    CHECK(total == 4);
}

TEST_CASE("property: stability labels match perturbed behaviour") {
    for (const std::string name : {"cubic_one_cycle", "van_der_pol", "two_cycle"}) {
        const auto& r = detected(name);
        for (const auto& c : r.cycles) {
            // Attracting cycles pull in forward time, repelling ones backward.
            // Distance is read off a transversal through a cycle vertex.
            const VectorField flow = c.stability == Stability::repelling ? r.v.reversed() : r.v;
            const Point p0 = c.points[0];
            const Point dir = flow(p0);
            const auto sec = ode::Section::make(p0, (1.0 / norm(dir)) * dir, 0.1);
            for (const double side : {1.0, -1.0}) {
                Point x = sec.at(1e-3 * side);
                double prev = 1e-3;
                INFO(name << " cycle r=" << c.mean_radius << " side " << side);
                for (int k = 1; k <= 3; ++k) {
                    x = return_map(flow, sec, x, 3.0 * c.period, {1e-12, 1e-14}).x_next;
                    const double d = std::abs(sec.coordinate(x));
                    INFO("return " << k << ": " << d);
                    // Below the closure tolerance the orbit sits on the cycle
                    // as well as the cycle itself is known.
                    CHECK((d < prev || d <= CycleConfig{}.closure_tol));
                    prev = d;
                }
            }
        }
    }
}

TEST_CASE("property: detection is idempotent") {
    for (const std::string name : {"cubic_one_cycle", "two_cycle"}) {
        const auto& r = detected(name);
        CHECK(detect_limit_cycles(r.v, r.cps) == r.cycles);
    }
}

TEST_CASE("polylines are counterclockwise") {
    for (const std::string name : {"cubic_one_cycle", "van_der_pol", "two_cycle"})
        for (const auto& c : detected(name).cycles) CHECK(winding_number(c.points, vertex_centroid(c.points)) == 1);
}
