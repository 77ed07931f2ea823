#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "cyclebound/analysis/analysis.hpp"
#include "cyclebound/polyalg/parser.hpp"
#include "support/generators.hpp"

using namespace cyclebound;
using namespace cyclebound::analysis;
using polyalg::parse_poly;

namespace {

VectorField field(const char* p, const char* q) { return VectorField(parse_poly(p), parse_poly(q)); }

VectorField corpus(const std::string& name) { return polyalg::load_vector_field(std::string(CORPUS_DIR) + "/" + name + ".vf"); }

const AnalysisReport& report(const std::string& name) {
    static std::map<std::string, AnalysisReport> cache;
    auto it = cache.find(name);
    if (it == cache.end()) it = cache.emplace(name, compare(corpus(name))).first;
    return it->second;
}

MilnorData entry(int id, int l, bool stable, bool failed = false, bool extraction_failed = false) {
    MilnorData m;
    m.point_id = id;
    m.l = l;
    m.stable = stable;
    m.failed = failed;
    if (failed) m.error = "DeltaCollapse: synthetic";
    milnor::SweepEntry e;
    e.closed_count = l;
    e.failed = extraction_failed;
    m.counts_per_eta.assign(4, e);
    return m;
}

} // namespace

TEST_CASE("verdict is a pure function of (milnor, detected)") {
    struct Row {
        std::vector<MilnorData> milnor;
        std::size_t detected;
        Verdict expected;
    };
    const std::vector<Row> table{
        {{}, 0, Verdict::inequality_holds},
        {{}, 1, Verdict::inequality_violated},
        {{entry(0, 1, true)}, 0, Verdict::inequality_holds},
        {{entry(0, 1, true)}, 1, Verdict::inequality_holds},
        {{entry(0, 1, true)}, 2, Verdict::inequality_violated},
        {{entry(0, 1, true), entry(1, 2, true)}, 3, Verdict::inequality_holds},
        {{entry(0, 1, true), entry(1, 2, true)}, 4, Verdict::inequality_violated},
        {{entry(0, 1, true), entry(1, 2, false)}, 0, Verdict::inconclusive},
        {{entry(0, 1, true, true)}, 0, Verdict::inconclusive},
        {{entry(0, 1, true, false, true)}, 0, Verdict::inconclusive},
        {{entry(0, 0, true)}, 0, Verdict::inequality_holds},
        {{entry(0, 0, true)}, 1, Verdict::inequality_violated},
    };
    for (std::size_t k = 0; k < table.size(); ++k) {
        INFO("row " << k);
        const auto a = verdict(table[k].milnor, table[k].detected);
        const auto b = verdict(table[k].milnor, table[k].detected);
        CHECK(a.verdict == table[k].expected);
        CHECK(a.reasons == b.reasons);
        CHECK(a.reasons.empty() == (a.verdict != Verdict::inconclusive));
    }
    for (const auto v : {Verdict::inequality_holds, Verdict::inequality_violated, Verdict::inconclusive})
        CHECK(verdict_from_name(verdict_name(v)) == v);
}

TEST_CASE("bound_from sums stable entries") {
    const std::vector<MilnorData> m{entry(0, 1, true), entry(1, 3, false), entry(2, 2, true)};
    CHECK(bound_from(m) == 3);
}

TEST_CASE("homology_bound examples") {
    for (const auto& v : {field("-y", "x"), field("x", "y")}) {
        const auto b = homology_bound(v);
        CHECK(b.critical_points.size() == 1);
        REQUIRE(b.milnor.size() == 1);
        CHECK(b.milnor[0].l == 1);
        CHECK(b.bound == 1);
    }
    const auto vdp = homology_bound(corpus("van_der_pol"));
    CHECK(vdp.critical_points.size() == 1);
    CHECK(vdp.bound == 1);
}

TEST_CASE("compare examples") {
    const auto& cubic = report("cubic_one_cycle");
    CHECK(cubic.detected.size() == 1);
    CHECK(cubic.bound >= 1);
    CHECK(cubic.verdict == Verdict::inequality_holds);

    const auto& center = report("linear_center");
    CHECK(center.detected.empty());
    CHECK(center.bound == 1);
    CHECK(center.verdict == Verdict::inequality_holds);
    CHECK(center.detected.size() < static_cast<std::size_t>(center.bound));

    // Two cycles against a bound from a single nondegenerate focus; the
    // comparison outcome is the recorded result.
    const auto& two = report("two_cycle");
    CHECK(two.detected.size() == 2);
    CHECK(two.bound == 1);
    CHECK(two.verdict == Verdict::inequality_violated);

    const auto zero = compare(corpus("zero_curve"));
    CHECK(zero.verdict == Verdict::inconclusive);
    REQUIRE_FALSE(zero.reasons.empty());
    CHECK(zero.reasons[0].find("DepthLimitExceeded") != std::string::npos);

    const auto& deg = report("degenerate");
    CHECK_FALSE(deg.equality_hypothesis.submersion_ok_all);
    CHECK(deg.equality_hypothesis.failed_at == std::vector<int>{0});
}

TEST_CASE("property: report bound equals the recomputed sum") {
    for (const std::string name : {"cubic_one_cycle", "linear_center", "two_cycle", "degenerate"}) {
        const auto& r = report(name);
        int sum = 0;
        for (const auto& m : r.milnor)
            if (m.stable) sum += m.l;
        CHECK(r.bound == sum);
        CHECK(r.verdict == verdict(r.milnor, r.detected.size()).verdict);
    }
}

TEST_CASE("property: report JSON round-trips") {
    for (const std::string name : {"cubic_one_cycle", "two_cycle", "degenerate"}) {
        AnalysisReport r = report(name);
        r.timestamp = "2026-01-01T00:00:00Z";
        r.figures = {"portrait.svg"};
        const Json j = to_json(r);
        CHECK(report_from_json(j) == r);
        CHECK(report_from_json(Json::parse(j.dump())) == r);
        CHECK(to_json(report_from_json(j)).dump() == j.dump());
    }
    const auto zero = compare(corpus("zero_curve"));
    CHECK(report_from_json(to_json(zero)) == zero);
}

TEST_CASE("report JSON schema fields") {
    const Json j = to_json(report("cubic_one_cycle"), false);
    for (const char* key : {"system_name", "config_echo", "critical_points", "milnor", "bound", "detected", "verdict",
                            "equality_hypothesis", "diagnostics"})
        CHECK(j.contains(key));
    CHECK_FALSE(j.contains("timestamp"));
    CHECK(j["verdict"] == "inequality_holds");
    CHECK(j["detected"][0]["enclosure_row"] == Json::array({1}));
}

TEST_CASE("morsify examples") {
    const auto v = corpus("van_der_pol");
    CHECK(morsify(v, 0.0, 7) == v);
    CHECK(morsify(v, 1e-3, 7) == morsify(v, 1e-3, 7));
    CHECK_FALSE(morsify(v, 1e-3, 7) == morsify(v, 1e-3, 8));
    const auto m = morsify(v, 1e-3, 7);
    CHECK(m.p().degree() == v.p().degree());
    CHECK(m.box() == v.box());
    // Only constant and linear coefficients move, each by at most s.
    const auto d = m.p() - v.p();
    CHECK(d.degree() <= 1);
    for (const auto& [e, c] : d.terms()) CHECK(abs(c) <= polyalg::Rational(1, 1000));

    const auto deg = field("x^2", "y");
    for (const std::uint64_t seed : {1, 2, 3, 4, 5}) {
        const auto cps = critfind::find_critical_points(morsify(deg, 1e-3, seed));
        for (const auto& cp : cps) CHECK(cp.nondegenerate);
    }
}

TEST_CASE("morsification invariance on the degenerate demo") {
    const auto rows = morsification_invariance(field("x^2", "y"), std::vector<double>{1e-3, 1e-2},
                                               std::vector<std::uint64_t>{1, 2, 3});
    REQUIRE(rows.size() == 7);
    CHECK(rows[0].s == 0.0);
    CHECK(rows[0].k == 1);
    CHECK_FALSE(rows[0].any_change());
    for (std::size_t i = 1; i < rows.size(); ++i) {
        INFO("s " << rows[i].s << " seed " << rows[i].seed);
        CHECK(rows[i].k_changed);
        CHECK((rows[i].k == 0 || rows[i].k == 2));
        CHECK(rows[i].bound == rows[i].k);
    }
    const Json j = to_json(rows);
    CHECK(j.size() == 7);
}

TEST_CASE("property: scaling V by c preserves the analysis") {
    const auto v = corpus("cubic_one_cycle");
    const auto& base = report("cubic_one_cycle");
    for (const double c : {0.5, 2.0}) {
        const auto cr = polyalg::to_rational(c);
        const VectorField w(v.p() * cr, v.q() * cr, v.name(), v.box());
        const auto r = compare(w);
        INFO("c = " << c);
        REQUIRE(r.critical_points.size() == base.critical_points.size());
        for (std::size_t i = 0; i < r.critical_points.size(); ++i)
            CHECK(distance(r.critical_points[i].location, base.critical_points[i].location) < 1e-9);
        REQUIRE(r.milnor.size() == base.milnor.size());
        for (std::size_t i = 0; i < r.milnor.size(); ++i) CHECK(r.milnor[i].l == base.milnor[i].l);
        CHECK(r.bound == base.bound);
        REQUIRE(r.detected.size() == base.detected.size());
        for (std::size_t i = 0; i < r.detected.size(); ++i) {
            CHECK(hausdorff(r.detected[i].points, base.detected[i].points) < 1e-4);
            CHECK(r.detected[i].period == doctest::Approx(base.detected[i].period / c).epsilon(1e-6));
        }
        CHECK(r.verdict == base.verdict);
    }
}

TEST_CASE("phase portrait renders") {
    std::ostringstream os;
    write_phase_portrait(os, corpus("cubic_one_cycle"), report("cubic_one_cycle"));
    const std::string s = os.str();
    CHECK(s.find("<svg") != std::string::npos);
    CHECK(s.find("</svg>") != std::string::npos);
}
