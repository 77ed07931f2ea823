#include "cyclebound/analysis/analysis.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "cyclebound/errors.hpp"
#include "cyclebound/parallel.hpp"

namespace cyclebound::analysis {

using polyalg::Poly2;
using polyalg::Rational;

const char* verdict_name(Verdict v) {
    switch (v) {
    case Verdict::inequality_holds: return "inequality_holds";
    case Verdict::inequality_violated: return "inequality_violated";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

Verdict verdict_from_name(const std::string& s) {
    if (s == "inequality_holds") return Verdict::inequality_holds;
    if (s == "inequality_violated") return Verdict::inequality_violated;
    if (s == "inconclusive") return Verdict::inconclusive;
    throw InvalidArgument("unknown verdict '" + s + "'");
}

Json config_echo(const AnalysisConfig& cfg) {
    Json j;
    j["critfind"] = {
        {"residual_tol", cfg.solve.residual_tol},
        {"degeneracy_tol", cfg.solve.degeneracy_tol},
        {"max_depth", cfg.solve.max_depth},
        {"resolution_tol", cfg.solve.resolution_tol},
        {"max_live_boxes", cfg.solve.max_live_boxes},
    };
    const auto& m = cfg.milnor;
    j["milnorfiber"] = {
        {"grid", m.grid},
        {"max_grid", m.max_grid},
        {"sweep_len", m.sweep_len},
        {"stable_tail", m.stable_tail},
        {"delta_cap", m.delta_cap},
        {"submersion_tol", m.submersion_tol},
        {"eta_span", m.eta_span},
        {"sphere_samples", m.sphere_samples},
        {"tangency_tol", m.tangency_tol},
    };
    const auto& c = cfg.cycles;
    j["cycledetect"] = {
        {"rays", c.rays},
        {"radii", c.radii},
        {"grid_seeds", c.grid_seeds},
        {"t_horizon", c.t_horizon},
        {"seed_rtol", c.seed_tol.rtol},
        {"seed_atol", c.seed_tol.atol},
        {"refine_rtol", c.refine_tol.rtol},
        {"refine_atol", c.refine_tol.atol},
        {"dedup_tol", c.dedup_tol},
        {"isolation_tol", c.isolation_tol},
        {"ratio_tol", c.ratio_tol},
        {"noise_floor", c.noise_floor},
        {"closure_tol", c.closure_tol},
        {"perturbation", c.perturbation},
        {"polyline_points", c.polyline_points},
    };
    j["seed"] = cfg.seed;
    return j;
}

int bound_from(std::span<const MilnorData> milnor) {
    int b = 0;
    for (const auto& m : milnor)
        if (!m.failed && m.stable) b += m.l;
    return b;
}

VerdictResult verdict(std::span<const MilnorData> milnor, std::size_t detected) {
    VerdictResult r;
    for (const auto& m : milnor) {
        const std::string id = "point " + std::to_string(m.point_id);
        if (m.failed) r.reasons.push_back(id + ": " + m.error);
        else if (m.any_extraction_failed()) r.reasons.push_back(id + ": fiber extraction failed in the sweep");
        else if (!m.stable) r.reasons.push_back(id + ": closed-component count not stable across the sweep");
    }
    if (!r.reasons.empty()) {
        r.verdict = Verdict::inconclusive;
        return r;
    }
    const auto b = static_cast<std::size_t>(bound_from(milnor));
    r.verdict = detected <= b ? Verdict::inequality_holds : Verdict::inequality_violated;
    return r;
}

BoundResult homology_bound(const VectorField& v, const AnalysisConfig& cfg) {
    BoundResult out;
    out.critical_points = critfind::find_critical_points(v, cfg.solve);
    const auto& cps = out.critical_points;
    out.milnor.resize(cps.size());
    parallel_for(cps.size(), cfg.threads,
                 [&](std::size_t i) { out.milnor[i] = milnor::vanishing_cycle_count(v, cps[i], cps, cfg.milnor); });
    out.bound = bound_from(out.milnor);
    return out;
}

CpSummary summarize(const CriticalPoint& cp) {
    CpSummary s;
    s.id = cp.id;
    s.location = cp.location;
    s.det = cp.jacobian.det();
    s.trace = cp.jacobian.trace();
    s.nondegenerate = cp.nondegenerate;
    s.index = cp.index;
    s.certified = cp.certified;
    s.on_boundary = cp.on_boundary;
    s.residual = cp.residual;
    return s;
}

bool operator==(const AnalysisReport& a, const AnalysisReport& b) {
    return a.system_name == b.system_name && a.config_echo == b.config_echo &&
           a.critical_points == b.critical_points && a.milnor == b.milnor && a.bound == b.bound &&
           a.detected == b.detected && a.enclosure == b.enclosure && a.verdict == b.verdict &&
           a.reasons == b.reasons && a.equality_hypothesis == b.equality_hypothesis &&
           a.residence == b.residence && a.class_map == b.class_map && a.notes == b.notes &&
           a.figures == b.figures && a.timestamp == b.timestamp;
}

AnalysisReport compare(const VectorField& v, const AnalysisConfig& cfg) {
    AnalysisReport r;
    r.system_name = v.name().value_or("unnamed");
    r.config_echo = config_echo(cfg);

    BoundResult b;
    try {
        b = homology_bound(v, cfg);
    } catch (const Error& e) {
        r.verdict = Verdict::inconclusive;
        r.reasons.push_back(std::string("critfind: ") + e.what());
        return r;
    }
    const auto& cps = b.critical_points;
    for (const auto& cp : cps) r.critical_points.push_back(summarize(cp));
    r.milnor = b.milnor;
    r.bound = b.bound;
    for (std::size_t i = 0; i < cps.size(); ++i) {
        const auto& m = r.milnor[i];
        if (cps[i].nondegenerate && !m.failed && m.l != 1)
            r.notes.push_back("point " + std::to_string(cps[i].id) + " is nondegenerate but l = " + std::to_string(m.l));
        if (!m.submersion_ok) {
            r.equality_hypothesis.submersion_ok_all = false;
            r.equality_hypothesis.failed_at.push_back(m.point_id);
        }
    }

    cycles::CycleConfig ccfg = cfg.cycles;
    ccfg.threads = cfg.threads;
    r.detected = cycles::detect_limit_cycles(v, cps, ccfg, &r.notes);
    try {
        r.enclosure = cycles::enclosure_matrix(r.detected, cps);
    } catch (const Error& e) {
        r.notes.push_back(e.what());
    }

    for (std::size_t c = 0; c < r.detected.size(); ++c) {
        const auto& lc = r.detected[c];
        for (const int id : lc.enclosed_cp_ids) {
            const auto it = std::find_if(cps.begin(), cps.end(), [&](const CriticalPoint& p) { return p.id == id; });
            const auto& cp = *it;
            const auto& m = r.milnor[static_cast<std::size_t>(it - cps.begin())];
            const auto res = cycles::fiber_residence(lc, v, cp);
            r.residence.push_back({static_cast<int>(c), id, res.mean_speed, res.relative_variation});

            ClassRow row;
            row.cycle = static_cast<int>(c);
            row.cp_id = id;
            row.eta = res.mean_speed;
            double reach = 0.0;
            for (const Point& x : lc.points) reach = std::max(reach, distance(x, cp.location));
            row.in_tube = !m.failed && reach <= m.delta;
            if (m.failed) {
                row.error = m.error;
            } else if (row.in_tube) {
                try {
                    const auto fiber = milnor::extract_fiber(v, cp, m.delta, row.eta, cfg.milnor);
                    const auto match = cycles::cycle_class_map(lc, fiber);
                    row.component_index = match.component_index;
                    if (match.component_index) row.hausdorff = match.hausdorff;
                } catch (const Error& e) {
                    row.error = e.what();
                }
            }
            r.class_map.push_back(std::move(row));
        }
    }

    const auto vr = verdict(r.milnor, r.detected.size());
    r.verdict = vr.verdict;
    r.reasons = vr.reasons;
    return r;
}

namespace {

// Uniform dyadic rational in [-1, 1) from the top 53 bits of one draw.
Rational draw_coefficient(std::mt19937_64& gen) {
    const std::uint64_t k = gen() >> 11;
    mpz_class num;
    mpz_import(num.get_mpz_t(), 1, 1, sizeof(k), 0, 0, &k);
    Rational q(2 * num - (mpz_class(1) << 53), mpz_class(1) << 53);
    q.canonicalize();
    return q;
}

} // namespace

VectorField morsify(const VectorField& v, double s, std::uint64_t seed) {
    if (!(s >= 0.0)) throw InvalidArgument("morsification parameter must be nonnegative");
    if (s == 0.0) return v;
    std::mt19937_64 gen(seed);
    Rational c[6];
    for (auto& x : c) x = draw_coefficient(gen);
    const Rational sr = polyalg::to_rational(s);
    const Poly2 dp = Poly2(c[0]) + c[1] * Poly2::x() + c[2] * Poly2::y();
    const Poly2 dq = Poly2(c[3]) + c[4] * Poly2::x() + c[5] * Poly2::y();
    return VectorField(v.p() + sr * dp, v.q() + sr * dq, v.name(), v.box());
}

std::vector<MorsifyRow> morsification_invariance(const VectorField& v, std::span<const double> s_values,
                                                 std::span<const std::uint64_t> seeds, const AnalysisConfig& cfg) {
    struct Job {
        double s;
        std::uint64_t seed;
    };
    std::vector<Job> jobs{{0.0, 0}};
    for (const double s : s_values)
        for (const auto seed : seeds) jobs.push_back({s, seed});

    std::vector<MorsifyRow> rows(jobs.size());
    cycles::CycleConfig ccfg = cfg.cycles;
    ccfg.threads = cfg.threads;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        MorsifyRow& row = rows[i];
        row.s = jobs[i].s;
        row.seed = jobs[i].seed;
        try {
            const VectorField w = morsify(v, jobs[i].s, jobs[i].seed);
            const BoundResult b = homology_bound(w, cfg);
            row.k = static_cast<int>(b.critical_points.size());
            row.bound = b.bound;
            row.submersion_ok_all =
                std::all_of(b.milnor.begin(), b.milnor.end(), [](const MilnorData& m) { return m.submersion_ok; });
            row.detected = static_cast<int>(cycles::detect_limit_cycles(w, b.critical_points, ccfg).size());
        } catch (const Error& e) {
            row.error = e.what();
        }
    }
    for (std::size_t i = 1; i < rows.size(); ++i) {
        rows[i].k_changed = rows[i].k != rows[0].k;
        rows[i].bound_changed = rows[i].bound != rows[0].bound;
        rows[i].detected_changed = rows[i].detected != rows[0].detected;
    }
    return rows;
}

} // namespace cyclebound::analysis
