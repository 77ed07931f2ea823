#include <cmath>

#include "cyclebound/analysis/analysis.hpp"
#include "cyclebound/errors.hpp"

namespace cyclebound::analysis {

namespace {

Json point_json(Point p) { return Json::array({p.x, p.y}); }
Point point_from(const Json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

Json polyline_json(const Polyline& pts) {
    Json a = Json::array();
    for (const Point& p : pts) a.push_back(point_json(p));
    return a;
}

Polyline polyline_from(const Json& j) {
    Polyline out;
    for (const auto& p : j) out.push_back(point_from(p));
    return out;
}

template <class T>
Json optional_json(const std::optional<T>& v) {
    return v ? Json(*v) : Json(nullptr);
}

// Non-finite doubles have no JSON form; they are written as null.
Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }
double number_from(const Json& j) { return j.is_null() ? std::nan("") : j.get<double>(); }

cycles::Stability stability_from(const std::string& s) {
    if (s == "attracting") return cycles::Stability::attracting;
    if (s == "repelling") return cycles::Stability::repelling;
    if (s == "semi_stable") return cycles::Stability::semi_stable;
    throw InvalidArgument("unknown stability '" + s + "'");
}

Json cp_json(const CpSummary& s) {
    return Json{{"id", s.id},
                {"location", point_json(s.location)},
                {"det", s.det},
                {"trace", s.trace},
                {"nondegenerate", s.nondegenerate},
                {"index", s.index},
                {"certified", s.certified},
                {"on_boundary", s.on_boundary},
                {"residual", s.residual}};
}

CpSummary cp_from(const Json& j) {
    CpSummary s;
    s.id = j.at("id").get<int>();
    s.location = point_from(j.at("location"));
    s.det = j.at("det").get<double>();
    s.trace = j.at("trace").get<double>();
    s.nondegenerate = j.at("nondegenerate").get<bool>();
    s.index = j.at("index").get<int>();
    s.certified = j.at("certified").get<bool>();
    s.on_boundary = j.at("on_boundary").get<bool>();
    s.residual = j.at("residual").get<double>();
    return s;
}

MilnorData milnor_from(const Json& j) {
    MilnorData m;
    m.point_id = j.at("point_id").get<int>();
    m.delta = j.at("delta").get<double>();
    m.eta_max = j.at("eta_max").get<double>();
    m.eta_sweep = j.at("eta_sweep").get<std::vector<double>>();
    for (const auto& e : j.at("counts_per_eta")) {
        milnor::SweepEntry s;
        s.eta = e.at("eta").get<double>();
        s.closed_count = e.at("closed_count").get<int>();
        s.arc_count = e.at("arc_count").get<int>();
        s.grid = e.at("grid").get<int>();
        s.max_residual = e.at("max_residual").get<double>();
        s.failed = e.at("failed").get<bool>();
        s.error = e.at("error").get<std::string>();
        m.counts_per_eta.push_back(std::move(s));
    }
    m.l = j.at("l").get<int>();
    m.stable = j.at("stable").get<bool>();
    m.submersion_ok = j.at("submersion_ok").get<bool>();
    if (!j.at("witness").is_null()) m.witness = point_from(j.at("witness"));
    m.failed = j.at("failed").get<bool>();
    m.error = j.at("error").get<std::string>();
    return m;
}

LimitCycle cycle_from(const Json& j) {
    LimitCycle c;
    c.points = polyline_from(j.at("points"));
    c.period = j.at("period").get<double>();
    c.stability = stability_from(j.at("stability").get<std::string>());
    c.return_derivative = number_from(j.at("return_derivative"));
    c.enclosed_cp_ids = j.at("enclosed_cp_ids").get<std::vector<int>>();
    c.closure_residual = j.at("closure_residual").get<double>();
    c.anchor = point_from(j.at("anchor"));
    c.mean_radius = j.at("mean_radius").get<double>();
    return c;
}

} // namespace

Json to_json(const MilnorData& m) {
    Json counts = Json::array();
    for (const auto& e : m.counts_per_eta)
        counts.push_back({{"eta", e.eta},
                          {"closed_count", e.closed_count},
                          {"arc_count", e.arc_count},
                          {"grid", e.grid},
                          {"max_residual", e.max_residual},
                          {"failed", e.failed},
                          {"error", e.error}});
    return Json{{"point_id", m.point_id},
                {"delta", m.delta},
                {"eta_max", m.eta_max},
                {"eta_sweep", m.eta_sweep},
                {"counts_per_eta", counts},
                {"l", m.l},
                {"stable", m.stable},
                {"submersion_ok", m.submersion_ok},
                {"witness", m.witness ? point_json(*m.witness) : Json(nullptr)},
                {"failed", m.failed},
                {"error", m.error}};
}

Json to_json(const LimitCycle& c) {
    return Json{{"period", c.period},
                {"stability", cycles::stability_name(c.stability)},
                {"return_derivative", number(c.return_derivative)},
                {"enclosed_cp_ids", c.enclosed_cp_ids},
                {"closure_residual", c.closure_residual},
                {"anchor", point_json(c.anchor)},
                {"mean_radius", c.mean_radius},
                {"points", polyline_json(c.points)}};
}

Json to_json(const milnor::FiberCurve& f) {
    Json comps = Json::array();
    for (const auto& c : f.components)
        comps.push_back({{"closed", c.closed},
                         {"arc_endpoints_on_sphere", c.arc_endpoints_on_sphere},
                         {"vertices", polyline_json(c.vertices)}});
    const auto b = milnor::betti(f);
    return Json{{"center", point_json(f.center)},
                {"eta", f.eta},
                {"delta", f.delta},
                {"grid_resolution", f.grid_resolution},
                {"max_residual", f.max_residual},
                {"unresolved_cells", f.unresolved_cells},
                {"b0", b.b0},
                {"closed_count", b.closed_count},
                {"components", comps}};
}

Json to_json(const std::vector<MorsifyRow>& rows) {
    Json a = Json::array();
    for (const auto& r : rows)
        a.push_back({{"s", r.s},
                     {"seed", r.seed},
                     {"k", r.k},
                     {"bound", r.bound},
                     {"detected", r.detected},
                     {"submersion_ok_all", r.submersion_ok_all},
                     {"k_changed", r.k_changed},
                     {"bound_changed", r.bound_changed},
                     {"detected_changed", r.detected_changed},
                     {"error", r.error}});
    return a;
}

Json critical_points_json(std::span<const CriticalPoint> cps) {
    Json a = Json::array();
    for (const auto& cp : cps) a.push_back(cp_json(summarize(cp)));
    return a;
}

Json to_json(const AnalysisReport& r, bool with_timestamp) {
    Json j;
    j["system_name"] = r.system_name;
    j["config_echo"] = r.config_echo;
    Json cps = Json::array();
    for (const auto& c : r.critical_points) cps.push_back(cp_json(c));
    j["critical_points"] = cps;
    Json milnor = Json::array();
    for (const auto& m : r.milnor) milnor.push_back(to_json(m));
    j["milnor"] = milnor;
    j["bound"] = r.bound;
    Json detected = Json::array();
    for (std::size_t c = 0; c < r.detected.size(); ++c) {
        Json d = to_json(r.detected[c]);
        d["enclosure_row"] = c < r.enclosure.size() ? Json(r.enclosure[c]) : Json(nullptr);
        detected.push_back(std::move(d));
    }
    j["detected"] = detected;
    j["verdict"] = verdict_name(r.verdict);
    j["reasons"] = r.reasons;
    j["equality_hypothesis"] = {{"submersion_ok_all", r.equality_hypothesis.submersion_ok_all},
                                {"failed_at", r.equality_hypothesis.failed_at}};
    Json residence = Json::array();
    for (const auto& x : r.residence)
        residence.push_back({{"cycle", x.cycle},
                             {"cp_id", x.cp_id},
                             {"mean_speed", x.mean_speed},
                             {"relative_variation", x.relative_variation}});
    Json classes = Json::array();
    for (const auto& x : r.class_map)
        classes.push_back({{"cycle", x.cycle},
                           {"cp_id", x.cp_id},
                           {"eta", x.eta},
                           {"in_tube", x.in_tube},
                           {"component_index", optional_json(x.component_index)},
                           {"hausdorff", optional_json(x.hausdorff)},
                           {"error", x.error}});
    j["diagnostics"] = {{"fiber_residence", residence}, {"cycle_class_map", classes}};
    j["notes"] = r.notes;
    j["figures"] = r.figures;
    if (with_timestamp) j["timestamp"] = r.timestamp;
    return j;
}

AnalysisReport report_from_json(const Json& j) {
    AnalysisReport r;
    r.system_name = j.at("system_name").get<std::string>();
    r.config_echo = j.at("config_echo");
    for (const auto& c : j.at("critical_points")) r.critical_points.push_back(cp_from(c));
    for (const auto& m : j.at("milnor")) r.milnor.push_back(milnor_from(m));
    r.bound = j.at("bound").get<int>();
    bool have_rows = true;
    for (const auto& d : j.at("detected")) {
        r.detected.push_back(cycle_from(d));
        if (d.at("enclosure_row").is_null()) have_rows = false;
        else r.enclosure.push_back(d.at("enclosure_row").get<std::vector<int>>());
    }
    if (!have_rows) r.enclosure.clear();
    r.verdict = verdict_from_name(j.at("verdict").get<std::string>());
    r.reasons = j.at("reasons").get<std::vector<std::string>>();
    const auto& eh = j.at("equality_hypothesis");
    r.equality_hypothesis.submersion_ok_all = eh.at("submersion_ok_all").get<bool>();
    r.equality_hypothesis.failed_at = eh.at("failed_at").get<std::vector<int>>();
    const auto& diag = j.at("diagnostics");
    for (const auto& x : diag.at("fiber_residence"))
        r.residence.push_back({x.at("cycle").get<int>(), x.at("cp_id").get<int>(), x.at("mean_speed").get<double>(),
                               x.at("relative_variation").get<double>()});
    for (const auto& x : diag.at("cycle_class_map")) {
        ClassRow row;
        row.cycle = x.at("cycle").get<int>();
        row.cp_id = x.at("cp_id").get<int>();
        row.eta = x.at("eta").get<double>();
        row.in_tube = x.at("in_tube").get<bool>();
        if (!x.at("component_index").is_null()) row.component_index = x.at("component_index").get<int>();
        if (!x.at("hausdorff").is_null()) row.hausdorff = x.at("hausdorff").get<double>();
        row.error = x.at("error").get<std::string>();
        r.class_map.push_back(std::move(row));
    }
    r.notes = j.at("notes").get<std::vector<std::string>>();
    r.figures = j.at("figures").get<std::vector<std::string>>();
    if (j.contains("timestamp")) r.timestamp = j.at("timestamp").get<std::string>();
    return r;
}

} // namespace cyclebound::analysis
