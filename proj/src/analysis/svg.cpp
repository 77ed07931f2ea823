#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "cyclebound/analysis/analysis.hpp"
#include "cyclebound/errors.hpp"
#include "cyclebound/svg.hpp"

namespace cyclebound::analysis {

namespace {

const char* stability_color(cycles::Stability s) {
    switch (s) {
    case cycles::Stability::attracting: return "#1a7f37";
    case cycles::Stability::repelling: return "#cf222e";
    case cycles::Stability::semi_stable: return "#9a6700";
    }
    return "#000000";
}

// Pieces of a trajectory that stay inside the box.
std::vector<Polyline> clipped(const std::vector<Point>& pts, Point lo, Point hi) {
    std::vector<Polyline> out(1);
    for (const Point& p : pts) {
        if (p.x < lo.x || p.x > hi.x || p.y < lo.y || p.y > hi.y) {
            if (!out.back().empty()) out.emplace_back();
            continue;
        }
        out.back().push_back(p);
    }
    std::erase_if(out, [](const Polyline& l) { return l.size() < 2; });
    return out;
}

} // namespace

void write_phase_portrait(std::ostream& os, const VectorField& v, const AnalysisReport& r,
                          const AnalysisConfig& cfg) {
    const Point lo{v.box_x_lo(), v.box_y_lo()}, hi{v.box_x_hi(), v.box_y_hi()};
    SvgCanvas canvas(lo, hi, 800);
    canvas.rect_outline(lo, hi, "#444444");

    ode::IntegrateOptions loose;
    loose.tol = {1e-6, 1e-9};
    constexpr int kSeeds = 12;
    constexpr double kSpan = 4.0;
    for (int j = 0; j < kSeeds; ++j)
        for (int i = 0; i < kSeeds; ++i) {
            const Point x0{lo.x + (hi.x - lo.x) * (i + 0.5) / kSeeds, lo.y + (hi.y - lo.y) * (j + 0.5) / kSeeds};
            const auto tr = ode::integrate(v, x0, kSpan, loose);
            if (tr.size() < 2) continue;
            std::vector<Point> pts;
            const int n = 200;
            for (int k = 0; k <= n; ++k) pts.push_back(tr.dense(tr.t_begin() + (tr.t_end() - tr.t_begin()) * k / n));
            for (const auto& piece : clipped(pts, lo, hi)) canvas.polyline(piece, "#8c959f", 0.6, "none", 0.7);
        }

    for (std::size_t i = 0; i < r.milnor.size() && i < r.critical_points.size(); ++i) {
        const auto& m = r.milnor[i];
        if (m.failed || m.eta_sweep.empty()) continue;
        critfind::CriticalPoint cp;
        cp.id = r.critical_points[i].id;
        cp.location = r.critical_points[i].location;
        Polyline ball;
        for (int k = 0; k <= 128; ++k) {
            const double a = 2.0 * std::numbers::pi * k / 128;
            ball.push_back(cp.location + m.delta * Point{std::cos(a), std::sin(a)});
        }
        ball.back() = ball.front();
        canvas.polyline(ball, "#d0d7de", 0.8);
        try {
            const auto f = milnor::extract_fiber(v, cp, m.delta, m.eta_sweep.back(), cfg.milnor);
            for (const auto& c : f.components)
                canvas.polyline(c.vertices, "#8250df", 1.2, c.closed ? "#c297ff" : "none", 0.5);
        } catch (const Error&) {
        }
    }

    for (const auto& c : r.detected) canvas.polyline(c.points, stability_color(c.stability), 2.2);

    for (const auto& cp : r.critical_points) {
        const char* color = cp.index > 0 ? "#0969da" : (cp.index < 0 ? "#cf222e" : "#000000");
        canvas.circle(cp.location, 4.0, color);
    }
    canvas.text(lo + Point{0.02 * (hi.x - lo.x), 0.97 * (hi.y - lo.y)},
                r.system_name + "  B = " + std::to_string(r.bound) + ", detected = " +
                    std::to_string(r.detected.size()) + ", " + verdict_name(r.verdict));
    canvas.write(os);
}

} // namespace cyclebound::analysis
