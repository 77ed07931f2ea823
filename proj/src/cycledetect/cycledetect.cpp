#include "cyclebound/cycledetect/cycledetect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cyclebound/errors.hpp"
#include "cyclebound/parallel.hpp"

namespace cyclebound::cycles {

using ode::IntegrateOptions;
using ode::Section;
using ode::Trajectory;

const char* stability_name(Stability s) {
    switch (s) {
    case Stability::attracting: return "attracting";
    case Stability::repelling: return "repelling";
    case Stability::semi_stable: return "semi_stable";
    }
    return "?";
}

namespace {

// Half-line {p + (rho, 0) : 0 < rho < reach} around a critical point, crossed
// counterclockwise (orientation +1) or clockwise (-1).
struct HalfLine {
    Point p;
    double reach;
    int orientation;

    Section section() const {
        return Section::make(p + Point{0.5 * reach, 0.0}, {0.0, static_cast<double>(orientation)}, 0.5 * reach);
    }
    Point at(double rho) const { return p + Point{rho, 0.0}; }
};

struct Candidate {
    std::size_t line;
    bool backward;
    double rho;
    double period_guess;
};

IntegrateOptions options(const ode::Tolerance& tol) {
    IntegrateOptions o;
    o.tol = tol;
    return o;
}

// Geometric convergence of a crossing sequence; returns the extrapolated limit.
std::optional<double> converged_limit(const std::vector<double>& rho, const CycleConfig& cfg) {
    if (rho.size() < 3) return std::nullopt;
    std::vector<double> d;
    for (std::size_t k = 0; k + 1 < rho.size(); ++k) d.push_back(rho[k + 1] - rho[k]);
    auto noise = [&](std::size_t k) { return cfg.noise_floor * std::max(1.0, std::abs(rho[k + 1])); };
    if (!(std::abs(d[0]) > 100.0 * noise(0))) return std::nullopt;

    std::size_t significant = 1;
    bool settled = false;
    for (std::size_t k = 1; k < d.size(); ++k) {
        if (settled || std::abs(d[k]) <= noise(k)) {
            if (std::abs(d[k]) > noise(k)) return std::nullopt;
            settled = true;
            continue;
        }
        if (std::signbit(d[k]) != std::signbit(d[k - 1])) return std::nullopt;
        if (std::abs(d[k]) > (1.0 - cfg.ratio_tol) * std::abs(d[k - 1])) return std::nullopt;
        ++significant;
    }
    if (settled) return rho.back();
    if (significant < 3) return std::nullopt;
    // Aitken extrapolation of the last three terms.
    const std::size_t m = d.size();
    const double denom = d[m - 1] - d[m - 2];
    if (denom == 0.0) return rho.back();
    return rho.back() - d[m - 1] * d[m - 1] / denom;
}

struct Refined {
    double rho;
    double period;
    double closure;
};

Point flow(const VectorField& w, Point x, double t, const IntegrateOptions& o) {
    const Trajectory tr = ode::integrate(w, x, t, o);
    if (tr.terminated_by != ode::Termination::t_end) return {std::nan(""), std::nan("")};
    return tr.states.back();
}

// Newton on F(rho, T) = phi_T(x(rho)) - x(rho).
std::optional<Refined> refine(const VectorField& w, const HalfLine& line, double rho, double period,
                              const CycleConfig& cfg) {
    const IntegrateOptions o = options(cfg.refine_tol);
    auto residual = [&](double r, double T) {
        const Point x = line.at(r);
        return flow(w, x, T, o) - x;
    };
    Point f = residual(rho, period);
    double fn = norm(f);
    for (int it = 0; it < 30 && std::isfinite(fn); ++it) {
        if (fn <= 0.01 * cfg.closure_tol) break;
        const double h = 1e-6 * std::max(1.0, std::abs(rho));
        const Point du = (1.0 / (2.0 * h)) * (residual(rho + h, period) - residual(rho - h, period));
        const Point dT = w(flow(w, line.at(rho), period, o));
        const double det = cross(du, dT);
        if (!(std::abs(det) > 0.0)) return std::nullopt;
        // Solve [du dT] (a, b)^T = -f.
        const double a = -cross(f, dT) / det;
        const double b = -cross(du, f) / det;
        double lambda = 1.0;
        bool improved = false;
        for (int k = 0; k < 12; ++k, lambda *= 0.5) {
            const double r2 = rho + lambda * a, T2 = period + lambda * b;
            if (!(r2 > 0.0 && r2 < line.reach && T2 > 0.0)) continue;
            const Point f2 = residual(r2, T2);
            const double n2 = norm(f2);
            if (n2 < fn) {
                rho = r2;
                period = T2;
                f = f2;
                fn = n2;
                improved = true;
                break;
            }
        }
        if (!improved) break;
    }
    if (!(fn <= cfg.closure_tol)) return std::nullopt;
    return Refined{rho, period, fn};
}

// Crossings of the half-line by the orbit of x0 under w.
std::vector<ode::Crossing> crossings(const VectorField& w, const HalfLine& line, Point x0, double t,
                                     const ode::Tolerance& tol) {
    const Trajectory tr = ode::integrate(w, x0, t, options(tol));
    return ode::section_crossings(w, tr, line.section());
}

// A neighboring orbit on one side approaching the cycle, in either time direction.
bool one_sided_convergence(const VectorField& v, const HalfLine& line, double rho, const CycleConfig& cfg) {
    const VectorField rev = v.reversed();
    for (const double side : {1.0, -1.0}) {
        const double start = rho + side * cfg.perturbation;
        if (!(start > 0.0)) continue;
        for (const VectorField* w : {&v, &rev}) {
            const HalfLine l{line.p, line.reach, w == &v ? line.orientation : -line.orientation};
            const auto cs = crossings(*w, l, l.at(start), cfg.t_horizon, cfg.seed_tol);
            if (cs.size() < 3) continue;
            double prev = std::abs(start - rho);
            bool monotone = true;
            for (const auto& c : cs) {
                const double gap = std::abs(c.point.x - line.p.x - rho);
                if (gap > prev) {
                    monotone = false;
                    break;
                }
                prev = gap;
            }
            if (monotone && prev < 0.5 * cfg.perturbation) return true;
        }
    }
    return false;
}

double mean_radius(const Polyline& pts) {
    const Point c = vertex_centroid(pts);
    double s = 0.0;
    const std::size_t n = pts.size() - 1;
    for (std::size_t k = 0; k < n; ++k) s += distance(pts[k], c);
    return s / static_cast<double>(n);
}

LimitCycle build_cycle(const VectorField& w, bool backward, const HalfLine& line,
                       const Refined& r, std::span<const CriticalPoint> cps, const CycleConfig& cfg) {
    LimitCycle c;
    c.anchor = line.at(r.rho);
    c.period = r.period;
    c.closure_residual = r.closure;
    const Trajectory tr = ode::integrate(w, c.anchor, r.period, options(cfg.refine_tol));
    const int n = std::max(16, cfg.polyline_points);
    for (int k = 0; k < n; ++k) c.points.push_back(tr.dense(r.period * k / n));
    c.points.push_back(c.points.front());
    // Stored counterclockwise whatever the direction of the flow.
    double area2 = 0.0;
    for (std::size_t k = 0; k + 1 < c.points.size(); ++k) area2 += cross(c.points[k], c.points[k + 1]);
    if (area2 < 0.0) std::reverse(c.points.begin(), c.points.end());

    // Composite Simpson on the divergence along the orbit of w.
    const int m = 4096;
    const double h = r.period / m;
    double s = 0.0;
    for (int k = 0; k <= m; ++k) {
        const double wk = (k == 0 || k == m) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        s += wk * w.divergence(tr.dense(h * k));
    }
    const double div_integral = (backward ? -1.0 : 1.0) * s * h / 3.0;
    c.return_derivative = std::exp(div_integral);
    if (c.return_derivative < 1.0 - cfg.isolation_tol) c.stability = Stability::attracting;
    else if (c.return_derivative > 1.0 + cfg.isolation_tol) c.stability = Stability::repelling;
    else c.stability = Stability::semi_stable;

    for (const auto& cp : cps)
        if (winding_number(c.points, cp.location) != 0) c.enclosed_cp_ids.push_back(cp.id);
    c.mean_radius = mean_radius(c.points);
    return c;
}

} // namespace

std::vector<LimitCycle> detect_limit_cycles(const VectorField& v, std::span<const CriticalPoint> cps,
                                            const CycleConfig& cfg, std::vector<std::string>* notes) {
    auto note = [&](const std::string& s) {
        if (notes) notes->push_back(s);
    };
    std::vector<HalfLine> lines;
    for (const auto& cp : cps) {
        const double reach = v.box_x_hi() - cp.location.x;
        if (!(reach > 0.0)) continue;
        lines.push_back({cp.location, reach, 1});
        lines.push_back({cp.location, reach, -1});
    }
    if (lines.empty()) return {};

    std::vector<Point> seeds;
    const double bw = v.box_x_hi() - v.box_x_lo(), bh = v.box_y_hi() - v.box_y_lo();
    const double rmax = 0.5 * std::min(bw, bh), rmin = 0.02;
    for (const auto& cp : cps)
        for (int m = 0; m < cfg.radii; ++m) {
            const double r = cfg.radii == 1 ? rmin : rmin * std::pow(rmax / rmin, static_cast<double>(m) / (cfg.radii - 1));
            for (int k = 0; k < cfg.rays; ++k) {
                const double a = 2.0 * std::numbers::pi * (k + 0.5) / cfg.rays;
                seeds.push_back(cp.location + r * Point{std::cos(a), std::sin(a)});
            }
        }
    for (int j = 0; j < cfg.grid_seeds; ++j)
        for (int i = 0; i < cfg.grid_seeds; ++i)
            seeds.push_back({v.box_x_lo() + bw * (i + 0.5) / cfg.grid_seeds, v.box_y_lo() + bh * (j + 0.5) / cfg.grid_seeds});

    const VectorField rev = v.reversed();
    std::vector<std::vector<Candidate>> found(seeds.size() * 2);
    parallel_for(found.size(), cfg.threads, [&](std::size_t idx) {
        const bool backward = idx % 2 == 1;
        const VectorField& w = backward ? rev : v;
        const Trajectory tr = ode::integrate(w, seeds[idx / 2], cfg.t_horizon, options(cfg.seed_tol));
        if (tr.terminated_by == ode::Termination::equilibrium_convergence) return;
        for (std::size_t li = 0; li < lines.size(); ++li) {
            const auto cs = ode::section_crossings(w, tr, lines[li].section());
            std::vector<double> rho;
            for (const auto& c : cs) rho.push_back(c.point.x - lines[li].p.x);
            const auto lim = converged_limit(rho, cfg);
            if (!lim || !(*lim > 1e-4) || !(*lim < lines[li].reach)) continue;
            const double T = cs[cs.size() - 1].t - cs[cs.size() - 2].t;
            found[idx].push_back({li, backward, *lim, T});
        }
    });

    std::vector<LimitCycle> out;
    std::vector<Point> rejected;
    for (const auto& list : found) {
        for (const Candidate& c : list) {
            const HalfLine& line = lines[c.line];
            const Point x = line.at(c.rho);
            bool known = false;
            for (const auto& lc : out)
                if (point_polyline_distance(x, lc.points) < 1e-3) known = true;
            for (const Point& r : rejected)
                if (distance(r, x) < 1e-3) known = true;
            if (known) continue;

            const VectorField& w = c.backward ? rev : v;
            const auto r = refine(w, line, c.rho, c.period_guess, cfg);
            if (!r) {
                note("refinement failed near (" + std::to_string(x.x) + ", " + std::to_string(x.y) + ")");
                rejected.push_back(x);
                continue;
            }
            LimitCycle lc = build_cycle(w, c.backward, line, *r, cps, cfg);
            if (lc.stability == Stability::semi_stable && !one_sided_convergence(v, line, r->rho, cfg)) {
                note("periodic orbit through (" + std::to_string(lc.anchor.x) + ", " + std::to_string(lc.anchor.y) +
                     ") is not isolated");
                rejected.push_back(x);
                rejected.push_back(lc.anchor);
                continue;
            }
            if (lc.enclosed_cp_ids.empty()) {
                note("cycle through (" + std::to_string(lc.anchor.x) + ", " + std::to_string(lc.anchor.y) +
                     ") encloses no critical point");
                rejected.push_back(x);
                continue;
            }
            bool duplicate = false;
            for (const auto& o : out)
                if (hausdorff(o.points, lc.points) < cfg.dedup_tol) duplicate = true;
            if (!duplicate) out.push_back(std::move(lc));
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const LimitCycle& a, const LimitCycle& b) { return a.mean_radius < b.mean_radius; });
    return out;
}

Return return_map(const VectorField& v, const Section& s, Point x, double t_horizon, const ode::Tolerance& tol) {
    const Trajectory tr = ode::integrate(v, x, t_horizon, options(tol));
    for (const auto& c : ode::section_crossings(v, tr, s))
        if (c.t > 1e-6) return {c.point, c.t};
    throw NoReturn("no return to the section within t = " + std::to_string(t_horizon));
}

std::vector<std::vector<int>> enclosure_matrix(std::span<const LimitCycle> cycles,
                                               std::span<const CriticalPoint> cps, double tol) {
    std::vector<std::vector<int>> m;
    for (const auto& c : cycles) {
        std::vector<int> row;
        for (const auto& cp : cps) {
            if (point_polyline_distance(cp.location, c.points) <= tol)
                throw PointOnCycle("critical point " + std::to_string(cp.id) + " lies on a cycle");
            row.push_back(winding_number(c.points, cp.location));
        }
        m.push_back(std::move(row));
    }
    return m;
}

Residence fiber_residence(const LimitCycle& cycle, const VectorField& v, const CriticalPoint& cp) {
    Residence r;
    if (cycle.points.size() < 2) return r;
    const Point base = v(cp.location);
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0;
    const std::size_t n = cycle.points.size() - 1;
    for (std::size_t k = 0; k < n; ++k) {
        const double s = norm(v(cycle.points[k]) - base);
        lo = std::min(lo, s);
        hi = std::max(hi, s);
        sum += s;
    }
    r.mean_speed = sum / static_cast<double>(n);
    r.relative_variation = r.mean_speed > 0.0 ? (hi - lo) / r.mean_speed : 0.0;
    return r;
}

ClassMatch cycle_class_map(const LimitCycle& cycle, const milnor::FiberCurve& fiber) {
    ClassMatch m;
    m.hausdorff = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < fiber.components.size(); ++k) {
        const auto& comp = fiber.components[k];
        if (!comp.closed) continue;
        const double d = hausdorff(cycle.points, comp.vertices);
        if (d < m.hausdorff) {
            m.hausdorff = d;
            m.component_index = static_cast<int>(k);
        }
    }
    return m;
}

} // namespace cyclebound::cycles
