#include "cyclebound/milnorfiber/milnorfiber.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "cyclebound/errors.hpp"
#include "cyclebound/polyalg/interval.hpp"
#include "cyclebound/simd/kernels.hpp"
#include "cyclebound/svg.hpp"

namespace cyclebound::milnor {

using polyalg::Interval;
using polyalg::Poly2;

namespace {

constexpr double kMinDelta = 1e-6;

double sphere_min_norm(const VectorField& v, Point c, double delta, int samples) {
    const Point base = v(c);
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < samples; ++k) {
        const double a = 2.0 * std::numbers::pi * k / samples;
        const Point x = c + delta * Point{std::cos(a), std::sin(a)};
        best = std::min(best, norm(v(x) - base));
    }
    return best;
}

// Polynomial with interval-enclosed coefficients, for cheap repeated
// evaluation over many small boxes.
struct IntervalPoly {
    struct Term {
        unsigned i, j;
        Interval c;
    };
    std::vector<Term> terms;
    int degree = -1;

    explicit IntervalPoly(const Poly2& p) : degree(p.degree()) {
        for (const auto& [e, c] : p.terms()) terms.push_back({e.i, e.j, polyalg::enclose(c)});
    }

    // xp[k] = x^k, yp[k] = y^k for k up to degree.
    Interval eval(const Interval* xp, const Interval* yp) const {
        Interval acc(0.0);
        for (const Term& t : terms) acc = acc + t.c * (xp[t.i] * yp[t.j]);
        return acc;
    }
};

struct Powers {
    std::vector<Interval> x, y;

    Powers(const Interval& a, const Interval& b, int degree)
        : x(static_cast<std::size_t>(std::max(degree, 0) + 1)), y(x.size()) {
        x[0] = y[0] = Interval(1.0);
        for (std::size_t k = 1; k < x.size(); ++k) {
            x[k] = x[k - 1] * a;
            y[k] = y[k - 1] * b;
        }
    }
};

struct Enclosers {
    IntervalPoly p, q, px, py, qx, qy, pxx, pxy, pyy, qxx, qxy, qyy;
    int degree = 0;

    static Poly2 d(const Poly2& f, polyalg::Var v) { return polyalg::partial(f, v); }

    explicit Enclosers(const VectorField& v)
        : p(v.p()), q(v.q()), px(d(v.p(), polyalg::Var::x1)), py(d(v.p(), polyalg::Var::x2)),
          qx(d(v.q(), polyalg::Var::x1)), qy(d(v.q(), polyalg::Var::x2)),
          pxx(d(d(v.p(), polyalg::Var::x1), polyalg::Var::x1)), pxy(d(d(v.p(), polyalg::Var::x1), polyalg::Var::x2)),
          pyy(d(d(v.p(), polyalg::Var::x2), polyalg::Var::x2)), qxx(d(d(v.q(), polyalg::Var::x1), polyalg::Var::x1)),
          qxy(d(d(v.q(), polyalg::Var::x1), polyalg::Var::x2)), qyy(d(d(v.q(), polyalg::Var::x2), polyalg::Var::x2)),
          degree(std::max(v.p().degree(), v.q().degree())) {}
};

// Enclosure of g over a cell by its second-order Taylor form about the cell
// center. Only the Hessian is evaluated over the whole cell, so the
// overestimation is O(h^2) and refinement converges near regular curves.
Interval cell_enclosure(const Enclosers& e, const LevelGrid& g, int i, int j) {
    const Point lo = g.node(i, j);
    const double r = 0.5 * g.h;
    const Point m = lo + Point{r, r};
    const Interval X(lo.x, lo.x + g.h), Y(lo.y, lo.y + g.h);
    const Interval mx(m.x), my(m.y);
    const Interval dx(-r, r);

    const Powers pm(mx, my, e.degree), pc(X, Y, e.degree);
    auto at_m = [&](const IntervalPoly& f) { return f.eval(pm.x.data(), pm.y.data()); };
    auto on_cell = [&](const IntervalPoly& f) { return f.eval(pc.x.data(), pc.y.data()); };

    const Interval f1 = at_m(e.p) - Interval(g.base_value.x);
    const Interval f2 = at_m(e.q) - Interval(g.base_value.y);
    const Interval g0 = polyalg::sqr(f1) + polyalg::sqr(f2) - polyalg::sqr(Interval(g.eta));
    const Interval gx = Interval(2.0) * (f1 * at_m(e.px) + f2 * at_m(e.qx));
    const Interval gy = Interval(2.0) * (f1 * at_m(e.py) + f2 * at_m(e.qy));

    const Interval F1 = on_cell(e.p) - Interval(g.base_value.x);
    const Interval F2 = on_cell(e.q) - Interval(g.base_value.y);
    const Interval Px = on_cell(e.px), Py = on_cell(e.py), Qx = on_cell(e.qx), Qy = on_cell(e.qy);
    const Interval hxx = Interval(2.0) * (polyalg::sqr(Px) + F1 * on_cell(e.pxx) + polyalg::sqr(Qx) + F2 * on_cell(e.qxx));
    const Interval hxy = Interval(2.0) * (Px * Py + F1 * on_cell(e.pxy) + Qx * Qy + F2 * on_cell(e.qxy));
    const Interval hyy = Interval(2.0) * (polyalg::sqr(Py) + F1 * on_cell(e.pyy) + polyalg::sqr(Qy) + F2 * on_cell(e.qyy));
    const Interval sq = polyalg::sqr(dx);
    const Interval quad = Interval(0.5) * (hxx * sq + Interval(2.0) * hxy * (dx * dx) + hyy * sq);
    return g0 + gx * dx + gy * dx + quad;
}

// Kept cells with equal corner signs whose enclosure of g contains 0 while no
// neighboring cell carries a resolved crossing.
int count_unresolved(const Enclosers& e, const LevelGrid& g) {
    const int n = g.n;
    std::vector<std::uint8_t> crossing(static_cast<std::size_t>(n) * n, 0);
    double lip = 0.0;
    for (int j = 0; j <= n; ++j) {
        for (int i = 0; i <= n; ++i) {
            if (i < n) lip = std::max(lip, std::abs(g.value(i + 1, j) - g.value(i, j)));
            if (j < n) lip = std::max(lip, std::abs(g.value(i, j + 1) - g.value(i, j)));
        }
    }
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (!g.cell_kept(i, j)) continue;
            const bool s0 = g.positive(i, j);
            if (g.positive(i + 1, j) != s0 || g.positive(i + 1, j + 1) != s0 || g.positive(i, j + 1) != s0)
                crossing[static_cast<std::size_t>(j) * n + i] = 1;
        }
    }
    // Corner values farther than this from zero cannot hide a crossing under
    // the sampled variation (with a safety factor of 4).
    const double reach = 4.0 * lip;
    int count = 0;
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            if (!g.cell_kept(i, j) || crossing[static_cast<std::size_t>(j) * n + i]) continue;
            const double m = std::min({std::abs(g.value(i, j)), std::abs(g.value(i + 1, j)),
                                       std::abs(g.value(i + 1, j + 1)), std::abs(g.value(i, j + 1))});
            if (m > reach) continue;
            bool near_crossing = false;
            for (int dj = -1; dj <= 1 && !near_crossing; ++dj)
                for (int di = -1; di <= 1; ++di) {
                    const int a = i + di, b = j + dj;
                    if (a < 0 || b < 0 || a >= n || b >= n) continue;
                    if (crossing[static_cast<std::size_t>(b) * n + a]) {
                        near_crossing = true;
                        break;
                    }
                }
            if (near_crossing) continue;
            if (cell_enclosure(e, g, i, j).contains_zero()) ++count;
        }
    }
    return count;
}

Betti count(const std::vector<Component>& comps) {
    Betti b;
    b.b0 = static_cast<int>(comps.size());
    for (const auto& c : comps) b.closed_count += c.closed ? 1 : 0;
    return b;
}

} // namespace

Radii select_radii(const VectorField& v, const CriticalPoint& cp, std::span<const CriticalPoint> all_cps,
                   const MilnorConfig& cfg) {
    if (cfg.sweep_len < 1) throw InvalidArgument("sweep_len must be positive");
    if (!(cfg.eta_span > 1.0)) throw InvalidArgument("eta_span must exceed 1");
    const Point c = cp.location;
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& o : all_cps) {
        if (o.id == cp.id) continue;
        nearest = std::min(nearest, distance(o.location, c));
    }
    const double to_edge = std::min({c.x - v.box_x_lo(), v.box_x_hi() - c.x, c.y - v.box_y_lo(), v.box_y_hi() - c.y});

    Radii r;
    r.delta = std::min({cfg.delta_cap, 0.5 * nearest, 0.5 * to_edge});
    if (!(r.delta >= kMinDelta))
        throw DeltaCollapse("delta " + std::to_string(r.delta) + " at point " + std::to_string(cp.id) +
                            " (nearest neighbor or box edge too close)");
    r.sphere_min = sphere_min_norm(v, c, r.delta, cfg.sphere_samples);
    if (!(r.sphere_min > 0.0))
        throw DeltaCollapse("V - V(p) vanishes on the sphere of radius " + std::to_string(r.delta));
    r.eta_max = 0.5 * r.sphere_min;
    const int n = cfg.sweep_len;
    for (int k = 0; k < n; ++k) {
        const double frac = n == 1 ? 1.0 : static_cast<double>(k) / (n - 1);
        r.eta_sweep.push_back(r.eta_max * std::pow(cfg.eta_span, frac - 1.0));
    }
    return r;
}

FiberCurve extract_fiber(const VectorField& v, const CriticalPoint& cp, double delta, double eta,
                         const MilnorConfig& cfg) {
    if (cfg.grid < 64) throw InvalidArgument("grid must be at least 64");
    if (cfg.max_grid < cfg.grid) throw InvalidArgument("max_grid must be at least grid");
    if (!(eta > 0.0)) throw InvalidArgument("eta must be positive");
    const double smin = sphere_min_norm(v, cp.location, delta, cfg.sphere_samples);
    if (std::abs(eta - smin) <= cfg.tangency_tol * smin)
        throw EtaTooLarge("eta " + std::to_string(eta) + " meets the sphere minimum " + std::to_string(smin));

    const Enclosers enc(v);
    int n = cfg.grid;
    LevelGrid grid = sample_level_grid(v, cp.location, delta, eta, n);
    std::vector<Component> comps = march(grid);
    int unresolved = count_unresolved(enc, grid);
    while (unresolved > 0 && n < cfg.max_grid) {
        const int next = std::min(2 * n, cfg.max_grid);
        LevelGrid g2 = sample_level_grid(v, cp.location, delta, eta, next);
        std::vector<Component> c2 = march(g2);
        const int u2 = count_unresolved(enc, g2);
        if (next == cfg.max_grid && u2 > 0) {
            const Betti a = count(comps), b = count(c2);
            if (a.b0 != b.b0 || a.closed_count != b.closed_count)
                throw GridTooCoarse("topology changed from " + std::to_string(n) + " to " + std::to_string(next) +
                                    " at eta " + std::to_string(eta));
        }
        n = next;
        grid = std::move(g2);
        comps = std::move(c2);
        unresolved = u2;
    }

    FiberCurve f;
    f.center = cp.location;
    f.eta = eta;
    f.delta = delta;
    f.grid_resolution = n;
    f.unresolved_cells = unresolved;
    const Point base = v(cp.location);
    for (const auto& c : comps)
        for (const Point& x : c.vertices) {
            const Point d = v(x) - base;
            f.max_residual = std::max(f.max_residual, std::abs(dot(d, d) - eta * eta));
        }
    f.components = std::move(comps);
    return f;
}

Betti betti(const FiberCurve& f) { return count(f.components); }

SubmersionResult submersion_check(const VectorField& v, const CriticalPoint& cp, double delta,
                                  std::span<const double> eta_sweep, const MilnorConfig& cfg) {
    SubmersionResult out;
    if (eta_sweep.empty()) return out;
    const double lo = *std::min_element(eta_sweep.begin(), eta_sweep.end());
    const double hi = *std::max_element(eta_sweep.begin(), eta_sweep.end());
    const int n = cfg.grid;
    const double h = 2.0 * delta / n;
    const Point origin = cp.location - Point{delta, delta};
    const Point base = v(cp.location);
    const std::size_t m = static_cast<std::size_t>(n) + 1;
    std::vector<double> px(m), py(m), p(m), q(m), g2(m);
    const auto& k = simd::active_kernels();
    const double tol2 = cfg.submersion_tol * cfg.submersion_tol;
    for (int j = 0; j <= n; ++j) {
        const double y = origin.y + j * h;
        k.eval_row(v.fast_px(), origin.x, h, y, px.data(), m);
        k.eval_row(v.fast_py(), origin.x, h, y, py.data(), m);
        k.eval_row(v.fast_p(), origin.x, h, y, p.data(), m);
        k.eval_row(v.fast_q(), origin.x, h, y, q.data(), m);
        k.norm2(px.data(), py.data(), g2.data(), m);
        for (int i = 0; i <= n; ++i) {
            const Point x{origin.x + i * h, y};
            if (distance(x, cp.location) > delta) continue;
            const double r = std::hypot(p[i] - base.x, q[i] - base.y);
            if (r < lo || r > hi) continue;
            if (!(g2[i] > tol2)) {
                out.ok = false;
                out.witness = x;
                return out;
            }
        }
    }
    return out;
}

bool MilnorData::any_extraction_failed() const {
    return std::any_of(counts_per_eta.begin(), counts_per_eta.end(), [](const SweepEntry& e) { return e.failed; });
}

MilnorData vanishing_cycle_count(const VectorField& v, const CriticalPoint& cp,
                                 std::span<const CriticalPoint> all_cps, const MilnorConfig& cfg) {
    MilnorData d;
    d.point_id = cp.id;
    Radii r;
    try {
        r = select_radii(v, cp, all_cps, cfg);
    } catch (const Error& e) {
        d.failed = true;
        d.error = e.what();
        return d;
    }
    d.delta = r.delta;
    d.eta_max = r.eta_max;
    d.eta_sweep = r.eta_sweep;
    for (const double eta : r.eta_sweep) {
        SweepEntry s;
        s.eta = eta;
        try {
            const FiberCurve f = extract_fiber(v, cp, r.delta, eta, cfg);
            const Betti b = betti(f);
            s.closed_count = b.closed_count;
            s.arc_count = b.b0 - b.closed_count;
            s.grid = f.grid_resolution;
            s.max_residual = f.max_residual;
        } catch (const Error& e) {
            s.failed = true;
            s.error = e.what();
        }
        d.counts_per_eta.push_back(std::move(s));
    }

    const auto& c = d.counts_per_eta;
    const int tail = std::max(1, cfg.stable_tail);
    if (static_cast<int>(c.size()) >= tail) {
        const auto first = c.end() - tail;
        d.stable = std::all_of(first, c.end(), [&](const SweepEntry& e) {
            return !e.failed && e.closed_count == first->closed_count;
        });
    }
    for (auto it = c.rbegin(); it != c.rend(); ++it)
        if (!it->failed) {
            d.l = it->closed_count;
            break;
        }

    const SubmersionResult sub = submersion_check(v, cp, r.delta, r.eta_sweep, cfg);
    d.submersion_ok = sub.ok;
    d.witness = sub.witness;
    return d;
}

void write_fiber_svg(std::ostream& os, const FiberCurve& f) {
    const double pad = 0.05 * f.delta;
    const Point lo = f.center - Point{f.delta + pad, f.delta + pad};
    const Point hi = f.center + Point{f.delta + pad, f.delta + pad};
    SvgCanvas canvas(lo, hi, 600);
    Polyline ball;
    for (int k = 0; k <= 256; ++k) {
        const double a = 2.0 * std::numbers::pi * k / 256;
        ball.push_back(f.center + f.delta * Point{std::cos(a), std::sin(a)});
    }
    ball.back() = ball.front();
    canvas.polyline(ball, "#999999", 1.0);
    for (const auto& c : f.components) {
        if (c.closed) canvas.polyline(c.vertices, "#1f4e9c", 1.5, "#9cb8e6", 0.6);
        else canvas.polyline(c.vertices, "#b5361d", 1.5);
    }
    canvas.circle(f.center, 3.0, "#000000");
    canvas.write(os);
}

} // namespace cyclebound::milnor
