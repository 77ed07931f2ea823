#include "cyclebound/critfind/critfind.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "cyclebound/errors.hpp"

namespace cyclebound::critfind {

using polyalg::Interval;
using polyalg::interval_eval;
using polyalg::Poly2;
using polyalg::Var;

namespace {

// Splitting slightly off-center keeps "nice" coordinates such as 0 or 1 off
// the subdivision lines for the usual symmetric boxes.
constexpr double kSplit = 0.4990234375;
constexpr double kInflate = 0.05;

struct Partials {
    Poly2 p, q, px, py, qx, qy;
};

enum class Verdict { none, unique, unknown };

struct KrawczykResult {
    Verdict verdict = Verdict::unknown;
    Box2 image;
};

Box2 inflate(const Box2& b, double frac) {
    const double wx = b.x.width() * frac, wy = b.y.width() * frac;
    return Box2{Interval(b.x.lo - wx, b.x.hi + wx), Interval(b.y.lo - wy, b.y.hi + wy)};
}

bool inside(const Box2& inner, const Box2& outer) {
    return outer.x.lo <= inner.x.lo && inner.x.hi <= outer.x.hi && outer.y.lo <= inner.y.lo &&
           inner.y.hi <= outer.y.hi;
}

// Krawczyk operator K(X) = m - Y V(m) + (I - Y J(X)) (X - m) with Y ~ J(m)^-1.
// K(X) inside int X proves a unique zero in X; K(X) disjoint from X proves none.
KrawczykResult krawczyk(const Partials& f, const Box2& X) {
    const double mx = X.x.mid(), my = X.y.mid();
    const Box2 m{Interval(mx), Interval(my)};
    const Box2 mpt = m;
    const double a = interval_eval(f.px, mpt).mid(), b = interval_eval(f.py, mpt).mid();
    const double c = interval_eval(f.qx, mpt).mid(), d = interval_eval(f.qy, mpt).mid();
    const double det = a * d - b * c;
    const double scale = std::max({std::fabs(a * d), std::fabs(b * c), 1e-300});
    if (!(std::fabs(det) > 1e-13 * scale)) return {};
    const Interval y00(d / det), y01(-b / det), y10(-c / det), y11(a / det);

    const Interval pm = interval_eval(f.p, mpt), qm = interval_eval(f.q, mpt);
    const Interval jpx = interval_eval(f.px, X), jpy = interval_eval(f.py, X);
    const Interval jqx = interval_eval(f.qx, X), jqy = interval_eval(f.qy, X);
    const Interval dx = X.x - Interval(mx), dy = X.y - Interval(my);

    const Interval one(1.0);
    const Interval m00 = one - (y00 * jpx + y01 * jqx);
    const Interval m01 = -(y00 * jpy + y01 * jqy);
    const Interval m10 = -(y10 * jpx + y11 * jqx);
    const Interval m11 = one - (y10 * jpy + y11 * jqy);

    const Interval kx = Interval(mx) - (y00 * pm + y01 * qm) + m00 * dx + m01 * dy;
    const Interval ky = Interval(my) - (y10 * pm + y11 * qm) + m10 * dx + m11 * dy;
    KrawczykResult r;
    r.image = Box2{kx, ky};
    if (!kx.intersects(X.x) || !ky.intersects(X.y)) {
        r.verdict = Verdict::none;
    } else if (kx.subset_of_interior(X.x) && ky.subset_of_interior(X.y)) {
        r.verdict = Verdict::unique;
    }
    return r;
}

// Iterates X <- K(X) n X on a box already known to hold a unique zero.
Box2 contract(const Partials& f, Box2 X) {
    for (int it = 0; it < 30; ++it) {
        const KrawczykResult r = krawczyk(f, X);
        if (r.verdict == Verdict::none || !r.image.intersects(X)) break;
        const Box2 next{polyalg::intersect(r.image.x, X.x), polyalg::intersect(r.image.y, X.y)};
        const bool progress = next.max_width() < 0.5 * X.max_width();
        X = next;
        if (!progress) break;
    }
    return X;
}

std::pair<Box2, Box2> split_x(const Box2& b) {
    const double s = b.x.lo + kSplit * b.x.width();
    return {Box2{Interval(b.x.lo, s), b.y}, Box2{Interval(s, b.x.hi), b.y}};
}

std::pair<Box2, Box2> split_y(const Box2& b) {
    const double s = b.y.lo + kSplit * b.y.width();
    return {Box2{b.x, Interval(b.y.lo, s)}, Box2{b.x, Interval(s, b.y.hi)}};
}

std::string describe(const Box2& b) {
    std::ostringstream os;
    os.precision(17);
    os << "[" << b.x.lo << ", " << b.x.hi << "] x [" << b.y.lo << ", " << b.y.hi << "]";
    return os.str();
}

struct Found {
    Point location;
    Box2 enclosure;
    std::vector<Box2> unique_regions;  // boxes proven to hold only this zero
    bool certified = false;
    double residual = 0.0;
};

bool near_existing(const std::vector<Found>& found, Point p, double tol) {
    for (const Found& f : found) {
        if (f.enclosure.contains(p.x, p.y)) return true;
        for (const Box2& r : f.unique_regions)
            if (r.contains(p.x, p.y)) return true;
        if (distance(f.location, p) <= tol) return true;
    }
    return false;
}

int index_for(const VectorField& v, Point p, double nearest, double min_side) {
    double r = std::min(0.25 * nearest, 0.01 * min_side);
    for (int attempt = 0; attempt < 12; ++attempt, r *= 0.5) {
        try {
            return poincare_index(v, p, r, 256);
        } catch (const ZeroOnCircle&) {
        }
    }
    throw ZeroOnCircle("no zero-free circle found around critical point");
}

} // namespace

Point newton_polish(const VectorField& v, Point start, double residual_tol, int max_iter) {
    Point x = start;
    Point best = x;
    double best_res = norm(v(x));
    for (int it = 0; it < max_iter && best_res > residual_tol; ++it) {
        const Point f = v(x);
        const Jacobian j = v.jacobian(x);
        const double det = j.det();
        if (det == 0.0 || !std::isfinite(det)) break;
        const Point step{(j.d * f.x - j.b * f.y) / det, (-j.c * f.x + j.a * f.y) / det};
        x = x - step;
        const double res = norm(v(x));
        if (!std::isfinite(res)) break;
        if (res < best_res) {
            best_res = res;
            best = x;
        }
        if (norm(step) <= 1e-17 * (1.0 + norm(x)) && res >= best_res) break;
    }
    return best;
}

int poincare_index(const VectorField& v, Point center, double radius, int samples) {
    if (samples < 64) throw InvalidArgument("poincare_index: samples must be >= 64");
    if (!(radius > 0.0)) throw InvalidArgument("poincare_index: radius must be positive");
    constexpr int kMaxSamples = 1 << 20;
    for (int n = samples; n <= kMaxSamples; n *= 2) {
        std::vector<double> angle(static_cast<std::size_t>(n));
        double vmax = 0.0, vmin = std::numeric_limits<double>::infinity();
        for (int k = 0; k < n; ++k) {
            const double t = 2.0 * std::numbers::pi * k / n;
            const Point f = v(center + radius * Point{std::cos(t), std::sin(t)});
            const double m = norm(f);
            vmax = std::max(vmax, m);
            vmin = std::min(vmin, m);
            angle[static_cast<std::size_t>(k)] = std::atan2(f.y, f.x);
        }
        if (!(vmin > 1e-15 * vmax) || vmax == 0.0)
            throw ZeroOnCircle("vector field vanishes (numerically) on the index circle");
        double total = 0.0;
        bool coarse = false;
        for (int k = 0; k < n && !coarse; ++k) {
            double d = angle[static_cast<std::size_t>((k + 1) % n)] - angle[static_cast<std::size_t>(k)];
            d = std::remainder(d, 2.0 * std::numbers::pi);
            if (std::fabs(d) >= 0.5 * std::numbers::pi) coarse = true;
            total += d;
        }
        if (!coarse) return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
    }
    throw StepTooCoarse("angle increments stay above pi/2 at the sample limit");
}

bool is_nondegenerate(const VectorField& v, Point p, double degeneracy_tol) {
    return std::fabs(v.jacobian(p).det()) > degeneracy_tol;
}

std::vector<CriticalPoint> find_critical_points(const VectorField& v, const SolveConfig& cfg) {
    const Partials f{v.p(), v.q(), v.p().partial(Var::x1), v.p().partial(Var::x2),
                     v.q().partial(Var::x1), v.q().partial(Var::x2)};
    const Box2 root = v.box().enclosure();

    std::vector<Found> found;
    std::vector<Box2> unresolved;
    std::vector<Box2> level{root};

    for (int depth = 0; !level.empty(); ++depth) {
        if (level.size() > cfg.max_live_boxes) {
            std::ostringstream os;
            os << level.size() << " live boxes at depth " << depth
               << "; zero set of (P, Q) looks non-isolated";
            throw DepthLimitExceeded(os.str());
        }
        std::vector<Box2> next;
        for (const Box2& box : level) {
            if (!interval_eval(f.p, box).contains_zero()) continue;
            if (!interval_eval(f.q, box).contains_zero()) continue;
            bool covered = false;
            for (const Found& fz : found)
                for (const Box2& r : fz.unique_regions)
                    if (inside(box, r)) covered = true;
            if (covered) continue;

            const Box2 wide = inflate(box, kInflate);
            const KrawczykResult kr = krawczyk(f, wide);
            if (kr.verdict == Verdict::none) continue;
            if (kr.verdict == Verdict::unique) {
                const Box2 tight = contract(f, wide);
                Point loc = newton_polish(v, Point{tight.x.mid(), tight.y.mid()}, cfg.residual_tol);
                if (!near_existing(found, loc, cfg.resolution_tol)) {
                    Box2 enc = tight;
                    if (!enc.contains(loc.x, loc.y)) {
                        enc.x = polyalg::hull(enc.x, Interval(loc.x));
                        enc.y = polyalg::hull(enc.y, Interval(loc.y));
                    }
                    found.push_back({loc, enc, {wide}, true, norm(v(loc))});
                } else {
                    // Same zero seen from a neighbouring box; `wide` is one
                    // more region proven to hold nothing else.
                    for (Found& fz : found)
                        if (fz.certified && (fz.enclosure.contains(loc.x, loc.y) ||
                                             distance(fz.location, loc) <= cfg.resolution_tol))
                            fz.unique_regions.push_back(wide);
                }
                continue;
            }
            if (box.max_width() < cfg.resolution_tol) {
                unresolved.push_back(box);
                continue;
            }
            if (depth + 1 > cfg.max_depth) {
                throw DepthLimitExceeded("subdivision reached max depth " + std::to_string(cfg.max_depth) +
                                         " near " + describe(box));
            }
            auto [l, r] = split_x(box);
            auto [ll, lu] = split_y(l);
            auto [rl, ru] = split_y(r);
            next.insert(next.end(), {ll, lu, rl, ru});
        }
        level = std::move(next);
    }

    // Unresolved leaves are grouped into touching clusters; each cluster is a
    // degenerate zero (or a near miss that Newton cannot confirm).
    std::vector<int> cluster(unresolved.size(), -1);
    int clusters = 0;
    for (std::size_t i = 0; i < unresolved.size(); ++i) {
        if (cluster[i] >= 0) continue;
        cluster[i] = clusters;
        std::vector<std::size_t> stack{i};
        while (!stack.empty()) {
            const std::size_t a = stack.back();
            stack.pop_back();
            const Box2 grown = inflate(unresolved[a], 0.01);
            for (std::size_t b = 0; b < unresolved.size(); ++b)
                if (cluster[b] < 0 && grown.intersects(unresolved[b])) {
                    cluster[b] = clusters;
                    stack.push_back(b);
                }
        }
        ++clusters;
    }
    for (int c = 0; c < clusters; ++c) {
        Box2 hull_box{};
        bool first = true;
        std::vector<Point> converged;
        for (std::size_t i = 0; i < unresolved.size(); ++i) {
            if (cluster[i] != c) continue;
            const Box2& b = unresolved[i];
            if (first) {
                hull_box = b;
                first = false;
            } else {
                hull_box.x = polyalg::hull(hull_box.x, b.x);
                hull_box.y = polyalg::hull(hull_box.y, b.y);
            }
            const Point z = newton_polish(v, Point{b.x.mid(), b.y.mid()}, cfg.residual_tol, 400);
            // Newton is only linear at a singular zero; keep going past the
            // residual tolerance so the location (and det) settle.
            if (norm(v(z)) <= cfg.residual_tol) converged.push_back(newton_polish(v, z, 0.0, 2000));
        }
        if (hull_box.max_width() > 100.0 * cfg.resolution_tol) {
            throw DepthLimitExceeded("unresolved region " + describe(hull_box) +
                                     " is wider than the resolution; zero set looks non-isolated");
        }
        if (converged.empty()) continue;
        for (const Point& z : converged)
            if (distance(z, converged.front()) > cfg.resolution_tol * 10.0)
                throw AmbiguousCluster("distinct zeros inside unresolved cluster " + describe(hull_box));
        const Point loc = converged.front();
        if (near_existing(found, loc, cfg.resolution_tol)) continue;
        Box2 enc = hull_box;
        enc.x = polyalg::hull(enc.x, Interval(loc.x));
        enc.y = polyalg::hull(enc.y, Interval(loc.y));
        found.push_back({loc, enc, {}, false, norm(v(loc))});
    }

    std::sort(found.begin(), found.end(), [](const Found& a, const Found& b) {
        return a.location.x != b.location.x ? a.location.x < b.location.x : a.location.y < b.location.y;
    });
    for (std::size_t i = 0; i < found.size(); ++i)
        for (std::size_t j = i + 1; j < found.size(); ++j)
            if (distance(found[i].location, found[j].location) < cfg.resolution_tol)
                throw AmbiguousCluster("zeros closer than resolution near " + describe(found[i].enclosure));

    const double min_side = std::min(v.box_x_hi() - v.box_x_lo(), v.box_y_hi() - v.box_y_lo());
    const double edge_tol = 10.0 * cfg.resolution_tol;
    std::vector<CriticalPoint> out;
    out.reserve(found.size());
    for (std::size_t i = 0; i < found.size(); ++i) {
        CriticalPoint cp;
        cp.id = static_cast<int>(i);
        cp.location = found[i].location;
        cp.enclosure = found[i].enclosure;
        cp.jacobian = v.jacobian(cp.location);
        cp.nondegenerate = std::fabs(cp.jacobian.det()) > cfg.degeneracy_tol;
        cp.certified = found[i].certified;
        cp.residual = found[i].residual;
        cp.on_boundary = cp.location.x - v.box_x_lo() < edge_tol || v.box_x_hi() - cp.location.x < edge_tol ||
                         cp.location.y - v.box_y_lo() < edge_tol || v.box_y_hi() - cp.location.y < edge_tol;
        double nearest = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < found.size(); ++j)
            if (j != i) nearest = std::min(nearest, distance(found[i].location, found[j].location));
        cp.index = index_for(v, cp.location, nearest, min_side);
        out.push_back(cp);
    }
    // Certified cores are disjoint by uniqueness; an overlap can only come
    // from a degenerate cluster sitting on top of another zero.
    for (std::size_t i = 0; i < out.size(); ++i)
        for (std::size_t j = i + 1; j < out.size(); ++j)
            if (out[i].enclosure.intersects(out[j].enclosure))
                throw AmbiguousCluster("overlapping enclosures " + describe(out[i].enclosure) + " and " +
                                       describe(out[j].enclosure));
    return out;
}

} // namespace cyclebound::critfind
