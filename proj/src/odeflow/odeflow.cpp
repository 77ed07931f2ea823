#include "cyclebound/odeflow/odeflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "cyclebound/errors.hpp"
#include "cyclebound/svg.hpp"

namespace cyclebound::ode {

namespace {

// Dormand & Prince (1980) 5(4) tableau; nodes c = (0, 1/5, 3/10, 4/5, 8/9, 1, 1).
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

// PI controller constants (Hairer, Norsett & Wanner, DOPRI5).
constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kAlpha = 0.2 - 0.75 * kBeta;
// h_new / h stays within [kMinRatio, kMaxRatio].
constexpr double kMinRatio = 0.2;
constexpr double kMaxRatio = 10.0;

double weighted_rms(Point e, Point x0, Point x1, const Tolerance& tol) {
    const double sx = tol.atol + tol.rtol * std::max(std::fabs(x0.x), std::fabs(x1.x));
    const double sy = tol.atol + tol.rtol * std::max(std::fabs(x0.y), std::fabs(x1.y));
    const double rx = e.x / sx, ry = e.y / sy;
    return std::sqrt(0.5 * (rx * rx + ry * ry));
}

Point acceleration(const VectorField& v, Point x, Point f) {
    const auto j = v.jacobian(x);
    return {j.a * f.x + j.b * f.y, j.c * f.x + j.d * f.y};
}

double initial_step(const VectorField& v, Point x0, Point f0, double t_max, const Tolerance& tol) {
    const double d0 = weighted_rms(x0, x0, x0, tol);
    const double d1 = weighted_rms(f0, x0, x0, tol);
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, t_max);
    const Point x1 = x0 + h0 * f0;
    const Point f1 = v(x1);
    const double d2 = weighted_rms(f1 - f0, x0, x0, tol) / h0;
    const double dm = std::max(d1, d2);
    const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 0.2);
    return std::min({100.0 * h0, h1, t_max});
}

struct BoxLimits {
    Point lo, hi;
    bool contains(Point p) const { return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y; }
};

BoxLimits inflated_box(const VectorField& v, double factor) {
    const Point c{0.5 * (v.box_x_lo() + v.box_x_hi()), 0.5 * (v.box_y_lo() + v.box_y_hi())};
    const Point half{0.5 * factor * (v.box_x_hi() - v.box_x_lo()), 0.5 * factor * (v.box_y_hi() - v.box_y_lo())};
    return {c - half, c + half};
}

} // namespace

const char* termination_name(Termination t) {
    switch (t) {
    case Termination::t_end: return "t_end";
    case Termination::box_exit: return "box_exit";
    case Termination::equilibrium_convergence: return "equilibrium_convergence";
    case Termination::step_underflow: return "step_underflow";
    }
    return "unknown";
}

std::size_t Trajectory::locate(double t) const {
    if (times.size() < 2) return 0;
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t k = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
    return std::min(k, times.size() - 2);
}

Point Trajectory::dense(double t) const {
    if (times.size() == 1) return states[0];
    const std::size_t k = locate(t);
    const double h = times[k + 1] - times[k];
    const double s = (t - times[k]) / h;
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
    const double h0 = 1 - 10 * s3 + 15 * s4 - 6 * s5;
    const double h1 = s - 6 * s3 + 8 * s4 - 3 * s5;
    const double h2 = 0.5 * s2 - 1.5 * s3 + 1.5 * s4 - 0.5 * s5;
    const double h3 = 0.5 * s3 - s4 + 0.5 * s5;
    const double h4 = -4 * s3 + 7 * s4 - 3 * s5;
    const double h5 = 10 * s3 - 15 * s4 + 6 * s5;
    return h0 * states[k] + (h * h1) * velocities[k] + (h * h * h2) * accelerations[k] +
           (h * h * h3) * accelerations[k + 1] + (h * h4) * velocities[k + 1] + h5 * states[k + 1];
}

Point Trajectory::dense_velocity(double t) const {
    if (times.size() == 1) return velocities[0];
    const std::size_t k = locate(t);
    const double h = times[k + 1] - times[k];
    const double s = (t - times[k]) / h;
    const double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
    const double d0 = -30 * s2 + 60 * s3 - 30 * s4;
    const double d1 = 1 - 18 * s2 + 32 * s3 - 15 * s4;
    const double d2 = s - 4.5 * s2 + 6 * s3 - 2.5 * s4;
    const double d3 = 1.5 * s2 - 4 * s3 + 2.5 * s4;
    const double d4 = -12 * s2 + 28 * s3 - 15 * s4;
    return (d0 / h) * (states[k] - states[k + 1]) + d1 * velocities[k] + (h * d2) * accelerations[k] +
           (h * d3) * accelerations[k + 1] + d4 * velocities[k + 1];
}

Trajectory integrate(const VectorField& v, Point x0, double t_max, const IntegrateOptions& opts) {
    if (!(t_max > 0.0)) throw InvalidArgument("integrate: t_max must be positive");
    const Tolerance& tol = opts.tol;
    const BoxLimits box = inflated_box(v, opts.box_inflate);

    Trajectory tr;
    double t = 0.0;
    Point x = x0;
    Point k1 = v(x);
    tr.times.push_back(t);
    tr.states.push_back(x);
    tr.velocities.push_back(k1);
    tr.accelerations.push_back(acceleration(v, x, k1));

    if (norm(k1) < opts.equilibrium_tol) {
        tr.terminated_by = Termination::equilibrium_convergence;
        return tr;
    }
    if (!box.contains(x)) {
        tr.terminated_by = Termination::box_exit;
        return tr;
    }

    double h = initial_step(v, x, k1, t_max, tol);
    double err_old = 1e-4;
    bool last_rejected = false;
    std::size_t steps = 0;

    while (t < t_max) {
        if (++steps > opts.max_steps) {
            tr.terminated_by = Termination::step_underflow;
            return tr;
        }
        const double h_floor = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(t));
        bool final_step = false;
        if (t + h >= t_max || t_max - (t + h) < h_floor) {
            h = t_max - t;
            final_step = true;
        }
        if (h < h_floor && !final_step) {
            tr.terminated_by = Termination::step_underflow;
            return tr;
        }

        const Point k2 = v(x + (h * a21) * k1);
        const Point k3 = v(x + h * (a31 * k1 + a32 * k2));
        const Point k4 = v(x + h * (a41 * k1 + a42 * k2 + a43 * k3));
        const Point k5 = v(x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Point k6 = v(x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Point x_new = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Point k7 = v(x_new);
        const Point err_vec = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        double err = weighted_rms(err_vec, x, x_new, tol);
        if (!std::isfinite(err) || !std::isfinite(x_new.x) || !std::isfinite(x_new.y)) err = 1e10;

        if (err <= 1.0) {
            t = final_step ? t_max : t + h;
            x = x_new;
            k1 = k7;
            tr.times.push_back(t);
            tr.states.push_back(x);
            tr.velocities.push_back(k1);
            tr.accelerations.push_back(acceleration(v, x, k1));

            if (!box.contains(x)) {
                tr.terminated_by = Termination::box_exit;
                return tr;
            }
            if (norm(k1) < opts.equilibrium_tol) {
                tr.terminated_by = Termination::equilibrium_convergence;
                return tr;
            }
            const double fac11 = std::pow(err, kAlpha);
            double fac = fac11 / std::pow(err_old, kBeta);
            fac = std::clamp(fac / kSafety, 1.0 / kMaxRatio, 1.0 / kMinRatio);
            double h_new = h / fac;
            if (last_rejected) h_new = std::min(h_new, h);
            err_old = std::max(err, 1e-4);
            last_rejected = false;
            if (!final_step) h = h_new;
        } else {
            ++tr.rejected_steps;
            const double fac11 = std::pow(err, kAlpha);
            h = h / std::min(1.0 / kMinRatio, fac11 / kSafety);
            last_rejected = true;
        }
    }
    tr.terminated_by = Termination::t_end;
    return tr;
}

Section Section::make(Point anchor, Point normal, double halfwidth) {
    const double n = norm(normal);
    if (!(n > 0.0)) throw InvalidArgument("section normal must be nonzero");
    if (!(halfwidth > 0.0)) throw InvalidArgument("section halfwidth must be positive");
    return Section{anchor, (1.0 / n) * normal, halfwidth};
}

std::vector<Crossing> section_crossings(const VectorField& v, const Trajectory& traj, const Section& s) {
    std::vector<Crossing> out;
    for (std::size_t k = 0; k + 1 < traj.size(); ++k) {
        const double s0 = s.signed_distance(traj.states[k]);
        const double s1 = s.signed_distance(traj.states[k + 1]);
        if (!(s0 < 0.0 && s1 >= 0.0)) continue;
        double lo = traj.times[k], hi = traj.times[k + 1];
        while (hi - lo > 1e-10) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            if (s.signed_distance(traj.dense(mid)) < 0.0) lo = mid;
            else hi = mid;
        }
        const double tc = 0.5 * (lo + hi);
        const Point p = traj.dense(tc);
        if (std::fabs(s.coordinate(p)) > s.halfwidth) continue;
        if (!(dot(s.normal, v(p)) > 0.0)) continue;
        out.push_back({tc, p});
    }
    return out;
}

void write_csv(std::ostream& os, const Trajectory& traj) {
    os.precision(17);
    os << "t,x,y\n";
    for (std::size_t k = 0; k < traj.size(); ++k)
        os << traj.times[k] << "," << traj.states[k].x << "," << traj.states[k].y << "\n";
}

void write_svg(std::ostream& os, const Trajectory& traj) {
    Point lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Point hi = -lo;
    for (const Point& p : traj.states) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    const Point pad = 0.05 * (hi - lo) + Point{1e-6, 1e-6};
    SvgCanvas canvas(lo - pad, hi + pad, 600);
    canvas.polyline(traj.states, "#1f4e9c", 1.2);
    canvas.write(os);
}

} // namespace cyclebound::ode
