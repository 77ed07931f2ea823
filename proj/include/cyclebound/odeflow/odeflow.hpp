#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "cyclebound/geometry.hpp"
#include "cyclebound/polyalg/vector_field.hpp"

namespace cyclebound::ode {

using polyalg::VectorField;

struct Tolerance {
    double rtol = 1e-9;
    double atol = 1e-12;
};

struct IntegrateOptions {
    Tolerance tol;
    // Stop when |V(x)| drops below this.
    double equilibrium_tol = 1e-10;
    // Stop after leaving the search box scaled by this factor about its center.
    double box_inflate = 1.5;
    std::size_t max_steps = 2'000'000;
};

enum class Termination { t_end, box_exit, equilibrium_convergence, step_underflow };

const char* termination_name(Termination t);

// Accepted steps of an integration. Besides states, the velocity and the
// acceleration (J V) at every node are kept; together they define a quintic
// Hermite interpolant on each step.
struct Trajectory {
    std::vector<double> times;
    std::vector<Point> states;
    std::vector<Point> velocities;
    std::vector<Point> accelerations;
    Termination terminated_by = Termination::t_end;
    std::size_t rejected_steps = 0;

    double t_begin() const { return times.front(); }
    double t_end() const { return times.back(); }
    std::size_t size() const { return times.size(); }

    Point dense(double t) const;
    Point dense_velocity(double t) const;

    // Index k with times[k] <= t <= times[k+1].
    std::size_t locate(double t) const;
};

// Dormand-Prince 5(4) with PI step-size control.
Trajectory integrate(const VectorField& v, Point x0, double t_max, const IntegrateOptions& opts = {});

// Oriented transversal segment {anchor + u * tangent : |u| <= halfwidth},
// tangent = (-normal.y, normal.x).
struct Section {
    Point anchor;
    Point normal{1.0, 0.0};
    double halfwidth = 1.0;

    Point tangent() const { return {-normal.y, normal.x}; }
    double signed_distance(Point p) const { return dot(normal, p - anchor); }
    double coordinate(Point p) const { return dot(tangent(), p - anchor); }
    Point at(double u) const { return anchor + u * tangent(); }

    static Section make(Point anchor, Point normal, double halfwidth);
};

struct Crossing {
    double t;
    Point point;
};

// Crossings of the section in the +normal direction, each located to 1e-10
// in time by bisection on the dense output.
std::vector<Crossing> section_crossings(const VectorField& v, const Trajectory& traj, const Section& s);

// Export as "t,x,y" rows with a header line.
void write_csv(std::ostream& os, const Trajectory& traj);
// Standalone SVG document with the trajectory as one polyline.
void write_svg(std::ostream& os, const Trajectory& traj);

} // namespace cyclebound::ode
