#pragma once

#include <vector>

#include "cyclebound/geometry.hpp"
#include "cyclebound/polyalg/interval.hpp"
#include "cyclebound/polyalg/vector_field.hpp"

namespace cyclebound::critfind {

using polyalg::Box2;
using polyalg::Jacobian;
using polyalg::VectorField;

struct SolveConfig {
    double residual_tol = 1e-12;
    double degeneracy_tol = 1e-9;
    int max_depth = 40;
    double resolution_tol = 1e-7;
    // Live boxes allowed on one subdivision level before the zero set is
    // declared non-isolated.
    std::size_t max_live_boxes = 1u << 15;
};

struct CriticalPoint {
    int id = 0;
    Point location;
    Box2 enclosure;
    Jacobian jacobian;
    bool nondegenerate = false;
    int index = 0;
    // Existence and uniqueness proven by the Krawczyk test; degenerate points
    // are only isolated by exclusion of everything around them.
    bool certified = false;
    bool on_boundary = false;
    double residual = 0.0;
};

// All zeros of V in its search box, sorted by (x, y), ids in that order.
// Throws DepthLimitExceeded when the zero set does not look finite and
// AmbiguousCluster when two zeros cannot be separated at resolution_tol.
std::vector<CriticalPoint> find_critical_points(const VectorField& v, const SolveConfig& cfg = {});

// Winding number of V along the circle of `radius` about `center`, from
// angle increments that are each kept below pi/2 by sample doubling.
int poincare_index(const VectorField& v, Point center, double radius, int samples = 64);

bool is_nondegenerate(const VectorField& v, Point p, double degeneracy_tol = SolveConfig{}.degeneracy_tol);

// Newton iteration on V from `start`; returns the best point found.
Point newton_polish(const VectorField& v, Point start, double residual_tol, int max_iter = 100);

} // namespace cyclebound::critfind
