#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cyclebound/critfind/critfind.hpp"
#include "cyclebound/geometry.hpp"
#include "cyclebound/milnorfiber/milnorfiber.hpp"
#include "cyclebound/odeflow/odeflow.hpp"

namespace cyclebound::cycles {

using critfind::CriticalPoint;
using polyalg::VectorField;

enum class Stability { attracting, repelling, semi_stable };

const char* stability_name(Stability s);

struct LimitCycle {
    // Closed polyline sampled uniformly in time, oriented counterclockwise
    // (so enclosed points have winding number +1 whichever way the flow turns).
    Polyline points;
    double period = 0.0;
    Stability stability = Stability::attracting;
    // Derivative of the return map, exp of the divergence integral.
    double return_derivative = 1.0;
    std::vector<int> enclosed_cp_ids;
    double closure_residual = 0.0;
    Point anchor;
    double mean_radius = 0.0;

    friend bool operator==(const LimitCycle&, const LimitCycle&) = default;
};

struct CycleConfig {
    int rays = 16;
    int radii = 12;
    int grid_seeds = 20;
    double t_horizon = 60.0;
    ode::Tolerance seed_tol{1e-10, 1e-12};
    ode::Tolerance refine_tol{1e-11, 1e-13};
    double dedup_tol = 1e-4;
    double isolation_tol = 1e-6;
    // Successive crossing gaps must shrink by at least this relative amount.
    double ratio_tol = 1e-3;
    // Crossing gaps below this (times max(1, |rho|)) count as converged.
    double noise_floor = 1e-8;
    double closure_tol = 1e-8;
    double perturbation = 1e-3;
    int polyline_points = 512;
    unsigned threads = 0;
};

// Limit cycles found from seeded trajectories, ordered by mean radius. Every
// returned cycle encloses at least one critical point. Dropped candidates are
// described in `notes` when given.
std::vector<LimitCycle> detect_limit_cycles(const VectorField& v, std::span<const CriticalPoint> cps,
                                            const CycleConfig& cfg = {},
                                            std::vector<std::string>* notes = nullptr);

struct Return {
    Point x_next;
    double t_return;
};

// First return of the orbit through x (on s) to s in the +normal direction.
// Throws NoReturn if there is none within t_horizon.
Return return_map(const VectorField& v, const ode::Section& s, Point x, double t_horizon = 60.0,
                  const ode::Tolerance& tol = {});

// entry [c][i]: winding number of cycle c around cps[i]. Throws PointOnCycle
// when a point lies within tol of a cycle.
std::vector<std::vector<int>> enclosure_matrix(std::span<const LimitCycle> cycles,
                                               std::span<const CriticalPoint> cps, double tol = 1e-9);

struct Residence {
    double mean_speed = 0.0;
    double relative_variation = 0.0;
};

// Statistics of |V(x) - V(p)| along the cycle.
Residence fiber_residence(const LimitCycle& cycle, const VectorField& v, const CriticalPoint& cp);

struct ClassMatch {
    std::optional<int> component_index;
    double hausdorff = 0.0;
};

// Nearest closed fiber component (Hausdorff distance).
ClassMatch cycle_class_map(const LimitCycle& cycle, const milnor::FiberCurve& fiber);

} // namespace cyclebound::cycles
