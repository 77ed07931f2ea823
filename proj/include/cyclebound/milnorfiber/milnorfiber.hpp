#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cyclebound/critfind/critfind.hpp"
#include "cyclebound/geometry.hpp"
#include "cyclebound/polyalg/vector_field.hpp"

namespace cyclebound::milnor {

using critfind::CriticalPoint;
using polyalg::VectorField;

struct MilnorConfig {
    int grid = 256;
    int max_grid = 2048;
    int sweep_len = 8;
    int stable_tail = 4;
    double delta_cap = 2.5;
    double submersion_tol = 1e-8;
    // Sweep spans [eta_max / eta_span, eta_max].
    double eta_span = 100.0;
    int sphere_samples = 720;
    // Relative window around min |f| on the sphere in which a fiber is
    // treated as tangent to the sphere.
    double tangency_tol = 1e-3;
};

// One connected piece of an extracted fiber. Closed components repeat their
// first vertex at the end.
struct Component {
    Polyline vertices;
    bool closed = false;
    // For open components: both endpoints lie on the (discretized) sphere.
    bool arc_endpoints_on_sphere = false;
};

struct FiberCurve {
    std::vector<Component> components;
    Point center;
    double eta = 0.0;
    double delta = 0.0;
    int grid_resolution = 0;
    // max over vertices of | |f(x)|^2 - eta^2 |
    double max_residual = 0.0;
    // Cells at the accepted resolution whose enclosure of g straddles 0
    // without any resolved crossing nearby.
    int unresolved_cells = 0;
};

struct Radii {
    double delta = 0.0;
    std::vector<double> eta_sweep;  // ascending
    double eta_max = 0.0;
    double sphere_min = 0.0;        // min |f| over the sphere samples
};

// f = V - V(p) is the germ at p; all fibers are level sets of |f|.
Radii select_radii(const VectorField& v, const CriticalPoint& cp, std::span<const CriticalPoint> all_cps,
                   const MilnorConfig& cfg = {});

// Node samples of g(x) = |V(x) - V(p)|^2 - eta^2 on an n x n cell grid over
// the bounding square of the ball B_delta(p). Cells with no corner inside
// the ball are dropped; saddle cells carry the sign of g at their center.
struct LevelGrid {
    Point center;
    Point base_value;  // V(p)
    double delta = 0.0;
    double eta = 0.0;
    int n = 0;
    double h = 0.0;
    Point origin;                    // lower-left node
    std::vector<double> values;      // (n+1)^2, row-major in y
    std::vector<std::uint8_t> kept;  // n^2
    std::vector<std::int8_t> center_sign;  // n^2, nonzero on saddle cells only

    double value(int i, int j) const { return values[static_cast<std::size_t>(j) * (n + 1) + i]; }
    bool positive(int i, int j) const { return value(i, j) >= 0.0; }
    bool cell_kept(int i, int j) const { return kept[static_cast<std::size_t>(j) * n + i] != 0; }
    std::int8_t saddle_sign(int i, int j) const { return center_sign[static_cast<std::size_t>(j) * n + i]; }
    Point node(int i, int j) const { return origin + Point{i * h, j * h}; }
};

LevelGrid sample_level_grid(const VectorField& v, Point center, double delta, double eta, int n);

// Marching squares on a sampled grid, no refinement.
std::vector<Component> march(const LevelGrid& grid);

// Adaptive extraction: starts at cfg.grid and doubles (up to cfg.max_grid)
// while isolated cells straddle the level without a resolved crossing.
FiberCurve extract_fiber(const VectorField& v, const CriticalPoint& cp, double delta, double eta,
                         const MilnorConfig& cfg = {});

struct Betti {
    int b0 = 0;
    int closed_count = 0;
};

Betti betti(const FiberCurve& f);

struct SweepEntry {
    double eta = 0.0;
    int closed_count = 0;
    int arc_count = 0;
    int grid = 0;
    double max_residual = 0.0;
    bool failed = false;
    std::string error;

    friend bool operator==(const SweepEntry&, const SweepEntry&) = default;
};

struct SubmersionResult {
    bool ok = true;
    std::optional<Point> witness;
};

// Checks that the first-coordinate map P - P(p) has nonvanishing gradient on
// the grid nodes of the annulus eta_min <= |f| <= eta_max inside the ball.
SubmersionResult submersion_check(const VectorField& v, const CriticalPoint& cp, double delta,
                                  std::span<const double> eta_sweep, const MilnorConfig& cfg = {});

struct MilnorData {
    int point_id = 0;
    double delta = 0.0;
    double eta_max = 0.0;
    std::vector<double> eta_sweep;
    std::vector<SweepEntry> counts_per_eta;
    int l = 0;
    bool stable = false;
    bool submersion_ok = false;
    std::optional<Point> witness;
    // Radius selection itself failed; no sweep was run.
    bool failed = false;
    std::string error;

    bool any_extraction_failed() const;
    friend bool operator==(const MilnorData&, const MilnorData&) = default;
};

MilnorData vanishing_cycle_count(const VectorField& v, const CriticalPoint& cp,
                                 std::span<const CriticalPoint> all_cps, const MilnorConfig& cfg = {});

// One <path> per component; closed components are filled.
void write_fiber_svg(std::ostream& os, const FiberCurve& f);

} // namespace cyclebound::milnor
