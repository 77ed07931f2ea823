#pragma once

#include <memory>
#include <optional>
#include <string>

#include "cyclebound/geometry.hpp"
#include "cyclebound/polyalg/interval.hpp"
#include "cyclebound/polyalg/poly2.hpp"
#include "cyclebound/simd/float_poly.hpp"

namespace cyclebound::polyalg {

struct SearchBox {
    Rational x_lo = -5, x_hi = 5;
    Rational y_lo = -5, y_hi = 5;

    Box2 enclosure() const;
    friend bool operator==(const SearchBox&, const SearchBox&) = default;
};

struct Jacobian {
    double a = 0, b = 0;  // dP/dx, dP/dy
    double c = 0, d = 0;  // dQ/dx, dQ/dy

    double det() const { return a * d - b * c; }
    double trace() const { return a + d; }
};

// The planar system x' = P(x, y), y' = Q(x, y) on a rectangular search box.
// Exact polynomials are kept for algebra; double-precision compiled forms of
// P, Q and their partials are built once for the numerical modules.
class VectorField {
public:
    VectorField(Poly2 p, Poly2 q, std::optional<std::string> name = std::nullopt,
                SearchBox box = {});

    const Poly2& p() const noexcept { return p_; }
    const Poly2& q() const noexcept { return q_; }
    const std::optional<std::string>& name() const noexcept { return name_; }
    const SearchBox& box() const noexcept { return box_; }

    double box_x_lo() const { return fast_->box_lo.x; }
    double box_x_hi() const { return fast_->box_hi.x; }
    double box_y_lo() const { return fast_->box_lo.y; }
    double box_y_hi() const { return fast_->box_hi.y; }

    Point operator()(Point x) const {
        return {fast_->p.eval(x.x, x.y), fast_->q.eval(x.x, x.y)};
    }
    Jacobian jacobian(Point x) const;
    double divergence(Point x) const { return fast_->px.eval(x.x, x.y) + fast_->qy.eval(x.x, x.y); }

    const simd::FloatPoly& fast_p() const { return fast_->p; }
    const simd::FloatPoly& fast_q() const { return fast_->q; }
    const simd::FloatPoly& fast_px() const { return fast_->px; }
    const simd::FloatPoly& fast_py() const { return fast_->py; }
    const simd::FloatPoly& fast_qx() const { return fast_->qx; }
    const simd::FloatPoly& fast_qy() const { return fast_->qy; }

    // The field with time reversed: (-P, -Q).
    VectorField reversed() const;
    VectorField with_name(std::string name) const;
    VectorField with_box(SearchBox box) const;

    friend bool operator==(const VectorField& a, const VectorField& b) {
        return a.p_ == b.p_ && a.q_ == b.q_ && a.name_ == b.name_ && a.box_ == b.box_;
    }

private:
    struct Compiled {
        simd::FloatPoly p, q, px, py, qx, qy;
        Point box_lo, box_hi;
    };

    Poly2 p_;
    Poly2 q_;
    std::optional<std::string> name_;
    SearchBox box_;
    std::shared_ptr<const Compiled> fast_;
};

// dP/dx * dQ/dy - dP/dy * dQ/dx, exactly.
Poly2 jacobian_det(const VectorField& v);

} // namespace cyclebound::polyalg
