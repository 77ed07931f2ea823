#include "cyclebound/polyalg/vector_field.hpp"

#include "cyclebound/errors.hpp"

namespace cyclebound::polyalg {

namespace {

simd::FloatPoly compile(const Poly2& p) {
    const int deg = p.degree();
    if (deg < 0) return {};
    std::vector<double> dense(static_cast<std::size_t>((deg + 1) * (deg + 1)), 0.0);
    for (const auto& [e, c] : p.terms())
        dense[static_cast<std::size_t>(e.j) * static_cast<std::size_t>(deg + 1) + e.i] = c.get_d();
    return simd::FloatPoly(deg, std::move(dense));
}

} // namespace

Box2 SearchBox::enclosure() const {
    const Interval xl = enclose(x_lo), xh = enclose(x_hi), yl = enclose(y_lo), yh = enclose(y_hi);
    return Box2{Interval(xl.lo, xh.hi), Interval(yl.lo, yh.hi)};
}

VectorField::VectorField(Poly2 p, Poly2 q, std::optional<std::string> name, SearchBox box)
    : p_(std::move(p)), q_(std::move(q)), name_(std::move(name)), box_(std::move(box)) {
    if (p_.is_zero() && q_.is_zero()) throw InvalidArgument("vector field must have P or Q nonzero");
    if (!(box_.x_lo < box_.x_hi) || !(box_.y_lo < box_.y_hi))
        throw InvalidArgument("search box must have positive width and height");
    auto c = std::make_shared<Compiled>();
    c->p = compile(p_);
    c->q = compile(q_);
    c->px = compile(p_.partial(Var::x1));
    c->py = compile(p_.partial(Var::x2));
    c->qx = compile(q_.partial(Var::x1));
    c->qy = compile(q_.partial(Var::x2));
    c->box_lo = {box_.x_lo.get_d(), box_.y_lo.get_d()};
    c->box_hi = {box_.x_hi.get_d(), box_.y_hi.get_d()};
    fast_ = std::move(c);
}

Jacobian VectorField::jacobian(Point x) const {
    return {fast_->px.eval(x.x, x.y), fast_->py.eval(x.x, x.y), fast_->qx.eval(x.x, x.y),
            fast_->qy.eval(x.x, x.y)};
}

VectorField VectorField::reversed() const { return VectorField(-p_, -q_, name_, box_); }

VectorField VectorField::with_name(std::string name) const {
    return VectorField(p_, q_, std::move(name), box_);
}

VectorField VectorField::with_box(SearchBox box) const { return VectorField(p_, q_, name_, std::move(box)); }

Poly2 jacobian_det(const VectorField& v) {
    const Poly2 px = v.p().partial(Var::x1), py = v.p().partial(Var::x2);
    const Poly2 qx = v.q().partial(Var::x1), qy = v.q().partial(Var::x2);
    return px * qy - py * qx;
}

} // namespace cyclebound::polyalg
