#include "cyclebound/polyalg/poly2.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace cyclebound::polyalg {

Rational to_rational(double value) {
    if (!std::isfinite(value)) throw std::invalid_argument("to_rational: non-finite value");
    Rational r;
    mpq_set_d(r.get_mpq_t(), value);
    return r;
}

double to_double(const Rational& value) { return value.get_d(); }

Poly2::Poly2(const Rational& c) {
    if (c != 0) terms_.emplace(Exponent{0, 0}, c);
}

Poly2 Poly2::x() { return monomial(1, 0, 1); }
Poly2 Poly2::y() { return monomial(0, 1, 1); }

Poly2 Poly2::monomial(unsigned i, unsigned j, const Rational& c) {
    Poly2 p;
    if (c != 0) p.terms_.emplace(Exponent{i, j}, c);
    return p;
}

bool Poly2::is_constant() const noexcept {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == Exponent{0, 0});
}

int Poly2::degree() const noexcept {
    if (terms_.empty()) return -1;
    const Exponent lead = terms_.begin()->first;
    return static_cast<int>(lead.i + lead.j);
}

Rational Poly2::coeff(unsigned i, unsigned j) const {
    auto it = terms_.find(Exponent{i, j});
    return it == terms_.end() ? Rational(0) : it->second;
}

void Poly2::add_term(Exponent e, const Rational& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly2& Poly2::operator+=(const Poly2& other) {
    for (const auto& [e, c] : other.terms_) add_term(e, c);
    return *this;
}

Poly2& Poly2::operator-=(const Poly2& other) {
    for (const auto& [e, c] : other.terms_) add_term(e, -c);
    return *this;
}

Poly2& Poly2::operator*=(const Poly2& other) {
    Poly2 out;
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : other.terms_)
            out.add_term(Exponent{ea.i + eb.i, ea.j + eb.j}, Rational(ca * cb));
    terms_ = std::move(out.terms_);
    return *this;
}

Poly2& Poly2::operator*=(const Rational& s) {
    if (s == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
}

Poly2 operator-(Poly2 a) {
    for (auto& [e, c] : a.terms_) c = -c;
    return a;
}

bool operator==(const Poly2& a, const Poly2& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    auto ia = a.terms_.begin();
    for (auto ib = b.terms_.begin(); ib != b.terms_.end(); ++ia, ++ib)
        if (!(ia->first == ib->first) || ia->second != ib->second) return false;
    return true;
}

Poly2 Poly2::pow(unsigned n) const {
    Poly2 result(1);
    Poly2 base = *this;
    while (n > 0) {
        if (n & 1u) result *= base;
        n >>= 1u;
        if (n > 0) base *= base;
    }
    return result;
}

Poly2 Poly2::partial(Var v) const {
    Poly2 out;
    for (const auto& [e, c] : terms_) {
        if (v == Var::x1) {
            if (e.i > 0) out.add_term(Exponent{e.i - 1, e.j}, Rational(c * e.i));
        } else {
            if (e.j > 0) out.add_term(Exponent{e.i, e.j - 1}, Rational(c * e.j));
        }
    }
    return out;
}

Poly2 partial(const Poly2& p, Var v) { return p.partial(v); }

Poly2 Poly2::compose(const AffineMap& m) const {
    Poly2 lx = Poly2::monomial(1, 0, m.a11) + Poly2::monomial(0, 1, m.a12) + Poly2(m.b1);
    Poly2 ly = Poly2::monomial(1, 0, m.a21) + Poly2::monomial(0, 1, m.a22) + Poly2(m.b2);
    const int deg = degree();
    if (deg < 0) return {};
    std::vector<Poly2> xp(static_cast<std::size_t>(deg + 1)), yp(static_cast<std::size_t>(deg + 1));
    xp[0] = Poly2(1);
    yp[0] = Poly2(1);
    for (int k = 1; k <= deg; ++k) {
        xp[static_cast<std::size_t>(k)] = xp[static_cast<std::size_t>(k - 1)] * lx;
        yp[static_cast<std::size_t>(k)] = yp[static_cast<std::size_t>(k - 1)] * ly;
    }
    Poly2 out;
    for (const auto& [e, c] : terms_) out += (xp[e.i] * yp[e.j]) * c;
    return out;
}

double Poly2::eval(double x, double y) const {
    // Horner in x for each power of y, then Horner in y. Terms are visited in
    // descending graded order, so bucket them by power of y first.
    const int deg = degree();
    if (deg < 0) return 0.0;
    std::vector<double> dense(static_cast<std::size_t>((deg + 1) * (deg + 1)), 0.0);
    for (const auto& [e, c] : terms_) dense[e.j * static_cast<unsigned>(deg + 1) + e.i] = c.get_d();
    double acc = 0.0;
    for (int j = deg; j >= 0; --j) {
        double r = 0.0;
        for (int i = deg - j; i >= 0; --i) r = r * x + dense[static_cast<std::size_t>(j * (deg + 1) + i)];
        acc = acc * y + r;
    }
    return acc;
}

Poly2::Evaluation Poly2::eval_with_condition(double x, double y) const {
    const double value = eval(x, y);
    double absum = 0.0;
    for (const auto& [e, c] : terms_)
        absum += std::fabs(c.get_d()) * std::pow(std::fabs(x), e.i) * std::pow(std::fabs(y), e.j);
    const double cond = absum == 0.0 ? 1.0
                        : value == 0.0 ? std::numeric_limits<double>::infinity()
                                       : absum / std::fabs(value);
    return {value, cond};
}

namespace {

std::string rational_text(const Rational& q) {
    std::string s = q.get_num().get_str();
    if (q.get_den() != 1) s += "/" + q.get_den().get_str();
    return s;
}

std::string monomial_text(Exponent e) {
    std::string s;
    auto var = [&](char name, unsigned p) {
        if (p == 0) return;
        if (!s.empty()) s += "*";
        s += name;
        if (p > 1) s += "^" + std::to_string(p);
    };
    var('x', e.i);
    var('y', e.j);
    return s;
}

} // namespace

std::string render(const Poly2& p) {
    if (p.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [e, c] : p.terms()) {
        const bool negative = c < 0;
        const Rational mag = abs(c);
        if (first) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        first = false;
        const std::string mono = monomial_text(e);
        if (mono.empty()) {
            out += rational_text(mag);
        } else if (mag == 1) {
            out += mono;
        } else {
            out += rational_text(mag) + "*" + mono;
        }
    }
    return out;
}

} // namespace cyclebound::polyalg
