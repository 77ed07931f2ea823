#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <map>
#include <string>

namespace cyclebound::polyalg {

using Rational = mpq_class;

// Exact rational value of a finite double.
Rational to_rational(double value);
double to_double(const Rational& value);

struct Exponent {
    unsigned i = 0;  // power of x
    unsigned j = 0;  // power of y

    friend bool operator==(Exponent, Exponent) = default;
};

// Graded lexicographic on (i + j, i), highest term first.
struct GradedLexDescending {
    bool operator()(Exponent a, Exponent b) const {
        if (a.i + a.j != b.i + b.j) return a.i + a.j > b.i + b.j;
        return a.i > b.i;
    }
};

enum class Var { x1, x2 };

struct AffineMap {
    // x -> a11 x + a12 y + b1,  y -> a21 x + a22 y + b2
    Rational a11 = 1, a12 = 0, b1 = 0;
    Rational a21 = 0, a22 = 1, b2 = 0;
};

// Exact bivariate polynomial with rational coefficients. Zero coefficients
// are never stored, so structural equality is polynomial equality.
class Poly2 {
public:
    using Terms = std::map<Exponent, Rational, GradedLexDescending>;

    Poly2() = default;
    explicit Poly2(const Rational& c);

    static Poly2 x();
    static Poly2 y();
    static Poly2 monomial(unsigned i, unsigned j, const Rational& c);

    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }
    bool is_constant() const noexcept;
    int degree() const noexcept;
    Rational coeff(unsigned i, unsigned j) const;

    Poly2& operator+=(const Poly2& other);
    Poly2& operator-=(const Poly2& other);
    Poly2& operator*=(const Poly2& other);
    Poly2& operator*=(const Rational& s);

    friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
    friend Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }
    friend Poly2 operator*(Poly2 a, const Poly2& b) { return a *= b; }
    friend Poly2 operator*(Poly2 a, const Rational& s) { return a *= s; }
    friend Poly2 operator*(const Rational& s, Poly2 a) { return a *= s; }
    friend Poly2 operator-(Poly2 a);
    friend bool operator==(const Poly2& a, const Poly2& b);

    Poly2 pow(unsigned n) const;
    Poly2 partial(Var v) const;
    Poly2 compose(const AffineMap& map) const;

    // Horner evaluation in double precision.
    double eval(double x, double y) const;

    struct Evaluation {
        double value;
        // sum |c| |x|^i |y|^j / |value|; the relative error of `value` is
        // bounded by roughly (degree + 2) * eps * condition.
        double condition;
    };
    Evaluation eval_with_condition(double x, double y) const;

private:
    void add_term(Exponent e, const Rational& c);

    Terms terms_;
};

Poly2 partial(const Poly2& p, Var v);

// Canonical text form: graded-lex order, explicit '*' and '^', rationals as p/q.
std::string render(const Poly2& p);

} // namespace cyclebound::polyalg
