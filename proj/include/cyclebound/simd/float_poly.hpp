#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace cyclebound::simd {

// Dense double-precision image of a bivariate polynomial, laid out for
// two-level Horner evaluation: row j holds the coefficients of y^j, indexed
// by the power of x. Scalar and vector kernels perform the same sequence of
// fused multiply-adds, so they agree bit for bit. Row evaluation collapses y
// first and so only agrees with eval() to rounding.
class FloatPoly {
public:
    FloatPoly() = default;
    // coeffs[j * (degree + 1) + i] is the coefficient of x^i y^j.
    FloatPoly(int degree, std::vector<double> coeffs);

    int degree() const noexcept { return degree_; }
    int stride() const noexcept { return degree_ + 1; }
    const double* data() const noexcept { return coeffs_.data(); }
    double coeff(int i, int j) const { return coeffs_[static_cast<std::size_t>(j * stride() + i)]; }
    bool is_zero() const noexcept { return degree_ < 0; }

    double eval(double x, double y) const {
        if (degree_ < 0) return 0.0;
        const int n = degree_;
        double acc = 0.0;
        for (int j = n; j >= 0; --j) {
            const double* row = coeffs_.data() + j * (n + 1);
            double r = row[n - j];
            for (int i = n - j - 1; i >= 0; --i) r = std::fma(r, x, row[i]);
            acc = std::fma(acc, y, r);
        }
        return acc;
    }

private:
    int degree_ = -1;
    std::vector<double> coeffs_;
};

} // namespace cyclebound::simd
