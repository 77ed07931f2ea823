#pragma once

#include <cmath>
#include <cstddef>

#include "cyclebound/simd/float_poly.hpp"
#include "cyclebound/simd/kernels.hpp"

namespace cyclebound::simd {

// Coefficients of x^i after substituting y: col[i] = sum_j c(i, j) y^j,
// evaluated by Horner in y. Shared by every eval_row variant so the
// per-row setup is identical across ISAs.
inline void collapse_rows(const FloatPoly& p, double y, double* col) {
    const int deg = p.degree();
    for (int i = 0; i <= deg; ++i) {
        double a = p.coeff(i, deg - i);
        for (int j = deg - i - 1; j >= 0; --j) a = std::fma(a, y, p.coeff(i, j));
        col[i] = a;
    }
}

namespace scalar {
void eval_points(const FloatPoly&, const double*, const double*, double*, std::size_t);
void eval_row(const FloatPoly&, double, double, double, double*, std::size_t);
void level_values(const double*, const double*, double, double, double, double*, std::size_t);
void norm2(const double*, const double*, double*, std::size_t);
} // namespace scalar

namespace avx2 {
void eval_points(const FloatPoly&, const double*, const double*, double*, std::size_t);
void eval_row(const FloatPoly&, double, double, double, double*, std::size_t);
void level_values(const double*, const double*, double, double, double, double*, std::size_t);
void norm2(const double*, const double*, double*, std::size_t);
} // namespace avx2

namespace neon {
void eval_points(const FloatPoly&, const double*, const double*, double*, std::size_t);
void eval_row(const FloatPoly&, double, double, double, double*, std::size_t);
void level_values(const double*, const double*, double, double, double, double*, std::size_t);
void norm2(const double*, const double*, double*, std::size_t);
} // namespace neon

} // namespace cyclebound::simd
