#include <cmath>
#include <vector>

#include "kernels_impl.hpp"

namespace cyclebound::simd::scalar {

void eval_points(const FloatPoly& p, const double* xs, const double* ys, double* out,
                 std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) out[k] = p.eval(xs[k], ys[k]);
}

void eval_row(const FloatPoly& p, double x0, double dx, double y, double* out, std::size_t n) {
    const int deg = p.degree();
    if (deg < 0) {
        for (std::size_t k = 0; k < n; ++k) out[k] = 0.0;
        return;
    }
    std::vector<double> col(static_cast<std::size_t>(deg + 1));
    collapse_rows(p, y, col.data());
    for (std::size_t k = 0; k < n; ++k) {
        const double x = x0 + static_cast<double>(k) * dx;
        double r = col[static_cast<std::size_t>(deg)];
        for (int i = deg - 1; i >= 0; --i) r = std::fma(r, x, col[static_cast<std::size_t>(i)]);
        out[k] = r;
    }
}

void level_values(const double* p, const double* q, double p0, double q0, double eta2,
                  double* out, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
        const double d1 = p[k] - p0;
        const double d2 = q[k] - q0;
        out[k] = std::fma(d1, d1, std::fma(d2, d2, -eta2));
    }
}

void norm2(const double* px, const double* py, double* out, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) out[k] = std::fma(px[k], px[k], py[k] * py[k]);
}

} // namespace cyclebound::simd::scalar
