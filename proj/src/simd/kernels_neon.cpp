// AArch64 only; NEON (AdvSIMD) is baseline there, so no runtime check.
#include <arm_neon.h>

#include <vector>

#include "kernels_impl.hpp"

namespace cyclebound::simd::neon {

void eval_points(const FloatPoly& p, const double* xs, const double* ys, double* out,
                 std::size_t n) {
    const int deg = p.degree();
    std::size_t k = 0;
    if (deg >= 0) {
        const double* c = p.data();
        const int stride = deg + 1;
        for (; k + 2 <= n; k += 2) {
            const float64x2_t x = vld1q_f64(xs + k);
            const float64x2_t y = vld1q_f64(ys + k);
            float64x2_t acc = vdupq_n_f64(0.0);
            for (int j = deg; j >= 0; --j) {
                const double* row = c + j * stride;
                float64x2_t r = vdupq_n_f64(row[deg - j]);
                // vfmaq_f64(a, b, c) = a + b * c, fused
                for (int i = deg - j - 1; i >= 0; --i) r = vfmaq_f64(vdupq_n_f64(row[i]), r, x);
                acc = vfmaq_f64(r, acc, y);
            }
            vst1q_f64(out + k, acc);
        }
    }
    scalar::eval_points(p, xs + k, ys + k, out + k, n - k);
}

void eval_row(const FloatPoly& p, double x0, double dx, double y, double* out, std::size_t n) {
    const int deg = p.degree();
    if (deg < 0) {
        scalar::eval_row(p, x0, dx, y, out, n);
        return;
    }
    std::vector<double> col(static_cast<std::size_t>(deg + 1));
    collapse_rows(p, y, col.data());
    const float64x2_t vx0 = vdupq_n_f64(x0);
    const float64x2_t vdx = vdupq_n_f64(dx);
    const double steps[2] = {0.0, 1.0};
    const float64x2_t step = vld1q_f64(steps);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const float64x2_t idx = vaddq_f64(vdupq_n_f64(static_cast<double>(k)), step);
        const float64x2_t x = vaddq_f64(vx0, vmulq_f64(idx, vdx));
        float64x2_t r = vdupq_n_f64(col[static_cast<std::size_t>(deg)]);
        for (int i = deg - 1; i >= 0; --i)
            r = vfmaq_f64(vdupq_n_f64(col[static_cast<std::size_t>(i)]), r, x);
        vst1q_f64(out + k, r);
    }
    for (; k < n; ++k) {
        const double x = x0 + static_cast<double>(k) * dx;
        double r = col[static_cast<std::size_t>(deg)];
        for (int i = deg - 1; i >= 0; --i) r = std::fma(r, x, col[static_cast<std::size_t>(i)]);
        out[k] = r;
    }
}

void level_values(const double* p, const double* q, double p0, double q0, double eta2,
                  double* out, std::size_t n) {
    const float64x2_t vp0 = vdupq_n_f64(p0);
    const float64x2_t vq0 = vdupq_n_f64(q0);
    const float64x2_t neg = vdupq_n_f64(-eta2);
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const float64x2_t d1 = vsubq_f64(vld1q_f64(p + k), vp0);
        const float64x2_t d2 = vsubq_f64(vld1q_f64(q + k), vq0);
        vst1q_f64(out + k, vfmaq_f64(vfmaq_f64(neg, d2, d2), d1, d1));
    }
    scalar::level_values(p + k, q + k, p0, q0, eta2, out + k, n - k);
}

void norm2(const double* px, const double* py, double* out, std::size_t n) {
    std::size_t k = 0;
    for (; k + 2 <= n; k += 2) {
        const float64x2_t a = vld1q_f64(px + k);
        const float64x2_t b = vld1q_f64(py + k);
        vst1q_f64(out + k, vfmaq_f64(vmulq_f64(b, b), a, a));
    }
    scalar::norm2(px + k, py + k, out + k, n - k);
}

} // namespace cyclebound::simd::neon
