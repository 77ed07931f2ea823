// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <vector>

#include "kernels_impl.hpp"

namespace cyclebound::simd::avx2 {

void eval_points(const FloatPoly& p, const double* xs, const double* ys, double* out,
                 std::size_t n) {
    const int deg = p.degree();
    std::size_t k = 0;
    if (deg >= 0) {
        const double* c = p.data();
        const int stride = deg + 1;
        for (; k + 4 <= n; k += 4) {
            const __m256d x = _mm256_loadu_pd(xs + k);
            const __m256d y = _mm256_loadu_pd(ys + k);
            __m256d acc = _mm256_setzero_pd();
            for (int j = deg; j >= 0; --j) {
                const double* row = c + j * stride;
                __m256d r = _mm256_set1_pd(row[deg - j]);
                for (int i = deg - j - 1; i >= 0; --i) r = _mm256_fmadd_pd(r, x, _mm256_set1_pd(row[i]));
                acc = _mm256_fmadd_pd(acc, y, r);
            }
            _mm256_storeu_pd(out + k, acc);
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
    const __m256d vx0 = _mm256_set1_pd(x0);
    const __m256d vdx = _mm256_set1_pd(dx);
    const __m256d step = _mm256_set_pd(3.0, 2.0, 1.0, 0.0);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d idx = _mm256_add_pd(_mm256_set1_pd(static_cast<double>(k)), step);
        const __m256d x = _mm256_add_pd(vx0, _mm256_mul_pd(idx, vdx));
        __m256d r = _mm256_set1_pd(col[static_cast<std::size_t>(deg)]);
        for (int i = deg - 1; i >= 0; --i)
            r = _mm256_fmadd_pd(r, x, _mm256_set1_pd(col[static_cast<std::size_t>(i)]));
        _mm256_storeu_pd(out + k, r);
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
    const __m256d vp0 = _mm256_set1_pd(p0);
    const __m256d vq0 = _mm256_set1_pd(q0);
    const __m256d neg = _mm256_set1_pd(-eta2);
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(p + k), vp0);
        const __m256d d2 = _mm256_sub_pd(_mm256_loadu_pd(q + k), vq0);
        _mm256_storeu_pd(out + k, _mm256_fmadd_pd(d1, d1, _mm256_fmadd_pd(d2, d2, neg)));
    }
    scalar::level_values(p + k, q + k, p0, q0, eta2, out + k, n - k);
}

void norm2(const double* px, const double* py, double* out, std::size_t n) {
    std::size_t k = 0;
    for (; k + 4 <= n; k += 4) {
        const __m256d a = _mm256_loadu_pd(px + k);
        const __m256d b = _mm256_loadu_pd(py + k);
        _mm256_storeu_pd(out + k, _mm256_fmadd_pd(a, a, _mm256_mul_pd(b, b)));
    }
    scalar::norm2(px + k, py + k, out + k, n - k);
}

} // namespace cyclebound::simd::avx2
