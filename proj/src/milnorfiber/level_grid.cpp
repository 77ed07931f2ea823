#include "cyclebound/milnorfiber/milnorfiber.hpp"

#include <cmath>

#include "cyclebound/errors.hpp"
#include "cyclebound/simd/kernels.hpp"

namespace cyclebound::milnor {

LevelGrid sample_level_grid(const VectorField& v, Point center, double delta, double eta, int n) {
    if (n < 1) throw InvalidArgument("grid must be positive");
    if (!(delta > 0.0)) throw InvalidArgument("delta must be positive");

    LevelGrid g;
    g.center = center;
    g.base_value = v(center);
    g.delta = delta;
    g.eta = eta;
    g.n = n;
    g.h = 2.0 * delta / n;
    g.origin = center - Point{delta, delta};

    const std::size_t stride = static_cast<std::size_t>(n) + 1;
    g.values.resize(stride * stride);
    std::vector<double> prow(stride), qrow(stride);
    std::vector<std::uint8_t> inside(stride * stride);
    const auto& k = simd::active_kernels();
    const double eta2 = eta * eta;
    for (int j = 0; j <= n; ++j) {
        const double y = g.origin.y + j * g.h;
        k.eval_row(v.fast_p(), g.origin.x, g.h, y, prow.data(), stride);
        k.eval_row(v.fast_q(), g.origin.x, g.h, y, qrow.data(), stride);
        double* out = g.values.data() + j * stride;
        k.level_values(prow.data(), qrow.data(), g.base_value.x, g.base_value.y, eta2, out, stride);
        for (int i = 0; i <= n; ++i)
            inside[j * stride + i] = distance(g.node(i, j), center) <= delta ? 1 : 0;
    }

    g.kept.assign(static_cast<std::size_t>(n) * n, 0);
    g.center_sign.assign(static_cast<std::size_t>(n) * n, 0);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const bool any = inside[j * stride + i] || inside[j * stride + i + 1] ||
                             inside[(j + 1) * stride + i] || inside[(j + 1) * stride + i + 1];
            if (!any) continue;
            const std::size_t c = static_cast<std::size_t>(j) * n + i;
            g.kept[c] = 1;
            const bool s0 = g.positive(i, j), s1 = g.positive(i + 1, j);
            const bool s2 = g.positive(i + 1, j + 1), s3 = g.positive(i, j + 1);
            if (s0 == s2 && s1 == s3 && s0 != s1) {
                const Point m = g.node(i, j) + Point{0.5 * g.h, 0.5 * g.h};
                const Point d = v(m) - g.base_value;
                const double val = d.x * d.x + d.y * d.y - eta2;
                g.center_sign[c] = val >= 0.0 ? 1 : -1;
            }
        }
    }
    return g;
}

} // namespace cyclebound::milnor
