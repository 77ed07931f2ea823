#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "cyclebound/polyalg/parser.hpp"
#include "cyclebound/simd/kernels.hpp"
#include "support/generators.hpp"

using namespace cyclebound;

namespace {

std::vector<const simd::KernelTable*> vector_tables() {
    std::vector<const simd::KernelTable*> out;
    if (auto* t = simd::avx2_kernels()) out.push_back(t);
    if (auto* t = simd::neon_kernels()) out.push_back(t);
    return out;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

} // namespace

TEST_CASE("scalar row evaluation agrees with FloatPoly::eval to rounding") {
    const auto v = polyalg::parse_vector_field("P = (1 - x^2)*y - x + 3*x^4*y\nQ = y\n");
    const auto& s = simd::scalar_kernels();
    std::vector<double> out(37);
    s.eval_row(v.fast_p(), -1.3, 0.07, 0.4, out.data(), out.size());
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double ref = v.fast_p().eval(-1.3 + k * 0.07, 0.4);
        CHECK(std::abs(out[k] - ref) <= 1e-13 * std::max(1.0, std::abs(ref)));
    }
    std::vector<double> xs(out.size()), ys(out.size(), 0.4), pts(out.size());
    for (std::size_t k = 0; k < xs.size(); ++k) xs[k] = -1.3 + static_cast<double>(k) * 0.07;
    s.eval_points(v.fast_p(), xs.data(), ys.data(), pts.data(), pts.size());
    for (std::size_t k = 0; k < out.size(); ++k) CHECK(pts[k] == v.fast_p().eval(xs[k], 0.4));
}

TEST_CASE("vector kernels reproduce scalar kernels bit for bit") {
    const auto tables = vector_tables();
    if (tables.empty()) MESSAGE("no vector ISA available; equivalence is vacuous here");
    std::mt19937_64 g(21);
    const auto& ref = simd::scalar_kernels();
    for (const auto* t : tables) {
        INFO(simd::isa_name(t->isa));
        for (int k = 0; k < 200; ++k) {
            const auto p = polyalg::VectorField(testgen::poly(g, testgen::uniform_int(g, 0, 7)), polyalg::Poly2(1)).fast_p();
            const std::size_t n = static_cast<std::size_t>(testgen::uniform_int(g, 0, 41));
            std::vector<double> xs(n), ys(n), q(n);
            for (std::size_t i = 0; i < n; ++i) {
                xs[i] = testgen::uniform(g, -3, 3);
                ys[i] = testgen::uniform(g, -3, 3);
                q[i] = testgen::uniform(g, -3, 3);
            }
            std::vector<double> a(n), b(n);
            ref.eval_points(p, xs.data(), ys.data(), a.data(), n);
            t->eval_points(p, xs.data(), ys.data(), b.data(), n);
            REQUIRE(same_bits(a, b));

            const double x0 = testgen::uniform(g, -3, 3), dx = testgen::uniform(g, 1e-3, 0.1), y = testgen::uniform(g, -3, 3);
            ref.eval_row(p, x0, dx, y, a.data(), n);
            t->eval_row(p, x0, dx, y, b.data(), n);
            REQUIRE(same_bits(a, b));

            ref.level_values(xs.data(), ys.data(), 0.3, -0.2, 0.5, a.data(), n);
            t->level_values(xs.data(), ys.data(), 0.3, -0.2, 0.5, b.data(), n);
            REQUIRE(same_bits(a, b));

            ref.norm2(xs.data(), q.data(), a.data(), n);
            t->norm2(xs.data(), q.data(), b.data(), n);
            REQUIRE(same_bits(a, b));
        }
    }
}

TEST_CASE("active table is one of the compiled tables") {
    const auto& a = simd::active_kernels();
    const bool known = &a == &simd::scalar_kernels() || &a == simd::avx2_kernels() || &a == simd::neon_kernels();
    CHECK(known);
}
