#pragma once

#include <cstddef>
#include <span>

#include "cyclebound/simd/float_poly.hpp"

namespace cyclebound::simd {

enum class Isa { scalar, avx2, neon };

const char* isa_name(Isa isa);

// One implementation of every data-parallel inner loop. The scalar table is
// the reference; vector tables must reproduce it bit for bit.
struct KernelTable {
    Isa isa;

    // out[k] = p(xs[k], ys[k])
    void (*eval_points)(const FloatPoly& p, const double* xs, const double* ys, double* out,
                        std::size_t n);

    // out[k] = p(x0 + k * dx, y) for k in [0, n)
    void (*eval_row)(const FloatPoly& p, double x0, double dx, double y, double* out,
                     std::size_t n);

    // out[k] = (p[k] - p0)^2 + (q[k] - q0)^2 - eta2
    void (*level_values)(const double* p, const double* q, double p0, double q0, double eta2,
                         double* out, std::size_t n);

    // out[k] = px[k]^2 + py[k]^2
    void (*norm2)(const double* px, const double* py, double* out, std::size_t n);
};

const KernelTable& scalar_kernels();
// nullptr when the variant was not compiled in or the CPU lacks the ISA.
const KernelTable* avx2_kernels();
const KernelTable* neon_kernels();

// The table selected at first use: the widest supported ISA, unless the
// CYCLEBOUND_SIMD environment variable names another one ("scalar", "avx2",
// "neon").
const KernelTable& active_kernels();

// Span conveniences over the active table.
void eval_points(const FloatPoly& p, std::span<const double> xs, std::span<const double> ys,
                 std::span<double> out);
void eval_row(const FloatPoly& p, double x0, double dx, double y, std::span<double> out);

} // namespace cyclebound::simd
