#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"

namespace cyclebound::simd {

const char* isa_name(Isa isa) {
    switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
    }
    return "unknown";
}

const KernelTable& scalar_kernels() {
    static const KernelTable table{Isa::scalar, scalar::eval_points, scalar::eval_row,
                                   scalar::level_values, scalar::norm2};
    return table;
}

const KernelTable* avx2_kernels() {
#if defined(CYCLEBOUND_HAVE_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    static const KernelTable table{Isa::avx2, avx2::eval_points, avx2::eval_row,
                                   avx2::level_values, avx2::norm2};
    return supported ? &table : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable* neon_kernels() {
#if defined(CYCLEBOUND_HAVE_NEON)
    static const KernelTable table{Isa::neon, neon::eval_points, neon::eval_row,
                                   neon::level_values, neon::norm2};
    return &table;
#else
    return nullptr;
#endif
}

namespace {

const KernelTable& select() {
    const char* env = std::getenv("CYCLEBOUND_SIMD");
    const std::string_view want = env ? env : "";
    if (want == "scalar") return scalar_kernels();
    if (want == "avx2" && avx2_kernels()) return *avx2_kernels();
    if (want == "neon" && neon_kernels()) return *neon_kernels();
    if (const auto* t = avx2_kernels()) return *t;
    if (const auto* t = neon_kernels()) return *t;
    return scalar_kernels();
}

} // namespace

const KernelTable& active_kernels() {
    static const KernelTable& table = select();
    return table;
}

void eval_points(const FloatPoly& p, std::span<const double> xs, std::span<const double> ys,
                 std::span<double> out) {
    active_kernels().eval_points(p, xs.data(), ys.data(), out.data(), out.size());
}

void eval_row(const FloatPoly& p, double x0, double dx, double y, std::span<double> out) {
    active_kernels().eval_row(p, x0, dx, y, out.data(), out.size());
}

} // namespace cyclebound::simd
