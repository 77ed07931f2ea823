#include "cyclebound/simd/float_poly.hpp"

#include <stdexcept>

namespace cyclebound::simd {

FloatPoly::FloatPoly(int degree, std::vector<double> coeffs)
    : degree_(degree), coeffs_(std::move(coeffs)) {
    if (degree_ < 0) {
        degree_ = -1;
        coeffs_.clear();
        return;
    }
    const auto need = static_cast<std::size_t>((degree_ + 1) * (degree_ + 1));
    if (coeffs_.size() != need) throw std::invalid_argument("FloatPoly: coefficient count mismatch");
}

} // namespace cyclebound::simd
