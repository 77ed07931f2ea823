#pragma once

#include <string>
#include <string_view>

#include "cyclebound/polyalg/poly2.hpp"
#include "cyclebound/polyalg/vector_field.hpp"

namespace cyclebound::polyalg {

// Parses a polynomial expression in x and y.
//
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*      divisor must be a nonzero constant
//   factor := base ('^' nonneg-int)?
//   base   := 'x' | 'y' | number | '(' expr ')' | '-' factor
//
// Numbers are integers or decimals (optionally with an exponent) and are
// converted exactly, so 0.1 is 1/10. Implicit multiplication is rejected.
// Errors carry 1-based line/column; `line` and `column_offset` position the
// expression inside a larger file.
Poly2 parse_poly(std::string_view text, int line = 1, int column_offset = 0);

// Parses a .vf vector-field description:
//
//   # comment
//   name = Van der Pol
//   P = y
//   Q = (1 - x^2)*y - x
//   box = [-5, 5] x [-5, 5]
VectorField parse_vector_field(std::string_view text);
VectorField load_vector_field(const std::string& path);

// Canonical .vf text; parse_vector_field(render_vector_field(v)) == v.
std::string render_vector_field(const VectorField& v);

} // namespace cyclebound::polyalg
