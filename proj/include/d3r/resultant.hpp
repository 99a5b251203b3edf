#pragma once

#include <vector>

#include "d3r/poly.hpp"

namespace d3r {

// Sylvester matrix of f and g viewed as univariate polynomials in var, with
// entries in the ring of the remaining variables.  Column j < deg_g holds the
// coefficients of f from the leading one down, shifted down by j rows; the
// remaining columns hold the coefficients of g likewise.
std::vector<std::vector<MultiPoly>> sylvester_matrix(const MultiPoly& f, const MultiPoly& g, size_t var);

// Determinant of the Sylvester matrix (fraction-free Bareiss elimination).
// Throws InvalidArgument when f or g has degree zero in var.
MultiPoly sylvester_resultant(const MultiPoly& f, const MultiPoly& g, size_t var);

}  // namespace d3r
