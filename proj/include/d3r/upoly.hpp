#pragma once

#include <vector>

#include "d3r/field.hpp"

namespace d3r {

// Dense univariate polynomial, coefficient i multiplies t^i.  Trailing zeros
// are trimmed by every operation, so the zero polynomial is the empty vector.
using UPoly = std::vector<Fe>;

namespace upoly {

void trim(UPoly& a);
int degree(const UPoly& a);  // -1 for zero
UPoly add(const Field& F, const UPoly& a, const UPoly& b);
UPoly sub(const Field& F, const UPoly& a, const UPoly& b);
UPoly mul(const Field& F, const UPoly& a, const UPoly& b);
UPoly scale(const Field& F, const UPoly& a, Fe c);
// a = q·b + r with deg r < deg b.
void divmod(const Field& F, const UPoly& a, const UPoly& b, UPoly& q, UPoly& r);
UPoly mod(const Field& F, const UPoly& a, const UPoly& b);
UPoly gcd(const Field& F, UPoly a, UPoly b);  // monic
UPoly monic(const Field& F, const UPoly& a);
UPoly powmod(const Field& F, const UPoly& base, std::uint64_t e, const UPoly& m);
Fe eval(const Field& F, const UPoly& a, Fe t);
UPoly derivative(const Field& F, const UPoly& a);
// Lagrange interpolation through (xs[i], ys[i]); xs pairwise distinct.
UPoly interpolate(const Field& F, const std::vector<Fe>& xs, const std::vector<Fe>& ys);
// Distinct roots in F_p, ascending.  Uses a scan for small p and
// Cantor–Zassenhaus splitting of gcd(a, t^p - t) otherwise.
std::vector<Fe> roots(const Field& F, const UPoly& a, Rng& rng);

}  // namespace upoly

// Berlekamp–Welch decoding: the unique polynomial of degree <= degree_bound
// that disagrees with the samples in at most max_errors places.
// Throws DecodeFailure when no such polynomial exists and InvalidArgument on
// too few or repeated sample points.
UPoly rs_decode(const Field& F, const std::vector<Fe>& points, const std::vector<Fe>& values,
                size_t degree_bound, size_t max_errors);

}  // namespace d3r
