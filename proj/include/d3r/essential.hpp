#pragma once

#include "d3r/matrix.hpp"
#include "d3r/oracle.hpp"
#include "d3r/poly.hpp"

namespace d3r {

// f(A x) depends only on x_1..x_m.
struct EssentialReduction {
  size_t m = 0;
  Matrix A;
  Matrix A_inv;
};

// Monte Carlo reduction from black-box access (first-order derivative oracles
// sampled at 4(n+1) random points).
EssentialReduction reduce(const Oracle& o, Rng& rng);

// Exact reduction of an explicit polynomial via its partial-derivative matrix.
EssentialReduction reduce_poly(const MultiPoly& f);

// x ∈ F^m  ↦  o(A · (x, 0, …, 0)).
Oracle reduced_oracle(const Oracle& o, const EssentialReduction& r);

}  // namespace d3r
