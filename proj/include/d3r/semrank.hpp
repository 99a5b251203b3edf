#pragma once

#include <vector>

#include "d3r/matrix.hpp"
#include "d3r/poly.hpp"

namespace d3r {

// Row i holds the coefficients of ∂f/∂x_i over a shared lex-ordered index of
// monomials (the union of the derivative supports).
struct PDMatrix {
  Matrix matrix;
  std::vector<Monomial> columns;
};

PDMatrix pd_matrix(const MultiPoly& f);

// Rank of the partial-derivative matrix of f / Lin(f).  A nonzero product of
// linear forms has semantic rank 0.
size_t sem_rank(const MultiPoly& f, Rng& rng);

struct SemDistance {
  size_t value = 0;
  bool sum_is_zero = false;
};
SemDistance sem_distance(const MultiPoly& f, const MultiPoly& g, Rng& rng);

}  // namespace d3r
