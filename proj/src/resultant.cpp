#include "d3r/resultant.hpp"

namespace d3r {

namespace {

// Coefficients of f as a polynomial in var: out[i] multiplies var^i.
std::vector<MultiPoly> coefficients_in(const MultiPoly& f, size_t var) {
  std::vector<MultiPoly> out;
  for (const auto& [m, c] : f.terms()) {
    size_t e = m[var];
    while (out.size() <= e) out.emplace_back(f.field(), f.num_vars());
    Monomial mm = m;
    mm[var] = 0;
    out[e].add_term(mm, c);
  }
  return out;
}

}  // namespace

std::vector<std::vector<MultiPoly>> sylvester_matrix(const MultiPoly& f, const MultiPoly& g, size_t var) {
  if (var >= f.num_vars() || f.num_vars() != g.num_vars()) throw InvalidArgument("sylvester_matrix: bad variable");
  auto cf = coefficients_in(f, var);
  auto cg = coefficients_in(g, var);
  if (cf.size() < 2 || cg.size() < 2)
    throw InvalidArgument("sylvester_resultant: both polynomials need positive degree in the variable");
  size_t m = cf.size() - 1, l = cg.size() - 1, N = m + l;
  MultiPoly zero(f.field(), f.num_vars());
  std::vector<std::vector<MultiPoly>> S(N, std::vector<MultiPoly>(N, zero));
  for (size_t j = 0; j < l; ++j)
    for (size_t i = 0; i <= m; ++i) S[j + (m - i)][j] = cf[i];
  for (size_t j = 0; j < m; ++j)
    for (size_t i = 0; i <= l; ++i) S[j + (l - i)][l + j] = cg[i];
  return S;
}

MultiPoly sylvester_resultant(const MultiPoly& f, const MultiPoly& g, size_t var) {
  auto M = sylvester_matrix(f, g, var);
  size_t N = M.size();
  const Field& F = f.field();
  size_t n = f.num_vars();
  MultiPoly prev = MultiPoly::constant(F, n, 1);
  bool negate = false;
  for (size_t k = 0; k + 1 < N; ++k) {
    if (M[k][k].is_zero()) {
      size_t r = k + 1;
      while (r < N && M[r][k].is_zero()) ++r;
      if (r == N) return MultiPoly(F, n);
      std::swap(M[k], M[r]);
      negate = !negate;
    }
    for (size_t i = k + 1; i < N; ++i)
      for (size_t j = k + 1; j < N; ++j)
        M[i][j] = (M[k][k] * M[i][j] - M[i][k] * M[k][j]).divide_exact(prev);
    prev = M[k][k];
  }
  MultiPoly det = M[N - 1][N - 1];
  return negate ? -det : det;
}

}  // namespace d3r
