#include "d3r/semrank.hpp"

#include <map>

namespace d3r {

PDMatrix pd_matrix(const MultiPoly& f) {
  const Field& F = f.field();
  size_t n = f.num_vars();
  std::vector<MultiPoly> partials;
  std::map<Monomial, size_t> index;
  for (size_t i = 0; i < n; ++i) {
    partials.push_back(f.derivative(i));
    for (const auto& [m, c] : partials.back().terms()) index.emplace(m, 0);
  }
  PDMatrix out;
  size_t col = 0;
  for (auto& [m, j] : index) {
    j = col++;
    out.columns.push_back(m);
  }
  out.matrix = Matrix(F, n, index.size());
  for (size_t i = 0; i < n; ++i)
    for (const auto& [m, c] : partials[i].terms()) out.matrix.at(i, index[m]) = c;
  return out;
}

size_t sem_rank(const MultiPoly& f, Rng& rng) {
  if (f.is_zero()) throw InvalidArgument("sem_rank of the zero polynomial");
  if (!f.is_multilinear()) throw InvalidArgument("sem_rank expects a multilinear polynomial");
  LinearSplit s = strip_linear_factors(f, rng);
  return rank(pd_matrix(s.residual).matrix);
}

SemDistance sem_distance(const MultiPoly& f, const MultiPoly& g, Rng& rng) {
  MultiPoly h = f + g;
  if (h.is_zero()) return {0, true};
  return {sem_rank(h, rng), false};
}

}  // namespace d3r
