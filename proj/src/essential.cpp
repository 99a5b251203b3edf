#include "d3r/essential.hpp"

#include "d3r/semrank.hpp"

namespace d3r {

namespace {

// A = [completion e_j's | kernel basis], with the completion chosen greedily.
EssentialReduction assemble(const Field& F, size_t n, const std::vector<Vec>& kernel) {
  std::vector<Vec> chosen;
  Matrix span = Matrix::from_rows(F, kernel, n);
  size_t current = rank(span);
  std::vector<Vec> rows = kernel;
  for (size_t j = 0; j < n && current < n; ++j) {
    Vec e(n, 0);
    e[j] = 1;
    rows.push_back(e);
    size_t r = rank(Matrix::from_rows(F, rows, n));
    if (r > current) {
      current = r;
      chosen.push_back(e);
    } else {
      rows.pop_back();
    }
  }
  EssentialReduction out;
  out.m = chosen.size();
  std::vector<Vec> cols = chosen;
  cols.insert(cols.end(), kernel.begin(), kernel.end());
  out.A = Matrix::from_columns(F, cols, n);
  auto inv = inverse(out.A);
  if (!inv) throw Error("essential reduction produced a singular transformation");
  out.A_inv = *inv;
  return out;
}

}  // namespace

EssentialReduction reduce(const Oracle& o, Rng& rng) {
  const Field& F = o.field();
  size_t n = o.num_vars();
  size_t samples = 4 * (n + 1);
  std::vector<Oracle> partials;
  for (size_t i = 0; i < n; ++i) partials.push_back(derivative_oracle(o, i, 1));
  // Column s of M is the gradient at sample point s.
  Matrix Mt(F, samples, n);
  for (size_t s = 0; s < samples; ++s) {
    Vec x = F.random_vector(n, rng);
    for (size_t i = 0; i < n; ++i) Mt.at(s, i) = partials[i](x);
  }
  return assemble(F, n, kernel_basis(Mt));
}

EssentialReduction reduce_poly(const MultiPoly& f) {
  PDMatrix pd = pd_matrix(f);
  return assemble(f.field(), f.num_vars(), kernel_basis(pd.matrix.transpose()));
}

Oracle reduced_oracle(const Oracle& o, const EssentialReduction& r) {
  size_t n = o.num_vars(), m = r.m;
  Matrix B(o.field(), n, m);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < m; ++j) B.at(i, j) = r.A.at(i, j);
  return compose_oracle(o, B);
}

}  // namespace d3r
