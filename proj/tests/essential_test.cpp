#include <gtest/gtest.h>

#include "d3r/essential.hpp"
#include "d3r/semrank.hpp"
#include "test_util.hpp"

namespace d3r {
namespace {

using testing::cst;
using testing::var;

// o(A x) = o(A x') whenever x and x' agree on the first m coordinates.
void expect_depends_on_prefix(const Oracle& o, const EssentialReduction& r, Rng& rng, int probes = 100) {
  const Field& F = o.field();
  size_t n = o.num_vars();
  for (int t = 0; t < probes; ++t) {
    Vec x = F.random_vector(n, rng), y = F.random_vector(n, rng);
    for (size_t i = 0; i < r.m; ++i) y[i] = x[i];
    ASSERT_EQ(o(r.A.apply(x)), o(r.A.apply(y)));
  }
}

TEST(Reduce, Examples) {
  Field F;
  Rng rng(31);
  auto r1 = reduce(from_poly(var(F, 1, 0)), rng);
  EXPECT_EQ(r1.m, 1u);

  size_t n = 3;
  MultiPoly s = var(F, n, 0) + var(F, n, 1);
  Oracle o = from_poly(s.pow(2));
  auto r = reduce(o, rng);
  EXPECT_EQ(r.m, 1u);
  EXPECT_EQ(r.A * r.A_inv, Matrix::identity(F, n));
  expect_depends_on_prefix(o, r, rng, 50);

  size_t n4 = 4;
  MultiPoly g = var(F, n4, 0) * var(F, n4, 1) + var(F, n4, 2) * var(F, n4, 3);
  EXPECT_EQ(reduce(from_poly(g), rng).m, 4u);
}

TEST(Reduce, PlantedFunctionsOfFewForms) {
  Field F;
  Rng rng(32);
  for (int t = 0; t < 10; ++t) {
    size_t n = 6, m = 1 + rng() % 4;
    // h(ℓ_1..ℓ_m) with h a random dense cubic in m variables.
    MultiPoly h = testing::random_dense_poly(F, m, 3, rng);
    Matrix L = testing::random_matrix(F, m, n, rng);
    Matrix full(F, n, n);  // rows past m stay zero
    for (size_t i = 0; i < m; ++i)
      for (size_t j = 0; j < n; ++j) full.at(i, j) = L.at(i, j);
    MultiPoly hn(F, n);
    for (const auto& [mon, c] : h.terms()) {
      Monomial e(n, 0);
      std::copy(mon.begin(), mon.end(), e.begin());
      hn.add_term(e, c);
    }
    MultiPoly f = hn.compose(full);
    // Top-degree part is generic, so m forms are really needed.
    Oracle o = from_poly(f);
    auto r = reduce(o, rng);
    EXPECT_EQ(r.m, m);
    EXPECT_EQ(r.m, rank(pd_matrix(f).matrix));
    expect_depends_on_prefix(o, r, rng);
    EXPECT_EQ(reduce_poly(f).m, m);
  }
}

TEST(Reduce, ReducedOracleMatchesComposition) {
  Field F;
  Rng rng(33);
  size_t n = 4;
  MultiPoly f = (var(F, n, 0) + var(F, n, 2)).pow(3) + var(F, n, 1) * (var(F, n, 0) + var(F, n, 2));
  Oracle o = from_poly(f);
  auto r = reduce(o, rng);
  ASSERT_EQ(r.m, 2u);
  Oracle red = reduced_oracle(o, r);
  for (int t = 0; t < 20; ++t) {
    Vec x = F.random_vector(2, rng), full(n, 0);
    full[0] = x[0];
    full[1] = x[1];
    EXPECT_EQ(red(x), o(r.A.apply(full)));
  }
}

TEST(PdMatrix, Examples) {
  Field F;
  Rng rng(34);
  EXPECT_EQ(rank(pd_matrix(var(F, 2, 0)).matrix), 1u);
  size_t n = 4;
  MultiPoly x1 = var(F, n, 0), x2 = var(F, n, 1), x3 = var(F, n, 2), x4 = var(F, n, 3);
  EXPECT_EQ(rank(pd_matrix(x1 * x2 + x3 * x4).matrix), 4u);
  EXPECT_EQ(rank(pd_matrix((x1 + x2).pow(2)).matrix), 1u);
}

TEST(PdMatrix, ShiftInvariantRank) {
  Field F;
  Rng rng(35);
  for (int t = 0; t < 20; ++t) {
    size_t n = 5;
    MultiPoly f = testing::random_multilinear(F, n, rng, 0.3);
    Vec a = F.random_vector(n, rng);
    // f(x + a): substitute x_i -> x_i + a_i term by term.
    MultiPoly g(F, n);
    for (const auto& [m, c] : f.terms()) {
      MultiPoly term = cst(F, n, 1).scaled(c);
      for (size_t i = 0; i < n; ++i)
        if (m[i]) term = term * (var(F, n, i) + MultiPoly::constant(F, n, a[i])).pow(m[i]);
      g = g + term;
    }
    EXPECT_EQ(rank(pd_matrix(f).matrix), rank(pd_matrix(g).matrix));
  }
}

TEST(SemRank, Examples) {
  Field F;
  Rng rng(36);
  size_t n = 5;
  MultiPoly x1 = var(F, n, 0), x2 = var(F, n, 1), x3 = var(F, n, 2), x4 = var(F, n, 3), x5 = var(F, n, 4);
  EXPECT_EQ(sem_rank((x1 + cst(F, n, 1)) * (x2 + cst(F, n, 2)), rng), 0u);
  EXPECT_EQ(sem_rank(x1 * x2 + x3 * x4, rng), 4u);
  EXPECT_EQ(sem_rank(x5 * (x1 * x2 + x3 * x4), rng), 4u);
  EXPECT_THROW(sem_rank(MultiPoly(F, n), rng), InvalidArgument);
}

TEST(SemDistance, Examples) {
  Field F;
  Rng rng(37);
  size_t n = 4;
  MultiPoly x1 = var(F, n, 0), x2 = var(F, n, 1), x3 = var(F, n, 2), x4 = var(F, n, 3);
  auto z = sem_distance(x1 * x2, -(x1 * x2), rng);
  EXPECT_TRUE(z.sum_is_zero);
  EXPECT_EQ(z.value, 0u);
  EXPECT_EQ(sem_distance(x1 * x2, x3 * x4, rng).value, 4u);
  for (int t = 0; t < 50; ++t) {
    MultiPoly f = testing::random_multilinear(F, n, rng, 0.3), g = testing::random_multilinear(F, n, rng, 0.3);
    EXPECT_EQ(sem_distance(f, g, rng).value, sem_distance(g, f, rng).value);
  }
}

TEST(SemRank, RestrictionDoesNotIncreaseRank) {
  Field F;
  Rng rng(38);
  size_t n = 6;
  MultiPoly f(F, n);
  // Sum of three products of variable-disjoint forms.
  for (int g = 0; g < 3; ++g) {
    std::vector<size_t> perm{0, 1, 2, 3, 4, 5};
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<LinearForm> forms{testing::random_form_on(F, n, {perm[0], perm[1]}, rng),
                                  testing::random_form_on(F, n, {perm[2], perm[3]}, rng),
                                  testing::random_form_on(F, n, {perm[4]}, rng)};
    f = f + testing::product_of_forms(F, n, forms);
  }
  size_t full = sem_rank(f, rng);
  for (int t = 0; t < 50; ++t) {
    std::vector<bool> keep(n);
    for (size_t i = 0; i < n; ++i) keep[i] = rng() % 2;
    MultiPoly g = f.restrict(keep, F.random_vector(n, rng));
    if (g.is_zero()) continue;
    EXPECT_LE(sem_rank(g, rng), full);
  }
}

TEST(SemRank, MatchesEssentialCountOfResidual) {
  Field F;
  Rng rng(39);
  for (int t = 0; t < 10; ++t) {
    MultiPoly f = testing::random_multilinear(F, 5, rng, 0.4);
    if (f.is_zero()) continue;
    LinearSplit s = strip_linear_factors(f, rng);
    EXPECT_EQ(sem_rank(f, rng), reduce(from_poly(s.residual), rng).m);
  }
}

}  // namespace
}  // namespace d3r
