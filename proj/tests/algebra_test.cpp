#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "d3r/matrix.hpp"
#include "d3r/resultant.hpp"
#include "d3r/upoly.hpp"
#include "test_util.hpp"

namespace d3r {
namespace {

using testing::cst;
using testing::var;

// Leibniz expansion; independent of the elimination code.
Fe leibniz_det(const Matrix& m) {
  const Field& F = m.field();
  size_t n = m.rows();
  std::vector<size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Fe det = 0;
  do {
    size_t inversions = 0;
    for (size_t i = 0; i < n; ++i)
      for (size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    Fe t = 1;
    for (size_t i = 0; i < n; ++i) t = F.mul(t, m.at(i, perm[i]));
    det = inversions % 2 ? F.sub(det, t) : F.add(det, t);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

TEST(FieldArithmetic, InverseAndReduction) {
  Field F;
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    Fe a = F.random_nonzero(rng);
    EXPECT_EQ(F.mul(a, F.inv(a)), 1u);
  }
  EXPECT_EQ(F.from_int(-1), kMersenne61 - 1);
  Field F7(7);
  EXPECT_EQ(F7.mul(5, 6), 2u);
  EXPECT_THROW(F7.inv(0), InvalidArgument);
  EXPECT_THROW(Field(15), InvalidArgument);
}

TEST(Rank, Examples) {
  Field F7(7);
  EXPECT_EQ(rank(Matrix::identity(F7, 3)), 3u);
  EXPECT_EQ(rank(Matrix(F7, 2, 2)), 0u);
  EXPECT_EQ(rank(Matrix::from_rows(F7, {{1, 2}, {2, 4}}, 2)), 1u);
}

TEST(Rank, AgreesUnderTransposeAndColumnShuffle) {
  Field F;
  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    size_t r = 1 + rng() % 7, c = 1 + rng() % 7, k = rng() % 5;
    Matrix m = testing::random_low_rank(F, r, c, k, rng);
    size_t expected = std::min({r, c, k});
    EXPECT_EQ(rank(m), expected);
    EXPECT_EQ(rank(m.transpose()), expected);
    std::vector<size_t> perm(c);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Matrix shuffled(F, r, c);
    for (size_t i = 0; i < r; ++i)
      for (size_t j = 0; j < c; ++j) shuffled.at(i, j) = m.at(i, perm[j]);
    EXPECT_EQ(rank(shuffled), expected);
  }
}

TEST(KernelBasis, Examples) {
  Field F7(7), F5(5);
  EXPECT_TRUE(kernel_basis(Matrix::identity(F7, 3)).empty());
  auto k = kernel_basis(Matrix::from_rows(F5, {{1, 1}}, 2));
  ASSERT_EQ(k.size(), 1u);
  EXPECT_EQ(k[0], (Vec{4, 1}));  // proportional to (1, 4)
  EXPECT_EQ(F5.mul(k[0][0], 4), 1u);
  EXPECT_EQ(F5.mul(k[0][1], 4), 4u);
  Matrix m = Matrix::from_rows(F7, {{1, 2}, {2, 4}}, 2);
  auto k2 = kernel_basis(m);
  ASSERT_EQ(k2.size(), 1u);
  EXPECT_EQ(m.apply(k2[0]), (Vec{0, 0}));
  EXPECT_NE(k2[0], (Vec{0, 0}));
}

TEST(KernelBasis, VectorsAnnihilateAndCountMatchesNullity) {
  Field F;
  Rng rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    size_t r = 1 + rng() % 6, c = 1 + rng() % 8, k = rng() % 6;
    Matrix m = testing::random_low_rank(F, r, c, k, rng);
    auto basis = kernel_basis(m);
    EXPECT_EQ(basis.size(), c - rank(m));
    for (const auto& v : basis) EXPECT_EQ(m.apply(v), Vec(r, 0));
    if (!basis.empty()) EXPECT_EQ(rank(Matrix::from_rows(F, basis, c)), basis.size());
  }
}

TEST(Determinant, MatchesLeibnizAndInverse) {
  Field F;
  Rng rng(4);
  for (int trial = 0; trial < 30; ++trial) {
    size_t n = 1 + rng() % 5;
    Matrix m = testing::random_matrix(F, n, n, rng);
    EXPECT_EQ(determinant(m), leibniz_det(m));
    auto inv = inverse(m);
    ASSERT_TRUE(inv.has_value());
    EXPECT_EQ(m * *inv, Matrix::identity(F, n));
  }
  EXPECT_FALSE(inverse(Matrix::from_rows(Field(7), {{1, 2}, {2, 4}}, 2)).has_value());
}

TEST(Solve, ConsistentAndInconsistent) {
  Field F7(7);
  Matrix m = Matrix::from_rows(F7, {{1, 2}, {2, 4}}, 2);
  auto x = solve(m, {3, 6});
  ASSERT_TRUE(x.has_value());
  EXPECT_EQ(m.apply(*x), (Vec{3, 6}));
  EXPECT_FALSE(solve(m, {3, 5}).has_value());
}

TEST(SylvesterResultant, Examples) {
  Field F7(7);
  size_t n = 2;
  MultiPoly x = var(F7, n, 0), y = var(F7, n, 1);
  EXPECT_TRUE(sylvester_resultant(x - cst(F7, n, 1), x - cst(F7, n, 1), 0).is_zero());
  // det [[1, 1], [-1, -2]] = -1 = 6 mod 7
  MultiPoly r = sylvester_resultant(x - cst(F7, n, 1), x - cst(F7, n, 2), 0);
  EXPECT_EQ(r, cst(F7, n, 6));
  EXPECT_TRUE(sylvester_resultant(x * x - y * y, x - y, 0).is_zero());
  EXPECT_THROW(sylvester_resultant(y, x, 0), InvalidArgument);
}

TEST(SylvesterResultant, MatrixLayout) {
  Field F7(7);
  size_t n = 1;
  MultiPoly x = var(F7, n, 0);
  // f = 2x^2 + 3x + 4, g = 5x + 6
  MultiPoly f = cst(F7, n, 2) * x * x + cst(F7, n, 3) * x + cst(F7, n, 4);
  MultiPoly g = cst(F7, n, 5) * x + cst(F7, n, 6);
  auto S = sylvester_matrix(f, g, 0);
  ASSERT_EQ(S.size(), 3u);
  auto c = [&](size_t i, size_t j) { return S[i][j].constant_term(); };
  EXPECT_EQ(c(0, 0), 2u);
  EXPECT_EQ(c(1, 0), 3u);
  EXPECT_EQ(c(2, 0), 4u);
  EXPECT_EQ(c(0, 1), 5u);
  EXPECT_EQ(c(1, 1), 6u);
  EXPECT_EQ(c(1, 2), 5u);
  EXPECT_EQ(c(2, 2), 6u);
  EXPECT_EQ(c(0, 2), 0u);
}

TEST(SylvesterResultant, VanishesExactlyOnCommonFactors) {
  Field F;
  Rng rng(5);
  size_t n = 3;
  for (int trial = 0; trial < 10; ++trial) {
    auto rnd_form = [&]() {
      return MultiPoly::from_form(F, testing::random_form_on(F, n, {0, 1, 2}, rng));
    };
    MultiPoly common = rnd_form();
    MultiPoly a = rnd_form() * rnd_form(), b = rnd_form();
    EXPECT_TRUE(sylvester_resultant(common * a, common * b, 0).is_zero());
    EXPECT_FALSE(sylvester_resultant(a, b, 0).is_zero());
  }
}

TEST(Interpolate, RoundTrip) {
  Field F;
  Rng rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    size_t k = 1 + rng() % 8;
    UPoly p(k);
    for (auto& c : p) c = F.random(rng);
    upoly::trim(p);
    std::vector<Fe> xs = F.random_vector(k, rng), ys;
    for (Fe x : xs) ys.push_back(upoly::eval(F, p, x));
    EXPECT_EQ(upoly::interpolate(F, xs, ys), p);
  }
}

TEST(Roots, SplitProductsLargeAndSmallField) {
  Rng rng(7);
  for (std::uint64_t p : {kMersenne61, std::uint64_t{101}}) {
    Field F(p);
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<Fe> want;
      UPoly f{F.random_nonzero(rng)};
      for (int i = 0; i < 4; ++i) {
        Fe r = F.random(rng);
        want.push_back(r);
        f = upoly::mul(F, f, UPoly{F.neg(r), 1});
      }
      // An irreducible-ish quadratic factor t^2 - s with s a non-residue adds no roots.
      Fe s;
      do s = F.random_nonzero(rng);
      while (F.pow(s, (p - 1) / 2) == 1);
      f = upoly::mul(F, f, UPoly{F.neg(s), 0, 1});
      std::sort(want.begin(), want.end());
      want.erase(std::unique(want.begin(), want.end()), want.end());
      EXPECT_EQ(upoly::roots(F, f, rng), want);
    }
  }
}

TEST(RsDecode, Examples) {
  Field F(101);
  EXPECT_EQ(rs_decode(F, {1, 2, 3, 4}, {5, 5, 5, 5}, 0, 0), (UPoly{5}));
  // q(t) = t^2 + 1 with one corrupted value.
  std::vector<Fe> xs{0, 1, 2, 3, 4, 5, 6}, ys;
  for (Fe x : xs) ys.push_back(F.add(F.mul(x, x), 1));
  ys[3] = F.add(ys[3], 17);
  EXPECT_EQ(rs_decode(F, xs, ys, 2, 1), (UPoly{1, 0, 1}));
  EXPECT_THROW(rs_decode(F, {1, 2, 3}, {1, 2, 3}, 2, 1), InvalidArgument);
}

TEST(RsDecode, RoundTripWithinBudget) {
  Field F;
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    size_t D = rng() % 8, E = rng() % 4;
    size_t N = D + 2 * E + 1 + rng() % 3;
    UPoly q(D + 1);
    for (auto& c : q) c = F.random(rng);
    upoly::trim(q);
    std::vector<Fe> xs = F.random_vector(N, rng), ys;
    for (Fe x : xs) ys.push_back(upoly::eval(F, q, x));
    std::vector<size_t> idx(N);
    std::iota(idx.begin(), idx.end(), 0);
    std::shuffle(idx.begin(), idx.end(), rng);
    size_t errs = E ? rng() % (E + 1) : 0;
    for (size_t i = 0; i < errs; ++i) ys[idx[i]] = F.add(ys[idx[i]], F.random_nonzero(rng));
    EXPECT_EQ(rs_decode(F, xs, ys, D, E), q);
  }
}

TEST(RsDecode, TooManyErrorsIsReportedNotWrong) {
  Field F;
  Rng rng(9);
  size_t failures = 0;
  for (int trial = 0; trial < 50; ++trial) {
    size_t D = 3, E = 2, N = D + 2 * E + 1;
    UPoly q{F.random(rng), F.random(rng), F.random(rng), 1};
    std::vector<Fe> xs = F.random_vector(N, rng), ys;
    for (Fe x : xs) ys.push_back(upoly::eval(F, q, x));
    for (size_t i = 0; i < E + 2; ++i) ys[i] = F.random(rng);
    try {
      UPoly got = rs_decode(F, xs, ys, D, E);
      // A returned polynomial must still be within the error budget.
      size_t dis = 0;
      for (size_t i = 0; i < N; ++i) dis += upoly::eval(F, got, xs[i]) != ys[i];
      EXPECT_LE(dis, E);
    } catch (const DecodeFailure&) {
      ++failures;
    }
  }
  EXPECT_EQ(failures, 50u);
}

}  // namespace
}  // namespace d3r
