#include <gtest/gtest.h>

#include <array>

#include "d3r/lowdeg.hpp"
#include "d3r/semrank.hpp"
#include "test_util.hpp"

namespace d3r {
namespace {

using testing::cst;
using testing::var;

std::vector<size_t> sample_vars(size_t n, size_t count, Rng& rng) {
  std::vector<size_t> v(n);
  for (size_t i = 0; i < n; ++i) v[i] = i;
  std::shuffle(v.begin(), v.end(), rng);
  v.resize(count);
  std::sort(v.begin(), v.end());
  return v;
}

// k random multilinear gates, each on its own random variable subset.
DepthThreeCircuit planted(const Field& F, size_t n, size_t k, size_t dmin, size_t dmax, Rng& rng) {
  DepthThreeCircuit C;
  C.field = F;
  C.num_vars = n;
  C.multilinear = true;
  std::uniform_int_distribution<size_t> deg(dmin, dmax);
  for (size_t i = 0; i < k; ++i) {
    size_t d = deg(rng);
    size_t vars = std::min(n, d + std::uniform_int_distribution<size_t>(0, 2)(rng));
    C.gates.push_back(random_ml_gate(F, n, sample_vars(n, vars, rng), d, rng));
  }
  return C;
}

void expect_valid(const DepthThreeCircuit& C, const MultiPoly& f, size_t k) {
  EXPECT_LE(C.fan_in(), k);
  EXPECT_TRUE(gates_variable_disjoint(C));
  EXPECT_EQ(expand(C), f);
}

TEST(PolySystem, SmallSystems) {
  Field F7(7);
  MultiPoly x = var(F7, 1, 0);
  PolySystem s1{F7, 1, {x * x - cst(F7, 1, 1)}, {}, 1000};
  auto sols = all_solutions(s1);
  ASSERT_EQ(sols.size(), 2u);
  EXPECT_EQ(sols[0], Vec{1});
  EXPECT_EQ(sols[1], Vec{6});

  Field F5(5);
  MultiPoly a = var(F5, 2, 0), b = var(F5, 2, 1);
  PolySystem s2{F5, 2, {a + b - cst(F5, 2, 1), a * b - cst(F5, 2, 1)}, {}, 1000};
  EXPECT_EQ(solve_poly_system(s2).status, SolveStatus::NoSolution);

  PolySystem s3{F5, 0, {}, {}, 10};
  auto r3 = solve_poly_system(s3);
  EXPECT_EQ(r3.status, SolveStatus::Solved);
  EXPECT_TRUE(r3.assignment.empty());
}

TEST(PolySystem, BudgetAndSoundness) {
  Field F5(5);
  size_t N = 6;
  MultiPoly s(F5, N);
  for (size_t i = 0; i < N; ++i) s = s + var(F5, N, i) * var(F5, N, i);
  MultiPoly prod = cst(F5, N, 1);
  for (size_t i = 0; i < N; ++i) prod = prod * var(F5, N, i);
  PolySystem hard{F5, N, {prod - cst(F5, N, 1)}, {}, 20};
  EXPECT_EQ(solve_poly_system(hard).status, SolveStatus::BudgetExceeded);
  PolySystem sys{F5, N, {s - cst(F5, N, 3)}, {}, 20};
  sys.budget = 1000000;
  auto r = solve_poly_system(sys);
  ASSERT_EQ(r.status, SolveStatus::Solved);
  EXPECT_EQ(sys.equations[0].evaluate(r.assignment), 0u);
  // Every enumerated solution satisfies the system, and the count matches a direct scan.
  size_t direct = 0;
  Vec x(N, 0);
  for (size_t code = 0; code < 15625; ++code) {
    size_t c = code;
    for (size_t i = 0; i < N; ++i, c /= 5) x[i] = c % 5;
    direct += sys.equations[0].evaluate(x) == 0;
  }
  auto all = all_solutions(sys, 100000);
  EXPECT_EQ(all.size(), direct);
}

TEST(LearnMl, SmallExamples) {
  Field F;
  Rng rng(1);
  size_t n = 4;
  MultiPoly f = var(F, n, 0) * var(F, n, 1) + var(F, n, 2) * var(F, n, 3);
  auto C = learn_ml_explicit(f, 2, rng);
  EXPECT_EQ(C.fan_in(), 2u);
  expect_valid(C, f, 2);
  EXPECT_THROW(learn_ml_explicit(f, 1, rng), NotInClass);

  MultiPoly g = (var(F, n, 0) + cst(F, n, 3)) * (var(F, n, 1) - var(F, n, 2));
  EXPECT_EQ(learn_ml_explicit(g, 2, rng).fan_in(), 1u);
  EXPECT_EQ(learn_ml_explicit(MultiPoly(F, n), 2, rng).fan_in(), 0u);

  // Constant and affine gates merge into one residual gate.
  MultiPoly h = var(F, n, 0) * var(F, n, 1) * var(F, n, 2) + var(F, n, 3) + cst(F, n, 5);
  auto Ch = learn_ml_explicit(h, 2, rng);
  EXPECT_EQ(Ch.fan_in(), 2u);
  expect_valid(Ch, h, 2);
}

TEST(LearnMl, PlantedTwoAndThreeGates) {
  Field F;
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    size_t k = trial < 20 ? 2 : 3;
    size_t n = 6 + static_cast<size_t>(trial % 5);
    DepthThreeCircuit C = planted(F, n, k, 2, std::min<size_t>(n, 5), rng);
    MultiPoly f = expand(C);
    SCOPED_TRACE(trial);
    auto L = learn_ml_explicit(f, k, rng, LowdegOptions::wide());
    expect_valid(L, f, k);
  }
}

TEST(LearnMl, SmallField) {
  Field F(101);
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    DepthThreeCircuit C = planted(F, 6, 2, 2, 4, rng);
    MultiPoly f = expand(C);
    auto L = learn_ml_explicit(f, 2, rng);
    expect_valid(L, f, 2);
  }
}

TEST(LearnMl, OracleEntryPointsAndGates) {
  Field F;
  Rng rng(5);
  size_t n = 6;
  MultiPoly f = var(F, n, 0) * var(F, n, 1) * (var(F, n, 2) + cst(F, n, 1)) + var(F, n, 3) * var(F, n, 4);
  Oracle o = from_poly(f);
  auto C = learn_ml_lowdeg(o, 2, 3, rng);
  expect_valid(C, f, 2);
  EXPECT_THROW(learn_ml_lowdeg(o, 4, 3, rng), BudgetExceeded);
  EXPECT_THROW(learn_ml_lowdeg(o, 2, 5, rng), BudgetExceeded);

  size_t m = sem_rank(f, rng);
  expect_valid(learn_ml_lowrank(o.with_degree_bound(3), 2, m, rng), f, 2);
  EXPECT_THROW(learn_ml_lowrank(o.with_degree_bound(3), 2, m - 1, rng), NotInClass);
  expect_valid(learn_ml_low_semrank(o.with_degree_bound(3), 2, m, rng), f, 2);
  EXPECT_THROW(learn_ml_low_semrank(o.with_degree_bound(3), 2, m - 1, rng), NotInClass);
}

}  // namespace
}  // namespace d3r

namespace d3r {
namespace {

std::vector<std::vector<size_t>> cube_blocks(size_t q, size_t s) {
  std::vector<std::vector<size_t>> b(q);
  for (size_t i = 0; i < q; ++i)
    for (size_t j = 0; j < s; ++j) b[i].push_back(i * s + j);
  return b;
}

MultiPoly tensor_poly(const Field& F, const std::vector<std::vector<size_t>>& blocks, const std::vector<Fe>& entries) {
  size_t n = 0;
  for (const auto& b : blocks) n += b.size();
  MultiPoly f(F, n);
  std::vector<size_t> idx(blocks.size(), 0);
  for (Fe e : entries) {
    Monomial m(n, 0);
    for (size_t b = 0; b < blocks.size(); ++b) m[blocks[b][idx[b]]] = 1;
    f.add_term(m, e);
    for (size_t b = blocks.size(); b-- > 0;) {
      if (++idx[b] < blocks[b].size()) break;
      idx[b] = 0;
    }
  }
  return f;
}

// Ranks of all 2x2x2 tensors over F_5 by breadth-first sums of rank-one
// tensors; a tensor is its 8 entries read as a base-5 number.
std::vector<int> rank_table_222() {
  const int p = 5, N = 390625;
  std::vector<std::array<std::uint8_t, 8>> digits(N);
  for (int c = 0; c < N; ++c)
    for (int i = 7, x = c; i >= 0; --i, x /= p) digits[static_cast<size_t>(c)][static_cast<size_t>(i)] = static_cast<std::uint8_t>(x % p);
  auto add = [&](int a, int b) {
    int c = 0;
    for (size_t i = 0; i < 8; ++i) c = c * p + (digits[static_cast<size_t>(a)][i] + digits[static_cast<size_t>(b)][i]) % p;
    return c;
  };
  std::vector<int> ones;
  for (int a = 1; a < 25; ++a)
    for (int b = 1; b < 25; ++b)
      for (int c = 1; c < 25; ++c) {
        int u[2] = {a / 5, a % 5}, v[2] = {b / 5, b % 5}, w[2] = {c / 5, c % 5};
        int code = 0;
        for (int i = 0; i < 8; ++i) code = code * p + u[i >> 2] * v[(i >> 1) & 1] * w[i & 1] % p;
        ones.push_back(code);
      }
  std::sort(ones.begin(), ones.end());
  ones.erase(std::unique(ones.begin(), ones.end()), ones.end());
  std::vector<int> rank(N, -1);
  rank[0] = 0;
  std::vector<int> frontier{0};
  size_t assigned = 1;
  for (int r = 1; assigned < static_cast<size_t>(N); ++r) {
    std::vector<int> next;
    for (int t : frontier)
      for (int o : ones) {
        int c = add(t, o);
        if (rank[static_cast<size_t>(c)] < 0) {
          rank[static_cast<size_t>(c)] = r;
          next.push_back(c);
          ++assigned;
        }
      }
    frontier = std::move(next);
  }
  return rank;
}

TEST(LearnSetMl, MatchesBruteForceRankOn222OverF5) {
  Field F(5);
  Rng rng(2);
  auto table = rank_table_222();
  auto blocks = cube_blocks(3, 2);
  std::uniform_int_distribution<int> pick(0, 390624);
  for (int trial = 0; trial < 3000; ++trial) {
    int c = trial < 5 ? trial : pick(rng);
    std::vector<Fe> e(8);
    for (int i = 7, x = c; i >= 0; --i, x /= 5) e[static_cast<size_t>(i)] = static_cast<Fe>(x % 5);
    MultiPoly f = tensor_poly(F, blocks, e);
    auto C = learn_setml_explicit(f, 3, blocks, rng);
    ASSERT_EQ(static_cast<int>(C.fan_in()), table[static_cast<size_t>(c)]) << "tensor code " << c;
    ASSERT_TRUE(is_set_multilinear_shape(C));
    ASSERT_EQ(expand(C), f);
  }
}

TEST(LearnSetMl, PlantedLargeField) {
  Field F;
  Rng rng(4);
  for (size_t k = 1; k <= 3; ++k)
    for (int trial = 0; trial < 5; ++trial) {
      auto blocks = cube_blocks(3 + static_cast<size_t>(trial % 2), 3);
      size_t n = blocks.size() * 3;
      auto P = random_setml_circuit(F, blocks, n, k, rng);
      MultiPoly f = expand(P);
      auto C = learn_setml_lowdeg(from_poly(f), k, blocks, rng);
      EXPECT_EQ(C.fan_in(), k);
      EXPECT_TRUE(is_set_multilinear_shape(C));
      EXPECT_EQ(expand(C), f);
    }
}

TEST(LearnSetMl, MatricesAndRejections) {
  Field F;
  Rng rng(6);
  auto blocks = cube_blocks(2, 3);
  auto P = random_setml_circuit(F, blocks, 6, 2, rng);
  EXPECT_EQ(learn_setml_explicit(expand(P), 3, blocks, rng).fan_in(), 2u);
  EXPECT_THROW(learn_setml_explicit(expand(P), 1, blocks, rng), NotInClass);
  MultiPoly bad = testing::var(F, 6, 0) * testing::var(F, 6, 1);
  EXPECT_THROW(learn_setml_explicit(bad, 2, blocks, rng), NotInClass);
  EXPECT_EQ(learn_setml_explicit(MultiPoly(F, 6), 2, blocks, rng).fan_in(), 0u);
}

}  // namespace
}  // namespace d3r

namespace d3r {
namespace {

TEST(LearnMlSystem, TinyFieldsAgreeWithDerivativeLearner) {
  Rng rng(8);
  for (std::uint64_t p : {5u, 7u}) {
    Field F(p);
    size_t n = 3;
    // x1·x2 needs one gate even when two are allowed.
    MultiPoly f = testing::var(F, n, 0) * testing::var(F, n, 1);
    SystemDiagnostics diag;
    auto C = learn_ml_system(from_poly(f), 2, 2, rng, {}, &diag);
    EXPECT_EQ(C.fan_in(), 1u);
    EXPECT_EQ(expand(C), f);
    EXPECT_LE(diag.unknowns, 10u);
    EXPECT_LE(diag.lifting_basis, diag.unknowns * diag.unknowns);
    EXPECT_TRUE(diag.basis_spans_all);

    for (int trial = 0; trial < 6; ++trial) {
      // Random product of two affine forms on disjoint variables, or an affine form.
      std::vector<size_t> vars{0, 1, 2};
      std::shuffle(vars.begin(), vars.end(), rng);
      ProductGate g = random_ml_gate(F, n, {vars[0], vars[1]}, trial % 2 ? 1 : 2, rng);
      MultiPoly h = expand_gate(F, n, g);
      if (h.is_zero()) continue;
      SystemDiagnostics dh;
      auto Cs = learn_ml_system(from_poly(h), 1, 2, rng, {}, &dh);
      auto Cd = learn_ml_explicit(h, 1, rng);
      EXPECT_EQ(Cs.fan_in(), Cd.fan_in());
      EXPECT_EQ(expand(Cs), h);
      EXPECT_TRUE(dh.basis_spans_all);
    }
  }
}

TEST(LearnMlSystem, RejectsWhatNoSmallCircuitComputes) {
  Field F(5);
  Rng rng(9);
  MultiPoly f = testing::var(F, 2, 0) * testing::var(F, 2, 1) + testing::cst(F, 2, 1);
  // Two essential directions, degree 2: one gate of two forms cannot produce it.
  EXPECT_THROW(learn_ml_system(from_poly(f), 1, 2, rng), NotInClass);
}

}  // namespace
}  // namespace d3r
