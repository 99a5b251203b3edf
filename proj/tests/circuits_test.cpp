#include <gtest/gtest.h>

#include <cmath>

#include "d3r/circuits.hpp"
#include "d3r/semrank.hpp"
#include "test_util.hpp"

namespace d3r {
namespace {

LinearForm X(size_t n, size_t i) { return LinearForm::variable(n, i); }

DepthThreeCircuit circuit(const Field& F, size_t n, std::vector<ProductGate> gates) {
  DepthThreeCircuit C;
  C.field = F;
  C.num_vars = n;
  C.gates = std::move(gates);
  C.multilinear = true;
  return C;
}

DepthThreeCircuit random_ml_circuit(const Field& F, size_t n, size_t k, Rng& rng) {
  DepthThreeCircuit C = circuit(F, n, {});
  for (size_t i = 0; i < k; ++i) {
    std::vector<size_t> vars;
    for (size_t v = 0; v < n; ++v)
      if (rng() % 3) vars.push_back(v);
    if (vars.empty()) vars.push_back(rng() % n);
    size_t parts = 1 + rng() % vars.size();
    C.gates.push_back(random_ml_gate(F, n, vars, parts, rng));
  }
  return C;
}

TEST(GcdAndSimplify, Examples) {
  Field F;
  size_t n = 4;
  auto C = circuit(F, n, {{1, {X(n, 0), X(n, 1)}}, {1, {X(n, 0), X(n, 2)}}});
  auto s = gcd_and_simplify(C);
  ASSERT_EQ(s.gcd.size(), 1u);
  EXPECT_EQ(s.gcd[0], X(n, 0));
  EXPECT_EQ(s.simp.gates[0].forms, std::vector<LinearForm>{X(n, 1)});
  EXPECT_EQ(s.simp.gates[1].forms, std::vector<LinearForm>{X(n, 2)});

  auto single = gcd_and_simplify(circuit(F, n, {{3, {X(n, 0), X(n, 1)}}}));
  EXPECT_EQ(single.gcd.size(), 2u);
  EXPECT_TRUE(single.simp.gates[0].forms.empty());
  EXPECT_EQ(single.simp.gates[0].scalar, 3u);

  EXPECT_TRUE(gcd_and_simplify(circuit(F, n, {{1, {X(n, 0), X(n, 1)}}, {1, {X(n, 2), X(n, 3)}}})).gcd.empty());
}

TEST(GcdAndSimplify, ProportionalFormsAndScalarsPreserveValue) {
  Field F;
  Rng rng(41);
  size_t n = 3;
  LinearForm l = testing::random_form_on(F, n, {0, 1}, rng);
  auto C = circuit(F, n, {{2, {l.scaled(F, 5), X(n, 2)}}, {7, {l.scaled(F, 3)}}});
  auto s = gcd_and_simplify(C);
  ASSERT_EQ(s.gcd.size(), 1u);
  MultiPoly g = MultiPoly::from_form(F, s.gcd[0]);
  EXPECT_EQ(g * expand(s.simp), expand(C));
}

TEST(SynRank, Examples) {
  Field F;
  size_t n = 4;
  EXPECT_EQ(syn_rank(circuit(F, n, {{1, {X(n, 0), X(n, 1)}}})), 0u);
  EXPECT_EQ(syn_rank(circuit(F, n, {{1, {X(n, 0), X(n, 1)}}, {1, {X(n, 2), X(n, 3)}}})), 4u);
  EXPECT_EQ(syn_rank(circuit(F, n, {{1, {X(n, 0), X(n, 1)}}, {1, {X(n, 0), X(n, 2)}}})), 2u);
}

TEST(Distance, Examples) {
  Field F;
  Rng rng(42);
  size_t n = 4;
  auto a = circuit(F, n, {{1, {X(n, 0), X(n, 1)}}});
  auto b = circuit(F, n, {{1, {X(n, 2), X(n, 3)}}});
  EXPECT_EQ(distance(a, b), 4u);
  for (int t = 0; t < 50; ++t) {
    auto c1 = random_ml_circuit(F, 5, 1 + rng() % 3, rng), c2 = random_ml_circuit(F, 5, 1 + rng() % 3, rng);
    EXPECT_EQ(distance(c1, c2), distance(c2, c1));
    EXPECT_EQ(distance(c1, c1), syn_rank(c1));
  }
}

TEST(IsMinimal, Examples) {
  Field F;
  Rng rng(43);
  size_t n = 4;
  EXPECT_TRUE(is_minimal(circuit(F, n, {{1, {X(n, 0), X(n, 1)}}}), 40, rng));
  EXPECT_FALSE(is_minimal(circuit(F, n, {{1, {X(n, 0), X(n, 1)}}, {F.neg(1), {X(n, 0), X(n, 1)}}, {1, {X(n, 2)}}}),
                          40, rng));
  for (int t = 0; t < 10; ++t) {
    // Gates on pairwise disjoint variable sets never cancel.
    size_t m = 9;
    auto C = circuit(F, m, {random_ml_gate(F, m, {0, 1, 2}, 2, rng), random_ml_gate(F, m, {3, 4, 5}, 3, rng),
                            random_ml_gate(F, m, {6, 7, 8}, 1, rng)});
    EXPECT_TRUE(is_minimal(C, 40, rng));
  }
}

TEST(MinimalizePower, Examples) {
  Field F;
  Rng rng(44);
  size_t n = 2;
  LinearForm l({1, 1}, 0);
  PowerCircuit P{F, n, 3, {{1, l}, {2, l}}};
  auto m = minimalize_power(P);
  ASSERT_EQ(m.terms.size(), 1u);
  EXPECT_EQ(m.terms[0].c, 3u);
  EXPECT_EQ(L_of(P), 1u);
  EXPECT_EQ(L_of(PowerCircuit{F, n, 3, {{1, l}, {F.neg(1), l}}}), 0u);
  auto m2 = minimalize_power(PowerCircuit{F, n, 2, {{1, l}, {1, LinearForm({2, 2}, 0)}}});
  ASSERT_EQ(m2.terms.size(), 1u);
  EXPECT_EQ(m2.terms[0].c, 5u);
  EXPECT_EQ(m2.terms[0].form, l);
}

TEST(MinimalizePower, IdempotentAndValuePreserving) {
  Field F;
  Rng rng(45);
  for (int t = 0; t < 30; ++t) {
    PowerCircuit P = random_power_circuit(F, 3, 3, 4, rng);
    // Add rescaled duplicates so merging has work to do.
    P.terms.push_back({F.random_nonzero(rng), P.terms[0].form.scaled(F, F.random_nonzero(rng))});
    auto m = minimalize_power(P);
    EXPECT_EQ(expand(m), expand(P));
    auto mm = minimalize_power(m);
    EXPECT_EQ(mm.terms.size(), m.terms.size());
    EXPECT_EQ(expand(mm), expand(m));
    EXPECT_TRUE(is_minimal(m));
  }
}

TEST(Eval, EmptyAndPlanted) {
  Field F;
  Rng rng(46);
  EXPECT_TRUE(expand(circuit(F, 3, {})).is_zero());
  for (int t = 0; t < 10; ++t) {
    PowerCircuit P = random_power_circuit(F, 4, 2, 3, rng);
    EXPECT_TRUE(is_minimal(P));
    Oracle o = circuit_oracle(P);
    MultiPoly f = expand(P);
    for (int i = 0; i < 5; ++i) {
      Vec x = F.random_vector(4, rng);
      EXPECT_EQ(o(x), f.evaluate(x));
    }
    auto C = random_ml_circuit(F, 6, 3, rng);
    EXPECT_TRUE(gates_variable_disjoint(C));
    Vec x = F.random_vector(6, rng);
    EXPECT_EQ(circuit_oracle(C)(x), expand(C).evaluate(x));
  }
}

TEST(RankSandwich, SemanticBelowSyntacticBelowBound) {
  Field F;
  Rng rng(47);
  int checked = 0;
  while (checked < 40) {
    size_t k = 1 + rng() % 3;
    auto C = random_ml_circuit(F, 6, k, rng);
    MultiPoly f = expand(C);
    if (f.is_zero()) continue;
    ++checked;
    size_t sem = sem_rank(f, rng), syn = syn_rank(C);
    EXPECT_LE(sem, syn);
    // A nonzero product of linear forms counts as rank 1 here.
    double bound = 128.0 * k * k * std::log2(static_cast<double>(k)) * std::max<size_t>(1, sem);
    EXPECT_LE(static_cast<double>(syn), bound);
  }
}

TEST(SetMultilinear, GeneratorShape) {
  Field F(5);
  Rng rng(48);
  auto C = random_setml_circuit(F, {{0, 1}, {2, 3}, {4, 5}}, 6, 2, rng);
  EXPECT_TRUE(is_set_multilinear_shape(C));
  EXPECT_TRUE(gates_variable_disjoint(C));
  C.gates[0].forms[0].coeffs[2] = 1;
  EXPECT_FALSE(is_set_multilinear_shape(C));
}

}  // namespace
}  // namespace d3r
