#include <gtest/gtest.h>

#include "d3r/cluster.hpp"
#include "d3r/semrank.hpp"
#include "test_util.hpp"

namespace d3r {
namespace {

DepthThreeCircuit ml_circuit(const Field& F, size_t n, std::vector<ProductGate> gates) {
  DepthThreeCircuit C;
  C.field = F;
  C.num_vars = n;
  C.gates = std::move(gates);
  C.multilinear = true;
  return C;
}

std::vector<size_t> range(size_t a, size_t b) {
  std::vector<size_t> v;
  for (size_t i = a; i < b; ++i) v.push_back(i);
  return v;
}

TEST(RankBounds, Formulas) {
  EXPECT_EQ(rank_bound(2, 2), 32u);
  EXPECT_EQ(rank_bound_ml(2), 40u);
  EXPECT_EQ(rank_bound_ml(4), 320u);
  // ⌈10·9·log₂3⌉ = ⌈142.64⌉
  EXPECT_EQ(rank_bound_ml(3), 143u);
}

TEST(RestrictedGrowth, BellNumbers) {
  EXPECT_EQ(restricted_growth_strings(1).size(), 1u);
  EXPECT_EQ(restricted_growth_strings(3).size(), 5u);
  EXPECT_EQ(restricted_growth_strings(5).size(), 52u);
  EXPECT_EQ(restricted_growth_strings(3).front(), (std::vector<size_t>{0, 0, 0}));
  EXPECT_EQ(restricted_growth_strings(3).back(), (std::vector<size_t>{0, 1, 2}));
}

TEST(ValidatePartition, Examples) {
  Field F;
  Rng rng(61);
  size_t n = 8;
  auto single = ml_circuit(F, n, {random_ml_gate(F, n, range(0, 4), 4, rng)});
  Clustering one;
  one.partition = {{0}};
  one.tau = 1000;
  one.r = 1;
  EXPECT_TRUE(validate_partition(single, one, rng).valid);

  auto two = ml_circuit(F, n, {random_ml_gate(F, n, range(0, 4), 4, rng), random_ml_gate(F, n, range(4, 8), 4, rng)});
  // Independent check of the sum's semantic rank: 8.
  EXPECT_EQ(sem_rank(expand(two), rng), 8u);
  Clustering part;
  part.partition = {{0}, {1}};
  part.r = 1;
  part.tau = 4;
  EXPECT_TRUE(validate_partition(two, part, rng).valid);
  part.tau = 100;
  auto bad = validate_partition(two, part, rng);
  EXPECT_FALSE(bad.valid);
  ASSERT_TRUE(bad.bad_pair.has_value());
  EXPECT_EQ(*bad.bad_pair, (std::pair<size_t, size_t>{0, 1}));
}

TEST(SyntacticClustering, Examples) {
  Field F;
  Rng rng(62);
  size_t n = 6;
  auto one = ml_circuit(F, n, {random_ml_gate(F, n, range(0, 3), 2, rng)});
  auto c1 = syntactic_clustering(one, 10);
  EXPECT_EQ(c1.size(), 1u);
  EXPECT_EQ(c1.r, 0u);

  // Two copies of the same gate, rescaled: distance 0 forces a merge.
  ProductGate g = random_ml_gate(F, n, range(0, 4), 2, rng);
  ProductGate h = g;
  h.scalar = F.mul(h.scalar, 3);
  auto dup = ml_circuit(F, n, {g, h});
  EXPECT_EQ(distance(ml_circuit(F, n, {g}), ml_circuit(F, n, {h})), 0u);
  EXPECT_EQ(syntactic_clustering(dup, 10).size(), 1u);

  // Far-apart gates with a small floor stay apart.
  size_t m = 12;
  auto far = ml_circuit(F, m, {random_ml_gate(F, m, range(0, 6), 6, rng), random_ml_gate(F, m, range(6, 12), 6, rng)});
  SyntacticOptions opt;
  opt.r_floor = 1;
  auto c = syntactic_clustering(far, 10, opt);
  EXPECT_EQ(c.size(), 2u);
  EXPECT_TRUE(validate_partition(far, c, rng).valid);
}

TEST(SyntacticClustering, AlwaysValidAndSeparated) {
  Field F;
  Rng rng(63);
  for (int t = 0; t < 20; ++t) {
    size_t n = 9, k = 2 + rng() % 3;
    DepthThreeCircuit C = ml_circuit(F, n, {});
    for (size_t i = 0; i < k; ++i) {
      std::vector<size_t> vars = range(0, n);
      std::shuffle(vars.begin(), vars.end(), rng);
      vars.resize(2 + rng() % 5);
      C.gates.push_back(random_ml_gate(F, n, vars, 1 + rng() % vars.size(), rng));
    }
    SyntacticOptions opt;
    opt.r_floor = 1;
    std::uint64_t tau = 10;
    auto c = syntactic_clustering(C, tau, opt);
    EXPECT_TRUE(validate_partition(C, c, rng).valid);
    // Gates in different clusters are far apart.
    for (size_t i = 0; i < c.size(); ++i)
      for (size_t j = i + 1; j < c.size(); ++j)
        for (size_t a : c.partition[i])
          for (size_t b : c.partition[j])
            EXPECT_GT(10 * distance(subcircuit(C, {a}), subcircuit(C, {b})), tau * c.r);
  }
}

TEST(SemanticClustering, Examples) {
  Field F;
  Rng rng(64);
  size_t n = 8;
  auto one = ml_circuit(F, n, {random_ml_gate(F, n, range(0, 3), 2, rng)});
  EXPECT_EQ(semantic_clustering(one, 4, rng).size(), 1u);

  // Two pure products on disjoint variables, m = 4 forms each: sum rank 8.
  auto two = ml_circuit(F, n, {random_ml_gate(F, n, range(0, 4), 4, rng), random_ml_gate(F, n, range(4, 8), 4, rng)});
  auto c = semantic_clustering(two, 8, rng);
  EXPECT_EQ(c.size(), 2u);
  EXPECT_EQ(c.r, 1u);
  EXPECT_TRUE(validate_partition(two, c, rng).valid);
}

// Planted clusters: each is a pair of gates on a private variable block that
// share one form, so the cluster has low rank while distinct clusters are far.
DepthThreeCircuit planted_clusters(const Field& F, size_t s, Rng& rng, size_t block = 4) {
  size_t n = s * block;
  DepthThreeCircuit C = ml_circuit(F, n, {});
  for (size_t c = 0; c < s; ++c) {
    auto vars = range(c * block, (c + 1) * block);
    C.gates.push_back(random_ml_gate(F, n, vars, block, rng));
    C.gates.push_back(random_ml_gate(F, n, vars, block / 2, rng));
  }
  return C;
}

TEST(SemanticClustering, RepresentationIndependent) {
  Field F;
  Rng rng(65);
  for (int t = 0; t < 10; ++t) {
    DepthThreeCircuit C = planted_clusters(F, 2, rng);
    DepthThreeCircuit D = C;
    std::shuffle(D.gates.begin(), D.gates.end(), rng);
    auto a = semantic_clustering(C, 2, rng), b = semantic_clustering(D, 2, rng);
    EXPECT_TRUE(validate_partition(C, a, rng).valid);
    EXPECT_TRUE(validate_partition(D, b, rng).valid);
    std::vector<MultiPoly> gc, gd;
    for (const auto& g : C.gates) gc.push_back(expand_gate(F, C.num_vars, g));
    for (const auto& g : D.gates) gd.push_back(expand_gate(F, D.num_vars, g));
    auto pa = cluster_polys(gc, a), pb = cluster_polys(gd, b);
    ASSERT_EQ(pa.size(), pb.size());
    for (const auto& p : pa) EXPECT_NE(std::find(pb.begin(), pb.end(), p), pb.end());
  }
}

}  // namespace
}  // namespace d3r
