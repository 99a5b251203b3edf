#include "d3r/gen.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "d3r/cluster.hpp"
#include "d3r/errors.hpp"

namespace d3r {

namespace {

std::set<std::vector<size_t>> as_set(const std::vector<std::vector<size_t>>& p) { return {p.begin(), p.end()}; }

}  // namespace

PlantedInstance plant_separated(const Field& F, size_t n, const std::vector<ClusterShape>& shapes, uint64_t tau,
                                Rng& rng, size_t max_tries) {
  size_t need = 0;
  for (const auto& s : shapes) {
    if (s.gates == 0 || s.vars == 0 || s.parts == 0 || s.parts > s.vars)
      throw InvalidArgument("plant_separated: bad cluster shape");
    need += s.vars;
  }
  if (need > n) throw InvalidArgument("plant_separated: not enough variables");
  for (size_t attempt = 0; attempt < max_tries; ++attempt) {
    std::vector<size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    PlantedInstance P;
    P.tau = tau;
    P.circuit.field = F;
    P.circuit.num_vars = n;
    P.circuit.multilinear = true;
    size_t next = 0;
    bool degenerate = false;
    for (const auto& s : shapes) {
      std::vector<size_t> vars(perm.begin() + static_cast<std::ptrdiff_t>(next),
                               perm.begin() + static_cast<std::ptrdiff_t>(next + s.vars));
      std::sort(vars.begin(), vars.end());
      next += s.vars;
      std::vector<size_t> gates;
      MultiPoly sum(F, n);
      for (size_t g = 0; g < s.gates; ++g) {
        gates.push_back(P.circuit.gates.size());
        P.circuit.gates.push_back(random_ml_gate(F, n, vars, s.parts, rng));
        sum = sum + expand_gate(F, n, P.circuit.gates.back());
      }
      if (sum.is_zero() || sum.is_constant()) degenerate = true;
      P.clusters.push_back(gates);
      P.cluster_vars.push_back(vars);
      P.cluster_polys.push_back(sum);
    }
    if (degenerate) continue;
    Clustering c = semantic_clustering(P.circuit, tau, rng);
    if (as_set(c.partition) != as_set(P.clusters)) continue;
    for (const auto& block : P.clusters) {
      auto it = std::find(c.partition.begin(), c.partition.end(), block);
      P.cluster_ranks.push_back(c.cluster_ranks[static_cast<size_t>(it - c.partition.begin())]);
    }
    return P;
  }
  throw InvalidArgument("plant_separated: could not realise the requested separation");
}

DepthThreeCircuit plant_ml_circuit(const Field& F, size_t n, size_t k, unsigned d, Rng& rng) {
  if (d < 2 || n < 2) throw InvalidArgument("plant_ml_circuit: need n, d >= 2");
  unsigned top = std::min<unsigned>(d, static_cast<unsigned>(n));
  for (;;) {
    DepthThreeCircuit C;
    C.field = F;
    C.num_vars = n;
    C.multilinear = true;
    for (size_t g = 0; g < k; ++g) {
      size_t deg = std::uniform_int_distribution<size_t>(2, top)(rng);
      std::vector<size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<size_t> vars(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(deg));
      std::sort(vars.begin(), vars.end());
      size_t parts = std::uniform_int_distribution<size_t>(1, deg)(rng);
      C.gates.push_back(random_ml_gate(F, n, vars, parts, rng));
    }
    if (expand(C).is_zero()) continue;
    if (!is_minimal(C, 40, rng)) continue;
    return C;
  }
}

}  // namespace d3r
