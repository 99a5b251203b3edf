#pragma once

#include <cstdint>
#include <vector>

#include "d3r/circuits.hpp"

namespace d3r {

// One planted cluster: `gates` multilinear gates sharing a private set of
// `vars` variables, each gate split into `parts` variable-disjoint forms.
struct ClusterShape {
  size_t vars = 2;
  size_t gates = 1;
  size_t parts = 2;
};

struct PlantedInstance {
  DepthThreeCircuit circuit;
  std::vector<std::vector<size_t>> clusters;       // gate indices per cluster
  std::vector<std::vector<size_t>> cluster_vars;   // private variables per cluster
  std::vector<MultiPoly> cluster_polys;
  std::vector<uint64_t> cluster_ranks;             // max(1, Δ_sem)
  uint64_t tau = 0;
};

// Variable-disjoint clusters on randomly chosen variables.  Resamples until the
// semantic clustering of the circuit at τ reproduces the planted partition and
// no cluster sums to zero; throws InvalidArgument after max_tries.
PlantedInstance plant_separated(const Field& F, size_t n, const std::vector<ClusterShape>& shapes, uint64_t tau,
                                Rng& rng, size_t max_tries = 200);

// k random multilinear gates, each on a random subset of 2..d variables split
// into a random number of forms.  Resamples until the circuit is minimal and
// the sum is nonzero.
DepthThreeCircuit plant_ml_circuit(const Field& F, size_t n, size_t k, unsigned d, Rng& rng);

}  // namespace d3r
