#pragma once

#include <optional>
#include <string>
#include <vector>

#include "d3r/circuits.hpp"

namespace d3r {

// ⌈4k² log₂(2d)⌉ and ⌈10k² log₂k⌉.
std::uint64_t rank_bound(std::uint64_t k, std::uint64_t d);
std::uint64_t rank_bound_ml(std::uint64_t k);

enum class ClusterKind { Syntactic, Semantic };

struct Clustering {
  ClusterKind kind = ClusterKind::Semantic;
  std::vector<std::vector<size_t>> partition;  // gate indices, each block sorted
  std::uint64_t tau = 0;
  std::uint64_t r = 0;      // the certified parameter the partition is valid for
  std::uint64_t raw_r = 0;  // max cluster rank actually attained
  std::vector<std::uint64_t> cluster_ranks;
  std::vector<std::vector<std::uint64_t>> distances;  // symmetric, zero diagonal

  size_t size() const { return partition.size(); }
};

struct PartitionCheck {
  bool valid = true;
  std::string report;
  std::optional<size_t> bad_cluster;
  std::optional<std::pair<size_t, size_t>> bad_pair;
};

// Exact check of the (τ, r) conditions of the clustering's kind.
PartitionCheck validate_partition(const DepthThreeCircuit& C, const Clustering& part, Rng& rng);

struct SyntacticOptions {
  std::optional<std::uint64_t> r_floor;  // default R_M(2k)
  bool refine = true;                    // exhaustive lowest-r pass for k <= 8
};

Clustering syntactic_clustering(const DepthThreeCircuit& C, std::uint64_t tau, const SyntacticOptions& opt = {});

// Semantic clustering of the polynomials computed by the gates.  Cluster ranks use
// the max(1, Δ_sem) convention.
Clustering semantic_clustering(const std::vector<MultiPoly>& gate_polys, std::uint64_t tau, Rng& rng,
                               size_t max_gates = 8);
Clustering semantic_clustering(const DepthThreeCircuit& C, std::uint64_t tau, Rng& rng, size_t max_gates = 8);

// Sum of the gate polynomials in each cluster.
std::vector<MultiPoly> cluster_polys(const std::vector<MultiPoly>& gate_polys, const Clustering& part);

// All set partitions of {0..k-1} as restricted-growth strings, lexicographic.
std::vector<std::vector<size_t>> restricted_growth_strings(size_t k);

}  // namespace d3r
