#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "d3r/preserve.hpp"

namespace d3r {

struct EvalOptions {
  size_t E = 8;             // errors tolerated per line decode
  size_t W_min = 64;        // |W| = max(deg + 2E + 1, W_min)
  unsigned cluster_degree = 0;  // 0: the oracle's degree bound
  LowdegOptions learner = LowdegOptions::wide();
  // Test hook: may overwrite the cluster values obtained at line sample i.
  std::function<void(size_t, std::vector<Fe>&)> fault;
};

// A neighbor step or hybrid walk could not match clusters.
class EvaluationFailure : public Error {
 public:
  EvaluationFailure(const std::string& msg, size_t hybrid) : Error(msg), hybrid_(hybrid) {}
  size_t hybrid() const { return hybrid_; }

 private:
  size_t hybrid_;
};

// Evaluates the clusters of f at arbitrary points from the clusters of
// f|_{B,a}.  The state kept per point b is the list of cluster polynomials of
// f|_{B,b}; values are those polynomials evaluated at b.
class ClusterEvaluator {
 public:
  ClusterEvaluator(Oracle o, PreservingContext ctx, Rng& rng, EvalOptions opt = {});

  size_t num_clusters() const { return ctx_.s; }
  const PreservingContext& context() const { return ctx_; }
  size_t sample_count() const;  // |W|
  unsigned cluster_degree() const;
  size_t neighbor_steps() const { return steps_; }

  // Cluster polynomials of f|_{B,b}, reached by walking the hybrids from a.
  const std::vector<MultiPoly>& clusters_at(const Vec& b);

  // b and b_prime differ in at most one coordinate.
  std::vector<Fe> eval_neighbor(const Vec& b, const Vec& b_prime);
  std::vector<Fe> eval_line(const Vec& b);
  // Line decoding through a and b; throws DecodeFailure.
  std::vector<Fe> eval_arbitrary(const Vec& b);

  // Black box for cluster j built on eval_arbitrary.
  Oracle cluster_oracle(size_t j);

 private:
  Vec key_of(const Vec& b) const;
  std::vector<MultiPoly> step(const Vec& b, const std::vector<MultiPoly>& at_b, size_t j, Fe value);

  Oracle o_;
  PreservingContext ctx_;
  Rng& rng_;
  EvalOptions opt_;
  std::vector<bool> in_B_;
  std::map<Vec, std::vector<MultiPoly>> cache_;
  std::map<Vec, std::vector<Fe>> arbitrary_cache_;
  size_t steps_ = 0;
};

// Full cluster polynomials by walking a grid a + Σ_{i∈S} δ_i e_i over the
// variables outside B (|S| <= cluster degree) and Möbius inversion.
std::vector<MultiPoly> materialize_clusters(ClusterEvaluator& ev, Rng& rng);

enum class ClusterAccess { Grid, Line };

struct ReconstructOptions {
  std::vector<uint64_t> taus;  // empty: 4, 8, 16, 32, then R_M(2k)
  size_t anchor_retries = 3;
  unsigned error_exponent = 40;
  ClusterAccess access = ClusterAccess::Grid;
  PreserveOptions preserve;
  EvalOptions eval;
};

struct ReconstructDiagnostics {
  uint64_t tau = 0;
  std::vector<size_t> B;
  size_t clusters = 0;
  size_t attempts = 0;
  size_t neighbor_steps = 0;
  size_t sample_count = 0;
  std::uint64_t queries = 0;
  bool certified = false;
  std::vector<std::string> failures;
};

std::vector<uint64_t> default_tau_schedule(size_t k);

DepthThreeCircuit reconstruct_multilinear(const Oracle& o, size_t k, Rng& rng, const ReconstructOptions& opt = {},
                                          ReconstructDiagnostics* diag = nullptr);

DepthThreeCircuit reconstruct_setml(const Oracle& o, size_t k, const std::vector<std::vector<size_t>>& blocks,
                                    Rng& rng, const ReconstructOptions& opt = {},
                                    ReconstructDiagnostics* diag = nullptr);

}  // namespace d3r
