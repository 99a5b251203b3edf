#pragma once

#include <cstdint>
#include <vector>

#include "d3r/cluster.hpp"
#include "d3r/errors.hpp"
#include "d3r/lowdeg.hpp"
#include "d3r/oracle.hpp"

namespace d3r {

struct PreserveOptions {
  size_t max_B = 64;
  size_t max_iterations = 512;  // growth steps of B
  size_t max_I = 4;             // candidate set size
  unsigned error_exponent = 40;
  LowdegOptions learner = LowdegOptions::wide();
};

// State of the search for a cluster-preserving set: B, the anchor a and the
// clustering of the learned restriction f|_{B,a}.
struct PreservingContext {
  std::vector<size_t> B;  // sorted
  Vec a;
  uint64_t tau = 0;
  size_t k = 0;
  size_t s = 0;
  DepthThreeCircuit learned;            // circuit for f|_{B,a} over all n variables
  Clustering clustering;                // of `learned`
  std::vector<MultiPoly> clusters;      // cluster polynomials of f|_{B,a}
  std::vector<uint64_t> cluster_ranks;  // max(1, Δ_sem) of each cluster
  size_t iterations = 0;
  size_t learner_calls = 0;
  size_t candidates_checked = 0;

  std::vector<bool> keep_mask(size_t n) const;
};

class PreserveBudgetExceeded : public BudgetExceeded {
 public:
  PreserveBudgetExceeded(const std::string& msg, PreservingContext partial)
      : BudgetExceeded(msg), partial_(std::move(partial)) {}
  const PreservingContext& partial() const { return partial_; }

 private:
  PreservingContext partial_;
};

// Grows B from the empty set: for each candidate I of size 1..max_I outside B
// (lexicographic within a size), learn f|_{B∪I,a}, verify it by PIT, cluster it
// with τ and grow B when the cluster count changes, a cluster has no match, or
// a matched cluster's rank increases.  Restarts after every growth and stops
// when a full pass triggers nothing.  A fresh anchor is drawn from rng.
PreservingContext find_preserving_set(const Oracle& o, size_t k, uint64_t tau, Rng& rng,
                                      const PreserveOptions& opt = {});

// Same with a caller-chosen anchor.
PreservingContext find_preserving_set_at(const Oracle& o, size_t k, uint64_t tau, const Vec& a, Rng& rng,
                                         const PreserveOptions& opt = {});

// Matches each polynomial of `next` restricted to keep/a against `prev`.  Returns
// σ with next[i]|keep == prev[σ[i]], or an empty vector when no bijection exists.
std::vector<size_t> match_clusters(const std::vector<MultiPoly>& next, const std::vector<MultiPoly>& prev,
                                   const std::vector<bool>& keep, const Vec& a);

}  // namespace d3r
