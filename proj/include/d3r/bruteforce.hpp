#pragma once

#include <optional>
#include <vector>

#include "d3r/circuits.hpp"
#include "d3r/io.hpp"

namespace d3r {

// Exhaustive minimal-rank searches over tiny parameters.  They share no code
// with the learners and serve as independent oracles in the tests.

struct WaringRank {
  bool exceeded = false;  // no decomposition with at most k_max terms
  size_t rank = 0;
  PowerCircuit witness;   // verified by expansion
};

// Minimal r <= k_max with f = Σ c_i ℓ_i^d, the ℓ_i normalized forms whose
// coordinates lie in `values` (homogeneous forms when f is homogeneous).
// Throws BudgetExceeded past `budget` candidate sets.
WaringRank brute_force_waring_rank(const MultiPoly& f, size_t k_max, const std::vector<Fe>& values,
                                   size_t budget = 10000000);

struct TensorRank {
  bool exceeded = false;
  size_t rank = 0;
  std::vector<TensorData> witness;  // rank-one terms summing to T
};

// Minimal number of rank-one terms over the tensor's own (small) field.  Uses a
// full table of the tensor space when it has at most 2^22 elements, otherwise
// a search over (r-1)-subsets of rank-one tensors with a hashed last term.
TensorRank brute_force_tensor_rank(const TensorData& T, size_t k_max, size_t budget = 10000000);

// Rank-one tensor with the given mode vectors.
TensorData outer_product(const Field& F, const std::vector<Vec>& vecs);

}  // namespace d3r
