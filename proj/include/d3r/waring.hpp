#pragma once

#include <optional>
#include <vector>

#include "d3r/circuits.hpp"
#include "d3r/oracle.hpp"
#include "d3r/upoly.hpp"

namespace d3r {

// (α, α², …, α^n)
Vec moment_point(const Field& F, Fe alpha, size_t n);

struct WaringOptions {
  unsigned error_exponent = 40;
  size_t retries = 8;                 // fresh anchors/lines per base-case call
  size_t fallback_budget = 2000000;   // candidate subsets for the enumeration fallback
  bool early_exit = true;             // stop the α sweep once L reaches k
};

struct WaringDiagnostics {
  Fe alpha = 0;              // chosen α (0 when the low-degree path was taken)
  size_t best_L = 0;
  size_t alphas_tried = 0;
  bool used_fallback = false;
  std::uint64_t queries = 0;
};

// u(t) = Σ μ_i (1 + τ_i t)^d with distinct τ_i.
struct BinaryTerm {
  Fe mu = 0;
  Fe tau = 0;
};
struct BinaryDecomposition {
  std::vector<BinaryTerm> terms;
  bool unique = false;  // the catalecticant kernel at this rank was one-dimensional
};

// Smallest-rank decomposition of a univariate polynomial of degree <= d as a
// sum of d-th powers of forms 1 + τt, or nullopt if none with rank <= r_max
// was found.
std::optional<BinaryDecomposition> decompose_univariate(const Field& F, const UPoly& u, unsigned d, size_t r_max,
                                                        Rng& rng);

// Minimal decomposition of an explicit polynomial as Σ c_i ℓ_i^d with at most
// k terms.  Throws NotInClass or BudgetExceeded.
PowerCircuit decompose_explicit(const MultiPoly& G, unsigned d, size_t k, Rng& rng, const WaringOptions& opt = {},
                                bool* used_fallback = nullptr);

// Exhaustive search over normalized affine forms whose coordinates lie in
// `values`; returns a minimal decomposition of rank <= r_max.  The rank of the
// result is its term count; nullopt means no decomposition of rank <= r_max.
std::optional<PowerCircuit> enumerate_waring(const MultiPoly& G, unsigned d, size_t r_max,
                                             const std::vector<Fe>& values, size_t budget);

// Base case: o has degree bound d (the power) and is Σ^k∧Σ.
PowerCircuit learn_sumpow_lowdeg(const Oracle& o, size_t k, Rng& rng, const WaringOptions& opt = {},
                                 WaringDiagnostics* diag = nullptr);

// Full reconstruction through derivatives along the moment curve.
PowerCircuit reconstruct_sumpowsum(const Oracle& o, size_t k, Rng& rng, const WaringOptions& opt = {},
                                   WaringDiagnostics* diag = nullptr);

}  // namespace d3r
