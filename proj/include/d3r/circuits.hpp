#pragma once

#include <vector>

#include "d3r/oracle.hpp"
#include "d3r/poly.hpp"

namespace d3r {

struct ProductGate {
  Fe scalar = 1;
  std::vector<LinearForm> forms;

  unsigned degree() const;  // number of non-constant forms
};

// Sum of product gates.  When set_multilinear is set, blocks partitions the
// variables and every gate takes one form supported in each block.
struct DepthThreeCircuit {
  Field field;
  size_t num_vars = 0;
  std::vector<ProductGate> gates;
  bool multilinear = false;
  bool set_multilinear = false;
  std::vector<std::vector<size_t>> blocks;

  size_t fan_in() const { return gates.size(); }
  unsigned degree() const;
};

struct PowerTerm {
  Fe c = 0;
  LinearForm form;
};

// Σ c_i ℓ_i^degree.
struct PowerCircuit {
  Field field;
  size_t num_vars = 0;
  unsigned degree = 0;
  std::vector<PowerTerm> terms;
};

// ---- evaluation -----------------------------------------------------------

Fe eval_gate(const Field& F, const ProductGate& g, const Vec& x);
MultiPoly expand_gate(const Field& F, size_t n, const ProductGate& g);
MultiPoly expand(const DepthThreeCircuit& C);
MultiPoly expand(const PowerCircuit& P);
Oracle circuit_oracle(const DepthThreeCircuit& C);
Oracle circuit_oracle(const PowerCircuit& P);

// Drops zero-scalar gates, folds constant forms into scalars.
ProductGate normalize_gate(const Field& F, const ProductGate& g);

// Structural checks.
bool gates_variable_disjoint(const DepthThreeCircuit& C);
bool is_set_multilinear_shape(const DepthThreeCircuit& C);

// ---- syntactic measures ---------------------------------------------------

struct GcdSplit {
  std::vector<LinearForm> gcd;  // canonical representatives
  DepthThreeCircuit simp;
};

GcdSplit gcd_and_simplify(const DepthThreeCircuit& C);
size_t syn_rank(const DepthThreeCircuit& C);
DepthThreeCircuit syntactic_sum(const DepthThreeCircuit& a, const DepthThreeCircuit& b);
size_t distance(const DepthThreeCircuit& a, const DepthThreeCircuit& b);

// No proper nonempty subset of gates sums to zero (PIT per subset).
bool is_minimal(const DepthThreeCircuit& C, unsigned error_exponent, Rng& rng);
bool is_minimal(const PowerCircuit& P);

PowerCircuit minimalize_power(const PowerCircuit& P);
size_t L_of(const PowerCircuit& P);

// Canonical form set of a minimal power circuit, sorted; useful for comparing
// decompositions up to permutation and rescaling.
std::vector<LinearForm> canonical_forms(const PowerCircuit& P);

DepthThreeCircuit subcircuit(const DepthThreeCircuit& C, const std::vector<size_t>& gate_indices);

// ---- planted instances ----------------------------------------------------

// Random minimal Σ^k∧Σ circuit: nonzero coefficients, pairwise non-proportional
// affine forms with at least one variable.
PowerCircuit random_power_circuit(const Field& F, size_t n, size_t k, unsigned d, Rng& rng,
                                  bool affine = true);

// Random multilinear gate on the given variables, split into `parts` nonempty
// variable-disjoint forms with random constants.
ProductGate random_ml_gate(const Field& F, size_t n, const std::vector<size_t>& vars, size_t parts, Rng& rng,
                           bool with_constants = true);

// Random set-multilinear circuit with k gates over the given blocks.
DepthThreeCircuit random_setml_circuit(const Field& F, const std::vector<std::vector<size_t>>& blocks, size_t n,
                                       size_t k, Rng& rng);

}  // namespace d3r
