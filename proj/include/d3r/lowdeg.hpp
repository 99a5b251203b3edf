#pragma once

#include <optional>
#include <vector>

#include "d3r/circuits.hpp"
#include "d3r/oracle.hpp"

namespace d3r {

// ---- polynomial systems -----------------------------------------------------

struct PolySystem {
  Field field;
  size_t num_unknowns = 0;
  std::vector<MultiPoly> equations;  // each over num_unknowns variables, "= 0"
  std::vector<Fe> domain;            // values to try per unknown; empty = all of F_p
  size_t budget = 10000000;          // search nodes
};

enum class SolveStatus { Solved, NoSolution, BudgetExceeded };

struct SolveResult {
  SolveStatus status = SolveStatus::NoSolution;
  Vec assignment;
  size_t nodes = 0;
};

// Depth-first enumeration with pruning on fully assigned equations.  Sound and
// complete within the budget; any returned assignment satisfies every equation.
SolveResult solve_poly_system(const PolySystem& sys);
// Every solution (up to `limit`), in enumeration order.
std::vector<Vec> all_solutions(const PolySystem& sys, size_t limit = 1000);

// ---- learners ---------------------------------------------------------------

struct LowdegOptions {
  size_t max_k = 3;
  unsigned max_d = 4;
  size_t max_m = 6;
  unsigned error_exponent = 40;
  size_t assembly_budget = 200000;  // linear solves per learner call
  size_t recursion_depth = 8;
  // Desk-scale gate used by the reconstruction drivers.
  static LowdegOptions wide();
};

// Multilinear ΣΠΣ(k) learner for an explicit polynomial; minimal fan-in within
// its candidate space.  Throws NotInClass or BudgetExceeded.
DepthThreeCircuit learn_ml_explicit(const MultiPoly& f, size_t k, Rng& rng, const LowdegOptions& opt = {});

DepthThreeCircuit learn_ml_lowdeg(const Oracle& o, size_t k, unsigned d, Rng& rng, const LowdegOptions& opt = {});
DepthThreeCircuit learn_ml_lowrank(const Oracle& o, size_t k, size_t r, Rng& rng, const LowdegOptions& opt = {});
DepthThreeCircuit learn_ml_low_semrank(const Oracle& o, size_t k, size_t r, Rng& rng,
                                       const LowdegOptions& opt = {});

// Same pipelines for callers that already hold the coefficients.
DepthThreeCircuit learn_ml_lowrank_explicit(const MultiPoly& f, size_t k, size_t r, Rng& rng,
                                            const LowdegOptions& opt = {});
DepthThreeCircuit learn_ml_low_semrank_explicit(const MultiPoly& f, size_t k, size_t r, Rng& rng,
                                                const LowdegOptions& opt = {});

// Literal polynomial-system formulation over a tiny field: one unknown per
// coefficient of each form of each gate of the reduced polynomial, one equation
// per monomial, plus the multilinearity constraints of the lift reduced to a
// linearly independent basis.
struct SystemDiagnostics {
  size_t unknowns = 0;
  size_t lifting_constraints = 0;  // before reduction
  size_t lifting_basis = 0;        // after reduction
  bool basis_spans_all = true;     // every discarded constraint is in the span
  size_t nodes = 0;
};
DepthThreeCircuit learn_ml_system(const Oracle& o, size_t k, unsigned d, Rng& rng, const LowdegOptions& opt = {},
                                  SystemDiagnostics* diag = nullptr);

// Set-multilinear learner (tensor decomposition): one homogeneous form per block
// per gate, minimal fan-in.
DepthThreeCircuit learn_setml_explicit(const MultiPoly& f, size_t k, const std::vector<std::vector<size_t>>& blocks,
                                       Rng& rng, const LowdegOptions& opt = {});
DepthThreeCircuit learn_setml_lowdeg(const Oracle& o, size_t k, const std::vector<std::vector<size_t>>& blocks,
                                     Rng& rng, const LowdegOptions& opt = {});

// Helpers shared with other modules.
std::optional<ProductGate> as_product(const MultiPoly& f, Rng& rng);  // f nonzero product of affine forms
LinearForm form_of(const MultiPoly& f);                                  // f of degree <= 1

}  // namespace d3r
