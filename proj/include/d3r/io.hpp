#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "d3r/circuits.hpp"

namespace d3r {

// Dense tensor, first index fastest.
struct TensorData {
  Field field;
  std::vector<size_t> dims;
  std::vector<Fe> data;

  size_t size() const;
  Fe& at(const std::vector<size_t>& idx);
  Fe at(const std::vector<size_t>& idx) const;
};

// Block i holds the variables of mode i, laid out consecutively.
std::vector<std::vector<size_t>> tensor_blocks(const std::vector<size_t>& dims);
MultiPoly tensor_to_poly(const TensorData& T);
// Throws InvalidArgument when f is not set-multilinear over the blocks.
TensorData poly_to_tensor(const MultiPoly& f, const std::vector<size_t>& dims);

// One "d3recon/1" document: a header, one payload section and an optional
// key-value diagnostics block.
//
//   d3recon/1
//   prime 2305843009213693951
//   vars 4
//   blocks 0 1 | 2 3            (optional)
//   poly                        one "coeff: e1 e2 ... en" line per term
//   3: 1 0 0 1
//   end
//
// Other payloads: "circuit" with "gate <scalar>" followed by its
// "form <c1> ... <cn> | <constant>" lines; "power <degree>" with
// "term <c>: <c1> ... <cn> | <constant>" lines; "tensor <d1> ... <dk>" with
// "<i1> ... <ik>: <value>" lines for the nonzero entries.
struct Document {
  Field field;
  size_t num_vars = 0;
  std::vector<std::vector<size_t>> blocks;
  std::optional<MultiPoly> poly;
  std::optional<DepthThreeCircuit> circuit;
  std::optional<PowerCircuit> power;
  std::optional<TensorData> tensor;
  std::vector<std::pair<std::string, std::string>> diagnostics;

  // The polynomial computed by whichever payload is present.
  MultiPoly polynomial() const;
};

// Throws ParseError with the line and column of the first problem.  When
// expected_prime is set, a different header prime is an error.
Document parse_document(const std::string& text, std::optional<std::uint64_t> expected_prime = std::nullopt);
std::string print_document(const Document& doc);

Document make_document(const MultiPoly& f);
Document make_document(const DepthThreeCircuit& C);
Document make_document(const PowerCircuit& P);
Document make_document(const TensorData& T);

}  // namespace d3r
