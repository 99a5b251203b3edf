#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "d3r/field.hpp"
#include "d3r/matrix.hpp"

namespace d3r {

class Oracle;

// Exponent vector of length num_vars.  Lexicographic vector comparison is the
// monomial order used everywhere ("lex-least" = smallest vector).
using Monomial = std::vector<std::uint16_t>;

// Affine form coeffs·x + constant.
struct LinearForm {
  Vec coeffs;
  Fe constant = 0;

  LinearForm() = default;
  LinearForm(Vec c, Fe k) : coeffs(std::move(c)), constant(k) {}
  static LinearForm variable(size_t n, size_t i);
  static LinearForm constant_form(size_t n, Fe c);

  size_t num_vars() const { return coeffs.size(); }
  bool is_zero() const;
  bool is_constant() const;  // no variable occurs
  std::vector<size_t> support() const;
  Fe evaluate(const Field& F, const Vec& x) const;
  // Value of the homogeneous part at u.
  Fe linear_part(const Field& F, const Vec& u) const;
  LinearForm scaled(const Field& F, Fe c) const;
  // Coordinates (coeffs..., constant) as one vector of length n+1.
  Vec as_vector() const;
  static LinearForm from_vector(const Vec& v);
  // Scaled so the first nonzero coordinate of as_vector() is 1; returns the
  // factor s with *this = s · canonical.
  LinearForm canonical(const Field& F, Fe* scale_out = nullptr) const;
  bool operator==(const LinearForm& o) const { return coeffs == o.coeffs && constant == o.constant; }
  bool operator<(const LinearForm& o) const {
    return coeffs != o.coeffs ? coeffs < o.coeffs : constant < o.constant;
  }
};

bool proportional(const Field& F, const LinearForm& a, const LinearForm& b);

class MultiPoly {
 public:
  MultiPoly() : F_(), n_(0) {}
  MultiPoly(Field F, size_t n) : F_(F), n_(n) {}
  static MultiPoly constant(Field F, size_t n, Fe c);
  static MultiPoly variable(Field F, size_t n, size_t i);
  static MultiPoly from_form(const Field& F, const LinearForm& l);

  const Field& field() const { return F_; }
  size_t num_vars() const { return n_; }
  const std::map<Monomial, Fe>& terms() const { return terms_; }
  size_t num_terms() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Fe constant_term() const;
  int degree() const;  // -1 for zero
  bool is_multilinear() const;
  std::vector<size_t> support_vars() const;

  void add_term(const Monomial& m, Fe c);
  Fe coeff(const Monomial& m) const;

  MultiPoly operator+(const MultiPoly& o) const;
  MultiPoly operator-(const MultiPoly& o) const;
  MultiPoly operator-() const;
  MultiPoly operator*(const MultiPoly& o) const;
  MultiPoly scaled(Fe c) const;
  MultiPoly pow(unsigned e) const;
  bool operator==(const MultiPoly& o) const { return F_ == o.F_ && n_ == o.n_ && terms_ == o.terms_; }
  bool operator!=(const MultiPoly& o) const { return !(*this == o); }

  Fe evaluate(const Vec& point) const;
  // f|_{B,a}: every variable outside keep is fixed to a[j].
  MultiPoly restrict(const std::vector<bool>& keep, const Vec& a) const;
  MultiPoly derivative(size_t var, unsigned e = 1) const;
  // Multilinear only: the sum of terms divisible by every variable in vars,
  // with those variables removed (the iterated derivative).
  MultiPoly ml_derivative(const std::vector<size_t>& vars) const;
  // g(x) = f(A x) for an n×n matrix A.
  MultiPoly compose(const Matrix& A) const;
  // Exact division; throws InvalidArgument when divisor does not divide.
  MultiPoly divide_exact(const MultiPoly& divisor) const;
  std::string to_string() const;

 private:
  Field F_;
  size_t n_;
  std::map<Monomial, Fe> terms_;
};

MultiPoly directional_derivative(const MultiPoly& f, const Vec& u, unsigned order);

// Coefficients of the polynomial computed by an oracle that depends only on its
// first m variables and has total degree <= d.  Uses C(m+d, d) queries on the
// integer simplex and Newton interpolation on that lower set.
MultiPoly interpolate_dense(const Oracle& o, size_t m, unsigned d);

// Multilinear interpolation over all subsets of size <= d of the listed
// variables (all others are held at zero).  Exact for multilinear polynomials
// of degree <= d supported on vars.
MultiPoly interpolate_multilinear(const Oracle& o, const std::vector<size_t>& vars, unsigned d);

struct Factorization {
  Fe scalar = 0;
  std::vector<MultiPoly> factors;  // irreducible, pairwise variable-disjoint, normalized
};

// Factorization of a nonzero multilinear polynomial.  Each factor is scaled so
// its lex-least monomial has coefficient 1; scalar · ∏ factors = f exactly.
Factorization ml_factor(const MultiPoly& f, Rng& rng);

struct LinearSplit {
  MultiPoly lin;       // Lin(f): product of the degree-1 factors
  MultiPoly residual;  // f / Lin(f)
};
LinearSplit strip_linear_factors(const MultiPoly& f, Rng& rng);

}  // namespace d3r
