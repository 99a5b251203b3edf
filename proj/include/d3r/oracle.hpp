#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "d3r/field.hpp"
#include "d3r/matrix.hpp"
#include "d3r/poly.hpp"

namespace d3r {

// Black-box access to a polynomial.  Derived oracles share the counter of the
// base oracle they were built from; the counter only moves on base queries.
class Oracle {
 public:
  using Fn = std::function<Fe(const Vec&)>;

  Oracle() = default;
  Oracle(Field F, size_t n, unsigned degree_bound, Fn fn, std::shared_ptr<std::atomic<std::uint64_t>> counter);

  // A fresh base oracle with its own counter.
  static Oracle base(Field F, size_t n, unsigned degree_bound, Fn fn);

  const Field& field() const { return F_; }
  size_t num_vars() const { return n_; }
  unsigned degree_bound() const { return degree_bound_; }
  std::uint64_t queries() const { return counter_ ? counter_->load() : 0; }
  const std::shared_ptr<std::atomic<std::uint64_t>>& counter() const { return counter_; }

  Fe operator()(const Vec& x) const;

  // Same evaluator with a tighter or looser declared degree bound.
  Oracle with_degree_bound(unsigned d) const;

 private:
  Field F_;
  size_t n_ = 0;
  unsigned degree_bound_ = 0;
  Fn fn_;
  std::shared_ptr<std::atomic<std::uint64_t>> counter_;
};

Oracle from_poly(const MultiPoly& f);
Oracle zero_oracle(Field F, size_t n);

// ∂^e f/∂x_var^e, spending degree_bound+1 base queries per evaluation.
Oracle derivative_oracle(const Oracle& o, size_t var, unsigned e);
// ∂^e f/∂u^e via an invertible A with A e_1 = u.
Oracle directional_derivative_oracle(const Oracle& o, const Vec& u, unsigned e);
Oracle restrict_oracle(const Oracle& o, const std::vector<bool>& keep, const Vec& a);
Oracle shift_oracle(const Oracle& o, const Vec& a);
// Univariate oracle t -> o(a + t(b - a)).
Oracle line_oracle(const Oracle& o, const Vec& a, const Vec& b);
// x -> o(A x).
Oracle compose_oracle(const Oracle& o, const Matrix& A);
// Linear combination c1·o1 + c2·o2 (the counters of o1 are kept).
Oracle combine_oracles(const Oracle& o1, Fe c1, const Oracle& o2, Fe c2);

struct PitResult {
  bool equal = true;
  std::optional<Vec> witness;
  size_t trials = 0;
};

// Schwartz–Zippel comparison with failure probability <= 2^-error_exponent.
PitResult pit_equal(const Oracle& o1, const Oracle& o2, unsigned error_exponent, Rng& rng);
bool pit_is_zero(const Oracle& o, unsigned error_exponent, Rng& rng);
// Number of random trials needed for the requested confidence.
size_t pit_trials(const Field& F, unsigned degree, unsigned error_exponent);

}  // namespace d3r
