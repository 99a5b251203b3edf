#include "d3r/oracle.hpp"

#include <cmath>
#include <string>

namespace d3r {

Oracle::Oracle(Field F, size_t n, unsigned degree_bound, Fn fn, std::shared_ptr<std::atomic<std::uint64_t>> counter)
    : F_(F), n_(n), degree_bound_(degree_bound), fn_(std::move(fn)), counter_(std::move(counter)) {}

Oracle Oracle::base(Field F, size_t n, unsigned degree_bound, Fn fn) {
  auto counter = std::make_shared<std::atomic<std::uint64_t>>(0);
  auto inner = std::move(fn);
  Fn counted = [inner, counter](const Vec& x) {
    counter->fetch_add(1, std::memory_order_relaxed);
    return inner(x);
  };
  return Oracle(F, n, degree_bound, std::move(counted), counter);
}

Fe Oracle::operator()(const Vec& x) const {
  if (x.size() != n_) throw InvalidArgument("oracle query has wrong length");
  return fn_(x);
}

Oracle Oracle::with_degree_bound(unsigned d) const {
  Oracle o = *this;
  o.degree_bound_ = d;
  return o;
}

Oracle from_poly(const MultiPoly& f) {
  auto shared = std::make_shared<const MultiPoly>(f);
  unsigned d = f.degree() < 0 ? 0 : static_cast<unsigned>(f.degree());
  return Oracle::base(f.field(), f.num_vars(), d, [shared](const Vec& x) { return shared->evaluate(x); });
}

Oracle zero_oracle(Field F, size_t n) {
  return Oracle::base(F, n, 0, [](const Vec&) { return Fe{0}; });
}

namespace {

void require_field(const Field& F, unsigned d) {
  if (F.p() < static_cast<std::uint64_t>(d) + 1)
    throw FieldTooSmall("field of size " + std::to_string(F.p()) + " cannot interpolate degree " +
                        std::to_string(d));
}

}  // namespace

Oracle derivative_oracle(const Oracle& o, size_t var, unsigned e) {
  const Field F = o.field();
  unsigned d = o.degree_bound();
  require_field(F, d);
  if (var >= o.num_vars()) throw InvalidArgument("derivative_oracle: variable out of range");
  if (e > d) return Oracle(F, o.num_vars(), 0, [](const Vec&) { return Fe{0}; }, o.counter());
  // Inverse Vandermonde rows for nodes 0..d, shared by every evaluation.
  std::vector<Fe> nodes(d + 1);
  for (unsigned j = 0; j <= d; ++j) nodes[j] = j;
  Matrix V(F, d + 1, d + 1);
  for (unsigned j = 0; j <= d; ++j) {
    Fe pw = 1;
    for (unsigned i = 0; i <= d; ++i) {
      V.at(j, i) = pw;
      pw = F.mul(pw, nodes[j]);
    }
  }
  auto Vinv = std::make_shared<const Matrix>(*inverse(V));
  // falling[i] = i(i-1)...(i-e+1)
  auto falling = std::make_shared<std::vector<Fe>>(d + 1, 0);
  for (unsigned i = e; i <= d; ++i) {
    Fe f = 1;
    for (unsigned t = 0; t < e; ++t) f = F.mul(f, F.from_int(i - t));
    (*falling)[i] = f;
  }
  Oracle base = o;
  auto fn = [F, base, var, d, e, Vinv, falling](const Vec& c) {
    Vec y(d + 1);
    Vec x = c;
    for (unsigned j = 0; j <= d; ++j) {
      x[var] = j;
      y[j] = base(x);
    }
    Vec coef = Vinv->apply(y);
    Fe s = 0, pw = 1;
    for (unsigned i = e; i <= d; ++i) {
      s = F.add(s, F.mul(F.mul(coef[i], (*falling)[i]), pw));
      pw = F.mul(pw, c[var]);
    }
    return s;
  };
  return Oracle(F, o.num_vars(), d - e, fn, o.counter());
}

Oracle compose_oracle(const Oracle& o, const Matrix& A) {
  auto Ap = std::make_shared<const Matrix>(A);
  Oracle base = o;
  return Oracle(o.field(), A.cols(), o.degree_bound(), [base, Ap](const Vec& x) { return base(Ap->apply(x)); },
                o.counter());
}

Oracle directional_derivative_oracle(const Oracle& o, const Vec& u, unsigned e) {
  const Field& F = o.field();
  size_t n = o.num_vars();
  if (u.size() != n) throw InvalidArgument("direction has wrong length");
  size_t pivot = n;
  for (size_t i = 0; i < n; ++i)
    if (u[i]) {
      pivot = i;
      break;
    }
  if (pivot == n) throw InvalidArgument("directional derivative along the zero vector");
  Matrix A(F, n, n);
  for (size_t i = 0; i < n; ++i) A.at(i, 0) = u[i];
  size_t col = 1;
  for (size_t j = 0; j < n; ++j) {
    if (j == pivot) continue;
    A.at(j, col++) = 1;
  }
  Matrix Ainv = *inverse(A);
  Oracle g = derivative_oracle(compose_oracle(o, A), 0, e);
  return compose_oracle(g, Ainv);
}

Oracle restrict_oracle(const Oracle& o, const std::vector<bool>& keep, const Vec& a) {
  if (keep.size() != o.num_vars() || a.size() != o.num_vars()) throw InvalidArgument("restrict_oracle: length mismatch");
  Oracle base = o;
  return Oracle(o.field(), o.num_vars(), o.degree_bound(),
                [base, keep, a](const Vec& x) {
                  Vec y = x;
                  for (size_t i = 0; i < y.size(); ++i)
                    if (!keep[i]) y[i] = a[i];
                  return base(y);
                },
                o.counter());
}

Oracle shift_oracle(const Oracle& o, const Vec& a) {
  Oracle base = o;
  Field F = o.field();
  return Oracle(F, o.num_vars(), o.degree_bound(),
                [base, a, F](const Vec& x) {
                  Vec y(x.size());
                  for (size_t i = 0; i < y.size(); ++i) y[i] = F.add(x[i], a[i]);
                  return base(y);
                },
                o.counter());
}

Oracle line_oracle(const Oracle& o, const Vec& a, const Vec& b) {
  Oracle base = o;
  Field F = o.field();
  Vec dir(a.size());
  for (size_t i = 0; i < a.size(); ++i) dir[i] = F.sub(b[i], a[i]);
  return Oracle(F, 1, o.degree_bound(),
                [base, a, dir, F](const Vec& t) {
                  Vec y(a.size());
                  for (size_t i = 0; i < y.size(); ++i) y[i] = F.add(a[i], F.mul(t[0], dir[i]));
                  return base(y);
                },
                o.counter());
}

Oracle combine_oracles(const Oracle& o1, Fe c1, const Oracle& o2, Fe c2) {
  if (o1.num_vars() != o2.num_vars()) throw InvalidArgument("combine_oracles: variable count mismatch");
  Field F = o1.field();
  Oracle a = o1, b = o2;
  return Oracle(F, o1.num_vars(), std::max(o1.degree_bound(), o2.degree_bound()),
                [a, b, c1, c2, F](const Vec& x) { return F.add(F.mul(c1, a(x)), F.mul(c2, b(x))); }, o1.counter());
}

size_t pit_trials(const Field& F, unsigned degree, unsigned error_exponent) {
  if (degree == 0) return 1;
  if (F.p() <= degree) throw FieldTooSmall("PIT needs a field larger than the degree bound");
  double bits = std::log2(static_cast<double>(F.p()) / static_cast<double>(degree));
  return std::max<size_t>(1, static_cast<size_t>(std::ceil(error_exponent / bits)));
}

PitResult pit_equal(const Oracle& o1, const Oracle& o2, unsigned error_exponent, Rng& rng) {
  if (o1.num_vars() != o2.num_vars()) throw InvalidArgument("pit_equal: variable count mismatch");
  const Field& F = o1.field();
  unsigned d = std::max(o1.degree_bound(), o2.degree_bound());
  PitResult res;
  size_t trials = pit_trials(F, d, error_exponent);
  for (size_t t = 0; t < trials; ++t) {
    Vec x = F.random_vector(o1.num_vars(), rng);
    ++res.trials;
    if (o1(x) != o2(x)) {
      res.equal = false;
      res.witness = x;
      return res;
    }
  }
  return res;
}

bool pit_is_zero(const Oracle& o, unsigned error_exponent, Rng& rng) {
  const Field& F = o.field();
  size_t trials = pit_trials(F, o.degree_bound(), error_exponent);
  for (size_t t = 0; t < trials; ++t)
    if (o(F.random_vector(o.num_vars(), rng)) != 0) return false;
  return true;
}

}  // namespace d3r
