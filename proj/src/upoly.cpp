#include "d3r/upoly.hpp"

#include <algorithm>
#include <string>

#include "d3r/matrix.hpp"

namespace d3r {
namespace upoly {

void trim(UPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int degree(const UPoly& a) {
  for (size_t i = a.size(); i-- > 0;)
    if (a[i] != 0) return static_cast<int>(i);
  return -1;
}

UPoly add(const Field& F, const UPoly& a, const UPoly& b) {
  UPoly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] = F.add(r[i], b[i]);
  trim(r);
  return r;
}

UPoly sub(const Field& F, const UPoly& a, const UPoly& b) {
  UPoly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
  for (size_t i = 0; i < b.size(); ++i) r[i] = F.sub(r[i], b[i]);
  trim(r);
  return r;
}

UPoly mul(const Field& F, const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
  }
  trim(r);
  return r;
}

UPoly scale(const Field& F, const UPoly& a, Fe c) {
  UPoly r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = F.mul(a[i], c);
  trim(r);
  return r;
}

void divmod(const Field& F, const UPoly& a, const UPoly& b, UPoly& q, UPoly& r) {
  int db = degree(b);
  if (db < 0) throw InvalidArgument("polynomial division by zero");
  r = a;
  trim(r);
  int da = degree(r);
  if (da < db) {
    q.clear();
    return;
  }
  q.assign(da - db + 1, 0);
  Fe lead_inv = F.inv(b[db]);
  for (int i = da; i >= db; --i) {
    Fe c = r[i];
    if (c == 0) continue;
    Fe f = F.mul(c, lead_inv);
    q[i - db] = f;
    for (int j = 0; j <= db; ++j) r[i - db + j] = F.sub(r[i - db + j], F.mul(f, b[j]));
  }
  trim(q);
  trim(r);
}

UPoly mod(const Field& F, const UPoly& a, const UPoly& b) {
  UPoly q, r;
  divmod(F, a, b, q, r);
  return r;
}

UPoly monic(const Field& F, const UPoly& a) {
  int d = degree(a);
  if (d < 0) return {};
  return scale(F, a, F.inv(a[d]));
}

UPoly gcd(const Field& F, UPoly a, UPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    UPoly r = mod(F, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return monic(F, a);
}

UPoly powmod(const Field& F, const UPoly& base, std::uint64_t e, const UPoly& m) {
  UPoly result{1};
  result = mod(F, result, m);
  UPoly b = mod(F, base, m);
  while (e) {
    if (e & 1) result = mod(F, mul(F, result, b), m);
    b = mod(F, mul(F, b, b), m);
    e >>= 1;
  }
  return result;
}

Fe eval(const Field& F, const UPoly& a, Fe t) {
  Fe r = 0;
  for (size_t i = a.size(); i-- > 0;) r = F.add(F.mul(r, t), a[i]);
  return r;
}

UPoly derivative(const Field& F, const UPoly& a) {
  if (a.size() <= 1) return {};
  UPoly r(a.size() - 1);
  for (size_t i = 1; i < a.size(); ++i) r[i - 1] = F.mul(a[i], F.from_int(static_cast<std::int64_t>(i)));
  trim(r);
  return r;
}

UPoly interpolate(const Field& F, const std::vector<Fe>& xs, const std::vector<Fe>& ys) {
  if (xs.size() != ys.size()) throw InvalidArgument("interpolation: length mismatch");
  size_t n = xs.size();
  // Newton divided differences, then expansion into the monomial basis.
  std::vector<Fe> c = ys;
  for (size_t j = 1; j < n; ++j)
    for (size_t i = n - 1; i >= j; --i) {
      Fe den = F.sub(xs[i], xs[i - j]);
      if (den == 0) throw InvalidArgument("interpolation: repeated node");
      c[i] = F.div(F.sub(c[i], c[i - 1]), den);
    }
  UPoly r;
  for (size_t i = n; i-- > 0;) {
    // r = r·(t - xs[i]) + c[i]
    UPoly next(r.size() + 1, 0);
    for (size_t k = 0; k < r.size(); ++k) {
      next[k + 1] = F.add(next[k + 1], r[k]);
      next[k] = F.sub(next[k], F.mul(r[k], xs[i]));
    }
    next[0] = F.add(next[0], c[i]);
    r = std::move(next);
  }
  trim(r);
  return r;
}

namespace {

void split_roots(const Field& F, const UPoly& f, Rng& rng, std::vector<Fe>& out) {
  int d = degree(f);
  if (d <= 0) return;
  if (d == 1) {
    out.push_back(F.neg(F.div(f[0], f[1])));
    return;
  }
  // f is a product of distinct linear factors; split with a random shift.
  for (;;) {
    Fe delta = F.random(rng);
    UPoly base{delta, 1};
    UPoly h = powmod(F, base, (F.p() - 1) / 2, f);
    h = sub(F, h, UPoly{1});
    UPoly g = gcd(F, f, h);
    int dg = degree(g);
    if (dg > 0 && dg < d) {
      UPoly q, r;
      divmod(F, f, g, q, r);
      split_roots(F, g, rng, out);
      split_roots(F, q, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<Fe> roots(const Field& F, const UPoly& a_in, Rng& rng) {
  UPoly a = a_in;
  trim(a);
  if (a.empty()) throw InvalidArgument("roots of the zero polynomial");
  std::vector<Fe> out;
  if (degree(a) == 0) return out;
  if (F.p() <= 4096) {
    for (Fe t = 0; t < F.p(); ++t)
      if (eval(F, a, t) == 0) out.push_back(t);
    return out;
  }
  UPoly f = monic(F, a);
  if (f[0] == 0) {
    out.push_back(0);
    // Strip the factor t entirely.
    size_t z = 0;
    while (f[z] == 0) ++z;
    f.erase(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(z));
  }
  UPoly xp = powmod(F, UPoly{0, 1}, F.p(), f);
  UPoly g = gcd(F, f, sub(F, xp, UPoly{0, 1}));
  split_roots(F, g, rng, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace upoly

UPoly rs_decode(const Field& F, const std::vector<Fe>& points, const std::vector<Fe>& values,
                size_t degree_bound, size_t max_errors) {
  size_t n = points.size();
  if (values.size() != n) throw InvalidArgument("rs_decode: points/values length mismatch");
  if (n < degree_bound + 2 * max_errors + 1)
    throw InvalidArgument("rs_decode: need at least degree_bound + 2*max_errors + 1 samples, got " +
                          std::to_string(n));
  {
    std::vector<Fe> sorted = points;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw InvalidArgument("rs_decode: repeated sample point");
  }
  for (size_t e = max_errors + 1; e-- > 0;) {
    // Unknowns: Q (degree <= D+e) and the non-leading coefficients of the
    // monic error locator E (degree e).  Equation per sample: Q(x) - y·E(x) = 0.
    size_t nq = degree_bound + e + 1;
    Matrix m(F, n, nq + e);
    Vec rhs(n);
    for (size_t i = 0; i < n; ++i) {
      Fe x = points[i], y = values[i];
      Fe pw = 1;
      for (size_t j = 0; j < nq; ++j) {
        m.at(i, j) = pw;
        if (j < e) m.at(i, nq + j) = F.neg(F.mul(y, pw));
        if (j + 1 < nq || j < e) pw = F.mul(pw, x);
      }
      rhs[i] = F.mul(y, F.pow(x, e));
    }
    auto sol = solve(m, rhs);
    if (!sol) continue;
    UPoly Q(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(nq));
    UPoly E(sol->begin() + static_cast<std::ptrdiff_t>(nq), sol->end());
    E.push_back(1);
    upoly::trim(Q);
    UPoly P, R;
    upoly::divmod(F, Q, E, P, R);
    if (!R.empty() || upoly::degree(P) > static_cast<int>(degree_bound)) continue;
    size_t disagreements = 0;
    for (size_t i = 0; i < n; ++i)
      if (upoly::eval(F, P, points[i]) != values[i]) ++disagreements;
    if (disagreements <= max_errors) return P;
  }
  throw DecodeFailure("rs_decode: no codeword within " + std::to_string(max_errors) + " errors");
}

}  // namespace d3r
