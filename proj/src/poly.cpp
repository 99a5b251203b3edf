#include "d3r/poly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "d3r/oracle.hpp"

namespace d3r {

// ---------------------------------------------------------------- LinearForm

LinearForm LinearForm::variable(size_t n, size_t i) {
  LinearForm l(Vec(n, 0), 0);
  l.coeffs[i] = 1;
  return l;
}

LinearForm LinearForm::constant_form(size_t n, Fe c) { return LinearForm(Vec(n, 0), c); }

bool LinearForm::is_zero() const {
  return constant == 0 && std::all_of(coeffs.begin(), coeffs.end(), [](Fe c) { return c == 0; });
}

bool LinearForm::is_constant() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](Fe c) { return c == 0; });
}

std::vector<size_t> LinearForm::support() const {
  std::vector<size_t> s;
  for (size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i]) s.push_back(i);
  return s;
}

Fe LinearForm::evaluate(const Field& F, const Vec& x) const {
  Fe s = constant;
  for (size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i]) s = F.add(s, F.mul(coeffs[i], x[i]));
  return s;
}

Fe LinearForm::linear_part(const Field& F, const Vec& u) const {
  Fe s = 0;
  for (size_t i = 0; i < coeffs.size(); ++i)
    if (coeffs[i]) s = F.add(s, F.mul(coeffs[i], u[i]));
  return s;
}

LinearForm LinearForm::scaled(const Field& F, Fe c) const {
  LinearForm r = *this;
  for (auto& v : r.coeffs) v = F.mul(v, c);
  r.constant = F.mul(r.constant, c);
  return r;
}

Vec LinearForm::as_vector() const {
  Vec v = coeffs;
  v.push_back(constant);
  return v;
}

LinearForm LinearForm::from_vector(const Vec& v) {
  LinearForm l;
  l.coeffs.assign(v.begin(), v.end() - 1);
  l.constant = v.back();
  return l;
}

LinearForm LinearForm::canonical(const Field& F, Fe* scale_out) const {
  Fe lead = 0;
  for (Fe c : coeffs)
    if (c) {
      lead = c;
      break;
    }
  if (lead == 0) lead = constant;
  if (lead == 0) {
    if (scale_out) *scale_out = 0;
    return *this;
  }
  if (scale_out) *scale_out = lead;
  return scaled(F, F.inv(lead));
}

bool proportional(const Field& F, const LinearForm& a, const LinearForm& b) {
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  return a.canonical(F) == b.canonical(F);
}

// ---------------------------------------------------------------- MultiPoly

MultiPoly MultiPoly::constant(Field F, size_t n, Fe c) {
  MultiPoly p(F, n);
  p.add_term(Monomial(n, 0), c);
  return p;
}

MultiPoly MultiPoly::variable(Field F, size_t n, size_t i) {
  MultiPoly p(F, n);
  Monomial m(n, 0);
  m[i] = 1;
  p.add_term(m, 1);
  return p;
}

MultiPoly MultiPoly::from_form(const Field& F, const LinearForm& l) {
  size_t n = l.num_vars();
  MultiPoly p(F, n);
  for (size_t i = 0; i < n; ++i) {
    if (!l.coeffs[i]) continue;
    Monomial m(n, 0);
    m[i] = 1;
    p.add_term(m, l.coeffs[i]);
  }
  p.add_term(Monomial(n, 0), l.constant);
  return p;
}

bool MultiPoly::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const auto& m = terms_.begin()->first;
  return std::all_of(m.begin(), m.end(), [](auto e) { return e == 0; });
}

Fe MultiPoly::constant_term() const { return coeff(Monomial(n_, 0)); }

int MultiPoly::degree() const {
  int d = -1;
  for (const auto& [m, c] : terms_) d = std::max(d, static_cast<int>(std::accumulate(m.begin(), m.end(), 0)));
  return d;
}

bool MultiPoly::is_multilinear() const {
  for (const auto& [m, c] : terms_)
    for (auto e : m)
      if (e > 1) return false;
  return true;
}

std::vector<size_t> MultiPoly::support_vars() const {
  std::vector<bool> used(n_, false);
  for (const auto& [m, c] : terms_)
    for (size_t i = 0; i < n_; ++i)
      if (m[i]) used[i] = true;
  std::vector<size_t> s;
  for (size_t i = 0; i < n_; ++i)
    if (used[i]) s.push_back(i);
  return s;
}

void MultiPoly::add_term(const Monomial& m, Fe c) {
  if (c == 0) return;
  if (m.size() != n_) throw InvalidArgument("monomial length does not match num_vars");
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
    return;
  }
  it->second = F_.add(it->second, c);
  if (it->second == 0) terms_.erase(it);
}

Fe MultiPoly::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0 : it->second;
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
  MultiPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const {
  MultiPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, F_.neg(c));
  return r;
}

MultiPoly MultiPoly::operator-() const { return scaled(F_.neg(1)); }

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
  if (n_ != o.n_) throw InvalidArgument("multiplying polynomials over different variable counts");
  MultiPoly r(F_, n_);
  Monomial m(n_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) {
      for (size_t i = 0; i < n_; ++i) m[i] = static_cast<std::uint16_t>(ma[i] + mb[i]);
      r.add_term(m, F_.mul(ca, cb));
    }
  return r;
}

MultiPoly MultiPoly::scaled(Fe c) const {
  MultiPoly r(F_, n_);
  if (c == 0) return r;
  r.terms_ = terms_;
  for (auto& [m, v] : r.terms_) v = F_.mul(v, c);
  return r;
}

MultiPoly MultiPoly::pow(unsigned e) const {
  MultiPoly r = constant(F_, n_, 1);
  MultiPoly b = *this;
  while (e) {
    if (e & 1) r = r * b;
    e >>= 1;
    if (e) b = b * b;
  }
  return r;
}

Fe MultiPoly::evaluate(const Vec& point) const {
  if (point.size() != n_) throw InvalidArgument("evaluation point has wrong length");
  Fe s = 0;
  for (const auto& [m, c] : terms_) {
    Fe t = c;
    for (size_t i = 0; i < n_ && t; ++i)
      if (m[i]) t = F_.mul(t, m[i] == 1 ? point[i] : F_.pow(point[i], m[i]));
    s = F_.add(s, t);
  }
  return s;
}

MultiPoly MultiPoly::restrict(const std::vector<bool>& keep, const Vec& a) const {
  if (keep.size() != n_ || a.size() != n_) throw InvalidArgument("restriction: length mismatch");
  MultiPoly r(F_, n_);
  for (const auto& [m, c] : terms_) {
    Fe t = c;
    Monomial mm = m;
    for (size_t i = 0; i < n_; ++i)
      if (!keep[i] && m[i]) {
        t = F_.mul(t, F_.pow(a[i], m[i]));
        mm[i] = 0;
      }
    r.add_term(mm, t);
  }
  return r;
}

MultiPoly MultiPoly::derivative(size_t var, unsigned e) const {
  MultiPoly r(F_, n_);
  for (const auto& [m, c] : terms_) {
    if (m[var] < e) continue;
    Fe t = c;
    for (unsigned k = 0; k < e; ++k) t = F_.mul(t, F_.from_int(m[var] - k));
    Monomial mm = m;
    mm[var] = static_cast<std::uint16_t>(mm[var] - e);
    r.add_term(mm, t);
  }
  return r;
}

MultiPoly MultiPoly::ml_derivative(const std::vector<size_t>& vars) const {
  MultiPoly r(F_, n_);
  for (const auto& [m, c] : terms_) {
    bool ok = true;
    for (size_t v : vars)
      if (m[v] == 0) {
        ok = false;
        break;
      }
    if (!ok) continue;
    Monomial mm = m;
    for (size_t v : vars) mm[v] = 0;
    r.add_term(mm, c);
  }
  return r;
}

MultiPoly MultiPoly::compose(const Matrix& A) const {
  if (A.rows() != n_ || A.cols() != n_) throw InvalidArgument("compose: matrix must be n×n");
  std::vector<MultiPoly> subs;
  for (size_t i = 0; i < n_; ++i) subs.push_back(from_form(F_, LinearForm(A.row(i), 0)));
  MultiPoly r(F_, n_);
  for (const auto& [m, c] : terms_) {
    MultiPoly t = constant(F_, n_, c);
    for (size_t i = 0; i < n_; ++i)
      if (m[i]) t = t * subs[i].pow(m[i]);
    r = r + t;
  }
  return r;
}

MultiPoly MultiPoly::divide_exact(const MultiPoly& d) const {
  if (d.is_zero()) throw InvalidArgument("division by the zero polynomial");
  MultiPoly q(F_, n_), rem = *this;
  const auto& [lm, lc] = *d.terms_.rbegin();
  Fe lc_inv = F_.inv(lc);
  while (!rem.is_zero()) {
    const auto& [rm, rc] = *rem.terms_.rbegin();
    Monomial qm(n_);
    for (size_t i = 0; i < n_; ++i) {
      if (rm[i] < lm[i]) throw InvalidArgument("divide_exact: divisor does not divide");
      qm[i] = static_cast<std::uint16_t>(rm[i] - lm[i]);
    }
    Fe qc = F_.mul(rc, lc_inv);
    MultiPoly t(F_, n_);
    t.add_term(qm, qc);
    q.add_term(qm, qc);
    rem = rem - t * d;
  }
  return q;
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    os << F_.to_signed(it->second);
    for (size_t i = 0; i < n_; ++i) {
      if (!it->first[i]) continue;
      os << "*x" << (i + 1);
      if (it->first[i] > 1) os << "^" << it->first[i];
    }
  }
  return os.str();
}

MultiPoly directional_derivative(const MultiPoly& f, const Vec& u, unsigned order) {
  const Field& F = f.field();
  MultiPoly g = f;
  for (unsigned k = 0; k < order && !g.is_zero(); ++k) {
    MultiPoly next(F, f.num_vars());
    for (size_t i = 0; i < f.num_vars(); ++i)
      if (u[i]) next = next + g.derivative(i).scaled(u[i]);
    g = next;
  }
  return g;
}

// ---------------------------------------------------------------- interpolation

namespace {

// All exponent vectors of length m with total degree <= d, in lex order.
void enumerate_simplex(size_t m, unsigned d, std::vector<Monomial>& out) {
  Monomial e(m, 0);
  std::function<void(size_t, unsigned)> rec = [&](size_t i, unsigned left) {
    if (i == m) {
      out.push_back(e);
      return;
    }
    for (unsigned v = 0; v <= left; ++v) {
      e[i] = static_cast<std::uint16_t>(v);
      rec(i + 1, left - v);
    }
    e[i] = 0;
  };
  rec(0, d);
}

}  // namespace

MultiPoly interpolate_dense(const Oracle& o, size_t m, unsigned d) {
  const Field& F = o.field();
  size_t n = o.num_vars();
  if (m > n) throw InvalidArgument("interpolate_dense: m exceeds num_vars");
  if (F.p() <= d) throw FieldTooSmall("interpolate_dense: field must exceed the degree");
  std::vector<Monomial> nodes;
  enumerate_simplex(m, d, nodes);
  std::map<Monomial, Fe> val;
  Vec x(n, 0);
  for (const auto& e : nodes) {
    for (size_t i = 0; i < m; ++i) x[i] = e[i];
    val[e] = o(x);
  }
  std::vector<Fe> inv_int(d + 1, 0);
  for (unsigned j = 1; j <= d; ++j) inv_int[j] = F.inv(j);
  auto line_of = [&](const Monomial& start, size_t axis) {
    unsigned used = 0;
    for (size_t i = 0; i < m; ++i)
      if (i != axis) used += start[i];
    return d - used;
  };
  // Newton divided differences along each axis (nodes 0,1,2,...).
  for (size_t axis = 0; axis < m; ++axis) {
    for (const auto& start : nodes) {
      if (start[axis] != 0) continue;
      unsigned L = line_of(start, axis);
      std::vector<Fe*> line;
      Monomial e = start;
      for (unsigned t = 0; t <= L; ++t) {
        e[axis] = static_cast<std::uint16_t>(t);
        line.push_back(&val[e]);
      }
      for (unsigned j = 1; j <= L; ++j)
        for (unsigned t = L; t >= j; --t) *line[t] = F.mul(F.sub(*line[t], *line[t - 1]), inv_int[j]);
    }
  }
  // Newton basis ∏(x - 0)(x - 1)... back to monomials, axis by axis.
  for (size_t axis = 0; axis < m; ++axis) {
    for (const auto& start : nodes) {
      if (start[axis] != 0) continue;
      unsigned L = line_of(start, axis);
      std::vector<Fe*> line;
      Monomial e = start;
      for (unsigned t = 0; t <= L; ++t) {
        e[axis] = static_cast<std::uint16_t>(t);
        line.push_back(&val[e]);
      }
      // Horner: r = c_L; r = r·(x - j) + c_j.
      std::vector<Fe> r{*line[L]};
      for (unsigned j = L; j-- > 0;) {
        std::vector<Fe> next(r.size() + 1, 0);
        Fe fj = F.from_int(j);
        for (size_t k = 0; k < r.size(); ++k) {
          next[k + 1] = F.add(next[k + 1], r[k]);
          next[k] = F.sub(next[k], F.mul(r[k], fj));
        }
        next[0] = F.add(next[0], *line[j]);
        r = std::move(next);
      }
      for (unsigned t = 0; t <= L; ++t) *line[t] = r[t];
    }
  }
  MultiPoly p(F, n);
  for (const auto& [e, c] : val) {
    Monomial full(n, 0);
    for (size_t i = 0; i < m; ++i) full[i] = e[i];
    p.add_term(full, c);
  }
  return p;
}

MultiPoly interpolate_multilinear(const Oracle& o, const std::vector<size_t>& vars, unsigned d) {
  const Field& F = o.field();
  size_t n = o.num_vars();
  size_t k = vars.size();
  if (k > 63) throw InvalidArgument("interpolate_multilinear: too many variables");
  // Subsets of {0..k-1} of size <= d, as bitmasks.
  std::vector<std::uint64_t> masks;
  std::function<void(size_t, std::uint64_t, unsigned)> rec = [&](size_t i, std::uint64_t mask, unsigned used) {
    if (i == k) {
      masks.push_back(mask);
      return;
    }
    rec(i + 1, mask, used);
    if (used < d) rec(i + 1, mask | (std::uint64_t{1} << i), used + 1);
  };
  rec(0, 0, 0);
  std::unordered_map<std::uint64_t, Fe> val;
  val.reserve(masks.size() * 2);
  Vec x(n, 0);
  for (auto mask : masks) {
    std::fill(x.begin(), x.end(), 0);
    for (size_t i = 0; i < k; ++i)
      if (mask >> i & 1) x[vars[i]] = 1;
    val[mask] = o(x);
  }
  // Möbius inversion on the downward-closed family.
  for (size_t i = 0; i < k; ++i) {
    std::uint64_t bit = std::uint64_t{1} << i;
    for (auto mask : masks)
      if (mask & bit) val[mask] = F.sub(val[mask], val.at(mask ^ bit));
  }
  MultiPoly p(F, n);
  for (auto mask : masks) {
    Fe c = val[mask];
    if (!c) continue;
    Monomial m(n, 0);
    for (size_t i = 0; i < k; ++i)
      if (mask >> i & 1) m[vars[i]] = 1;
    p.add_term(m, c);
  }
  return p;
}

// ---------------------------------------------------------------- factoring

namespace {

struct MaskedTerm {
  std::vector<size_t> vars;
  Fe coeff;
};

std::vector<MaskedTerm> masked_terms(const MultiPoly& f) {
  std::vector<MaskedTerm> out;
  out.reserve(f.num_terms());
  for (const auto& [m, c] : f.terms()) {
    MaskedTerm t;
    t.coeff = c;
    for (size_t i = 0; i < m.size(); ++i)
      if (m[i]) t.vars.push_back(i);
    out.push_back(std::move(t));
  }
  return out;
}

// Union-find over variable indices.
struct Dsu {
  std::vector<size_t> parent;
  explicit Dsu(size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  size_t find(size_t x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  void unite(size_t a, size_t b) { parent[find(a)] = find(b); }
};

MultiPoly normalize_lex_least(const MultiPoly& f, Fe* lead) {
  Fe c = f.terms().begin()->second;
  if (lead) *lead = c;
  return f.scaled(f.field().inv(c));
}

}  // namespace

Factorization ml_factor(const MultiPoly& f, Rng& rng) {
  if (f.is_zero()) throw InvalidArgument("ml_factor: zero polynomial");
  if (!f.is_multilinear()) throw InvalidArgument("ml_factor: input is not multilinear");
  const Field& F = f.field();
  size_t n = f.num_vars();
  Factorization out;
  auto support = f.support_vars();
  if (support.empty()) {
    out.scalar = f.constant_term();
    return out;
  }
  auto terms = masked_terms(f);
  std::vector<int> pos(n, -1);
  for (size_t i = 0; i < support.size(); ++i) pos[support[i]] = static_cast<int>(i);

  for (unsigned attempt = 0; attempt < 8; ++attempt) {
    Dsu dsu(support.size());
    unsigned points = 2 + 2 * attempt;
    for (unsigned pt = 0; pt < points; ++pt) {
      Vec z = F.random_vector(n, rng);
      for (size_t a = 0; a < support.size(); ++a)
        for (size_t b = a + 1; b < support.size(); ++b) {
          if (dsu.find(a) == dsu.find(b)) continue;
          size_t i = support[a], j = support[b];
          // f = A + x_i B + x_j C + x_i x_j D; the pair interacts iff AD != BC.
          Fe A = 0, B = 0, C = 0, D = 0;
          for (const auto& t : terms) {
            Fe v = t.coeff;
            bool hi = false, hj = false;
            for (size_t x : t.vars) {
              if (x == i)
                hi = true;
              else if (x == j)
                hj = true;
              else
                v = F.mul(v, z[x]);
            }
            Fe& slot = hi ? (hj ? D : B) : (hj ? C : A);
            slot = F.add(slot, v);
          }
          if (F.mul(A, D) != F.mul(B, C)) dsu.unite(a, b);
        }
    }
    std::map<size_t, std::vector<size_t>> comps;
    for (size_t a = 0; a < support.size(); ++a) comps[dsu.find(a)].push_back(support[a]);

    Vec z;
    bool found = false;
    for (unsigned tries = 0; tries < 32 && !found; ++tries) {
      z = F.random_vector(n, rng);
      found = f.evaluate(z) != 0;
    }
    if (!found) throw Error("ml_factor: could not find a nonvanishing point");

    std::vector<MultiPoly> factors;
    for (const auto& [root, vars] : comps) {
      std::vector<bool> keep(n, false);
      for (size_t v : vars) keep[v] = true;
      factors.push_back(normalize_lex_least(f.restrict(keep, z), nullptr));
    }
    Monomial lead(n, 0);
    for (const auto& g : factors) {
      const auto& m = g.terms().begin()->first;
      for (size_t i = 0; i < n; ++i) lead[i] = static_cast<std::uint16_t>(lead[i] + m[i]);
    }
    Fe scalar = f.coeff(lead);
    if (scalar == 0) continue;
    MultiPoly prod = MultiPoly::constant(F, n, scalar);
    for (const auto& g : factors) prod = prod * g;
    if (prod != f) continue;
    std::sort(factors.begin(), factors.end(), [](const MultiPoly& a, const MultiPoly& b) {
      return a.support_vars() < b.support_vars();
    });
    out.scalar = scalar;
    out.factors = std::move(factors);
    return out;
  }
  throw Error("ml_factor: factorization did not verify");
}

LinearSplit strip_linear_factors(const MultiPoly& f, Rng& rng) {
  const Field& F = f.field();
  size_t n = f.num_vars();
  auto fac = ml_factor(f, rng);
  MultiPoly lin = MultiPoly::constant(F, n, 1);
  MultiPoly res = MultiPoly::constant(F, n, 1);
  bool any_linear = false;
  for (const auto& g : fac.factors) {
    if (g.degree() == 1) {
      lin = lin * g;
      any_linear = true;
    } else {
      res = res * g;
    }
  }
  if (any_linear)
    lin = lin.scaled(fac.scalar);
  else
    res = res.scaled(fac.scalar);
  return {lin, res};
}

}  // namespace d3r
