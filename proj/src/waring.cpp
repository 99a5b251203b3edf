#include "d3r/waring.hpp"

#include <algorithm>
#include <map>

#include "d3r/essential.hpp"

namespace d3r {

Vec moment_point(const Field& F, Fe alpha, size_t n) {
  Vec v(n);
  Fe pw = 1;
  for (size_t i = 0; i < n; ++i) {
    pw = F.mul(pw, alpha);
    v[i] = pw;
  }
  return v;
}

namespace {

Fe binomial(const Field& F, unsigned n, unsigned k) {
  Fe num = 1, den = 1;
  for (unsigned i = 0; i < k; ++i) {
    num = F.mul(num, F.from_int(n - i));
    den = F.mul(den, F.from_int(i + 1));
  }
  return F.div(num, den);
}

PowerCircuit empty_power(const Field& F, size_t n, unsigned d) {
  PowerCircuit P;
  P.field = F;
  P.num_vars = n;
  P.degree = d;
  return P;
}

// Tries one kernel vector q of the catalecticant: its roots must be r distinct
// elements of F_p and the moments must then be explained exactly.
std::optional<std::vector<BinaryTerm>> terms_from_kernel(const Field& F, const Vec& h, const Vec& q, size_t r,
                                                         Rng& rng) {
  UPoly Q(q.begin(), q.end());
  upoly::trim(Q);
  if (upoly::degree(Q) != static_cast<int>(r)) return std::nullopt;
  std::vector<Fe> taus = upoly::roots(F, Q, rng);
  if (taus.size() != r) return std::nullopt;
  Matrix V(F, h.size(), r);
  for (size_t i = 0; i < r; ++i) {
    Fe pw = 1;
    for (size_t j = 0; j < h.size(); ++j) {
      V.at(j, i) = pw;
      pw = F.mul(pw, taus[i]);
    }
  }
  auto mu = solve(V, h);
  if (!mu) return std::nullopt;
  std::vector<BinaryTerm> out;
  for (size_t i = 0; i < r; ++i) {
    if ((*mu)[i] == 0) return std::nullopt;
    out.push_back({(*mu)[i], taus[i]});
  }
  return out;
}

LinearForm lift_form(const Field& F, const Vec& v, const Vec& a) {
  // v·x + (1 - v·a): the normalized form equal to 1 at the anchor.
  Fe va = 0;
  for (size_t i = 0; i < v.size(); ++i) va = F.add(va, F.mul(v[i], a[i]));
  return LinearForm(v, F.sub(1, va));
}

std::optional<PowerCircuit> line_method(const MultiPoly& G, unsigned d, size_t k, Rng& rng) {
  const Field& F = G.field();
  size_t m = G.num_vars();
  Vec a = F.random_vector(m, rng);
  Matrix Bt = Matrix(F, m, m);
  for (size_t j = 0; j < m; ++j)
    for (size_t i = 0; i < m; ++i) Bt.at(j, i) = F.random(rng);
  if (rank(Bt) != m) return std::nullopt;
  std::vector<Fe> ts(d + 1);
  for (unsigned t = 0; t <= d; ++t) ts[t] = t;
  std::vector<BinaryDecomposition> lines;
  for (size_t j = 0; j < m; ++j) {
    std::vector<Fe> ys(d + 1);
    for (unsigned t = 0; t <= d; ++t) {
      Vec x(m);
      for (size_t i = 0; i < m; ++i) x[i] = F.add(a[i], F.mul(ts[t], Bt.at(j, i)));
      ys[t] = G.evaluate(x);
    }
    auto dec = decompose_univariate(F, upoly::interpolate(F, ts, ys), d, k, rng);
    if (!dec) return std::nullopt;
    if (m > 1 && !dec->unique) return std::nullopt;
    lines.push_back(*dec);
  }
  // Match terms across lines by μ_i = c_i ℓ_i(a)^d, which does not depend on the direction.
  size_t r = lines[0].terms.size();
  std::vector<Vec> tau(r, Vec(m));
  for (size_t i = 0; i < r; ++i) {
    Fe mu = lines[0].terms[i].mu;
    for (size_t j = 0; j < m; ++j) {
      if (lines[j].terms.size() != r) return std::nullopt;
      size_t hits = 0;
      for (const auto& t : lines[j].terms)
        if (t.mu == mu) {
          tau[i][j] = t.tau;
          ++hits;
        }
      if (hits != 1) return std::nullopt;
    }
  }
  PowerCircuit P = empty_power(F, m, d);
  for (size_t i = 0; i < r; ++i) {
    auto v = solve(Bt, tau[i]);
    if (!v) return std::nullopt;
    P.terms.push_back({lines[0].terms[i].mu, lift_form(F, *v, a)});
  }
  if (expand(P) != G) return std::nullopt;
  return minimalize_power(P);
}

std::vector<Fe> search_values(const Field& F) {
  if (F.p() <= 11) {
    std::vector<Fe> all(F.p());
    for (Fe i = 0; i < F.p(); ++i) all[i] = i;
    return all;
  }
  return {0, 1, F.neg(1), 2, F.neg(2)};
}

}  // namespace

std::optional<BinaryDecomposition> decompose_univariate(const Field& F, const UPoly& u_in, unsigned d, size_t r_max,
                                                        Rng& rng) {
  UPoly u = u_in;
  upoly::trim(u);
  if (upoly::degree(u) > static_cast<int>(d)) throw InvalidArgument("decompose_univariate: degree exceeds d");
  if (F.p() <= d) throw FieldTooSmall("decompose_univariate needs p > d");
  if (u.empty()) return BinaryDecomposition{{}, true};
  Vec h(d + 1, 0);
  for (size_t j = 0; j < u.size(); ++j) h[j] = F.div(u[j], binomial(F, d, static_cast<unsigned>(j)));
  for (size_t r = 1; r <= std::min<size_t>(r_max, d + 1); ++r) {
    size_t rows = d + 1 - r;
    Matrix H(F, rows, r + 1);
    for (size_t i = 0; i < rows; ++i)
      for (size_t j = 0; j <= r; ++j) H.at(i, j) = h[i + j];
    auto ker = rows == 0 ? std::vector<Vec>{} : kernel_basis(H);
    if (rows == 0)
      for (size_t j = 0; j <= r; ++j) {
        Vec e(r + 1, 0);
        e[j] = 1;
        ker.push_back(e);
      }
    if (ker.empty()) continue;
    bool unique = ker.size() == 1;
    size_t attempts = unique ? 1 : 24;
    for (size_t t = 0; t < attempts; ++t) {
      Vec q(r + 1, 0);
      if (unique) {
        q = ker[0];
      } else {
        for (const auto& kv : ker) {
          Fe c = F.random(rng);
          for (size_t j = 0; j <= r; ++j) q[j] = F.add(q[j], F.mul(c, kv[j]));
        }
      }
      auto terms = terms_from_kernel(F, h, q, r, rng);
      if (terms) return BinaryDecomposition{*terms, unique};
    }
  }
  return std::nullopt;
}

std::optional<PowerCircuit> enumerate_waring(const MultiPoly& G, unsigned d, size_t r_max,
                                             const std::vector<Fe>& values, size_t budget) {
  const Field& F = G.field();
  size_t m = G.num_vars();
  if (G.is_zero()) return empty_power(F, m, d);
  // Normalized coordinate vectors (coeffs..., constant): first nonzero entry is 1.
  std::vector<LinearForm> cands;
  for (size_t lead = 0; lead <= m; ++lead) {
    size_t free = m - lead;
    std::vector<size_t> idx(free, 0);
    for (;;) {
      Vec v(m + 1, 0);
      v[lead] = 1;
      for (size_t i = 0; i < free; ++i) v[lead + 1 + i] = values[idx[i]];
      cands.push_back(LinearForm::from_vector(v));
      size_t pos = 0;
      while (pos < free && ++idx[pos] == values.size()) idx[pos++] = 0;
      if (pos == free) break;
    }
  }
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  std::map<Monomial, size_t> index;
  std::vector<MultiPoly> powers;
  for (const auto& l : cands) {
    powers.push_back(MultiPoly::from_form(F, l).pow(d));
    for (const auto& [mon, c] : powers.back().terms()) index.emplace(mon, 0);
  }
  for (const auto& [mon, c] : G.terms()) index.emplace(mon, 0);
  size_t rows = 0;
  for (auto& [mon, i] : index) i = rows++;
  Vec g(rows, 0);
  for (const auto& [mon, c] : G.terms()) g[index[mon]] = c;
  size_t spent = 0;
  for (size_t r = 1; r <= std::min(r_max, cands.size()); ++r) {
    std::vector<size_t> pick(r);
    for (size_t i = 0; i < r; ++i) pick[i] = i;
    for (;;) {
      if (++spent > budget) throw BudgetExceeded("enumerate_waring: candidate budget exhausted");
      Matrix M(F, rows, r);
      for (size_t i = 0; i < r; ++i)
        for (const auto& [mon, c] : powers[pick[i]].terms()) M.at(index[mon], i) = c;
      auto c = solve(M, g);
      if (c && std::none_of(c->begin(), c->end(), [](Fe x) { return x == 0; })) {
        PowerCircuit P = empty_power(F, m, d);
        for (size_t i = 0; i < r; ++i) P.terms.push_back({(*c)[i], cands[pick[i]]});
        return P;
      }
      // Next r-combination in lexicographic order.
      size_t i = r;
      while (i > 0 && pick[i - 1] == cands.size() - r + (i - 1)) --i;
      if (i == 0) break;
      ++pick[i - 1];
      for (size_t j = i; j < r; ++j) pick[j] = pick[j - 1] + 1;
    }
  }
  return std::nullopt;
}

PowerCircuit decompose_explicit(const MultiPoly& G, unsigned d, size_t k, Rng& rng, const WaringOptions& opt,
                                bool* used_fallback) {
  const Field& F = G.field();
  size_t m = G.num_vars();
  if (used_fallback) *used_fallback = false;
  if (G.is_zero()) return empty_power(F, m, d);
  if (k == 0) throw NotInClass("nonzero polynomial with k = 0");
  if (G.degree() > static_cast<int>(d)) throw NotInClass("polynomial degree exceeds the power");
  if (G.is_constant()) {
    PowerCircuit P = empty_power(F, m, d);
    P.terms.push_back({G.constant_term(), LinearForm::constant_form(m, 1)});
    return P;
  }
  for (size_t t = 0; t < opt.retries; ++t) {
    auto P = line_method(G, d, k, rng);
    if (P && P->terms.size() <= k) return *P;
  }
  if (used_fallback) *used_fallback = true;
  auto P = enumerate_waring(G, d, k, search_values(F), opt.fallback_budget);
  if (!P) throw NotInClass("no sum of at most " + std::to_string(k) + " powers of affine forms found");
  return *P;
}

PowerCircuit learn_sumpow_lowdeg(const Oracle& o, size_t k, Rng& rng, const WaringOptions& opt,
                                 WaringDiagnostics* diag) {
  const Field& F = o.field();
  size_t n = o.num_vars();
  unsigned d = o.degree_bound();
  if (pit_is_zero(o, opt.error_exponent, rng)) return empty_power(F, n, d);
  std::string last_error = "verification failed";
  for (size_t attempt = 0; attempt < 3; ++attempt) {
    EssentialReduction red = reduce(o, rng);
    if (red.m > k) throw NotInClass("more essential variables than terms");
    MultiPoly G = interpolate_dense(reduced_oracle(o, red), red.m, d);
    bool fb = false;
    PowerCircuit small;
    try {
      small = decompose_explicit(G, d, k, rng, opt, &fb);
    } catch (const NotInClass& e) {
      last_error = e.what();
      continue;
    }
    if (diag) diag->used_fallback = diag->used_fallback || fb;
    // ℓ(y) = λ((A⁻¹ y)_{1..m}).
    PowerCircuit P = empty_power(F, n, d);
    for (const auto& t : small.terms) {
      Vec w(n, 0);
      for (size_t i = 0; i < red.m; ++i)
        for (size_t j = 0; j < n; ++j) w[j] = F.add(w[j], F.mul(t.form.coeffs[i], red.A_inv.at(i, j)));
      P.terms.push_back({t.c, LinearForm(w, t.form.constant)});
    }
    P = minimalize_power(P);
    if (pit_equal(circuit_oracle(P), o, opt.error_exponent, rng).equal) return P;
  }
  throw NotInClass("low-degree Waring learner: " + last_error);
}

PowerCircuit reconstruct_sumpowsum(const Oracle& o, size_t k, Rng& rng, const WaringOptions& opt,
                                   WaringDiagnostics* diag) {
  const Field& F = o.field();
  size_t n = o.num_vars();
  unsigned d = o.degree_bound();
  auto start = o.queries();
  if (F.p() <= static_cast<std::uint64_t>(k) * n + 1) throw FieldTooSmall("need |F| > kn + 1");
  if (F.p() <= d) throw FieldTooSmall("need p > d");
  WaringDiagnostics local;
  WaringDiagnostics& dg = diag ? *diag : local;
  dg = WaringDiagnostics{};
  unsigned D = static_cast<unsigned>(2 * k + 1);
  if (d <= D) {
    PowerCircuit P = learn_sumpow_lowdeg(o, k, rng, opt, &dg);
    dg.best_L = P.terms.size();
    dg.queries = o.queries() - start;
    return P;
  }
  unsigned e = d - D;
  Fe falling = 1;
  for (unsigned i = D + 1; i <= d; ++i) falling = F.mul(falling, i);
  PowerCircuit best;
  Vec best_u;
  bool have = false;
  for (Fe alpha = 1; alpha <= static_cast<Fe>(k * n + 1); ++alpha) {
    Vec u = moment_point(F, alpha, n);
    Oracle g = directional_derivative_oracle(o, u, e);
    PowerCircuit P = learn_sumpow_lowdeg(g, k, rng, opt, &dg);
    ++dg.alphas_tried;
    if (!have || P.terms.size() > best.terms.size()) {
      best = P;
      best_u = u;
      dg.alpha = alpha;
      have = true;
    }
    if (opt.early_exit && best.terms.size() == k) break;
  }
  // c_i = c'_i / (d(d-1)⋯(D+1) · L_i(p_α)^e) with L_i the homogeneous part.
  PowerCircuit out = empty_power(F, n, d);
  for (const auto& t : best.terms) {
    Fe lu = t.form.linear_part(F, best_u);
    if (lu == 0) continue;
    out.terms.push_back({F.div(t.c, F.mul(falling, F.pow(lu, e))), t.form});
  }
  // Powers of constant forms are invisible to every derivative; recover them
  // as a constant residual.
  Oracle lifted = circuit_oracle(out);
  Vec x0 = F.random_vector(n, rng);
  Fe c0 = F.sub(o(x0), lifted(x0));
  Oracle residual = combine_oracles(o, 1, lifted, F.neg(1));
  Oracle constant = Oracle::base(F, n, 0, [c0](const Vec&) { return c0; });
  if (!pit_equal(residual.with_degree_bound(d), constant, opt.error_exponent, rng).equal)
    throw NotInClass("lifted circuit does not match the oracle");
  if (c0 != 0) out.terms.push_back({c0, LinearForm::constant_form(n, 1)});
  out = minimalize_power(out);
  if (out.terms.size() > k) throw NotInClass("more than k terms needed");
  if (!pit_equal(circuit_oracle(out), o, opt.error_exponent, rng).equal)
    throw NotInClass("final identity test failed");
  dg.best_L = best.terms.size();
  dg.queries = o.queries() - start;
  return out;
}

}  // namespace d3r
