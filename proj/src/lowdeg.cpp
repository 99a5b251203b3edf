#include "d3r/lowdeg.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "d3r/essential.hpp"
#include "d3r/semrank.hpp"
#include "d3r/upoly.hpp"

namespace d3r {

LowdegOptions LowdegOptions::wide() {
  LowdegOptions o;
  o.max_k = 3;
  o.max_d = 12;
  o.max_m = 24;
  return o;
}

LinearForm form_of(const MultiPoly& f) {
  if (f.degree() > 1) throw InvalidArgument("form_of: degree > 1");
  LinearForm l(Vec(f.num_vars(), 0), 0);
  for (const auto& [m, c] : f.terms()) {
    auto it = std::find(m.begin(), m.end(), std::uint16_t{1});
    if (it == m.end())
      l.constant = c;
    else
      l.coeffs[static_cast<size_t>(it - m.begin())] = c;
  }
  return l;
}

std::optional<ProductGate> as_product(const MultiPoly& f, Rng& rng) {
  if (f.is_zero() || !f.is_multilinear()) return std::nullopt;
  if (f.is_constant()) return ProductGate{f.constant_term(), {}};
  Factorization fz = ml_factor(f, rng);
  ProductGate g{fz.scalar, {}};
  for (const auto& fac : fz.factors) {
    if (fac.degree() > 1) return std::nullopt;
    g.forms.push_back(form_of(fac));
  }
  return g;
}

// ---- polynomial systems -----------------------------------------------------

namespace {

struct SystemSearch {
  const PolySystem& sys;
  std::vector<std::vector<const MultiPoly*>> checks;  // equations completed at each level
  std::vector<Fe> domain;
  Vec x;
  size_t nodes = 0;
  bool over_budget = false;
  bool infeasible = false;

  explicit SystemSearch(const PolySystem& s) : sys(s), checks(s.num_unknowns), x(s.num_unknowns, 0) {
    if (s.domain.empty()) {
      if (s.field.p() > (std::uint64_t{1} << 24)) throw InvalidArgument("solve_poly_system: field too large to enumerate");
      for (Fe v = 0; v < s.field.p(); ++v) domain.push_back(v);
    } else {
      domain = s.domain;
    }
    for (const auto& e : s.equations) {
      if (e.num_vars() != s.num_unknowns) throw InvalidArgument("solve_poly_system: equation arity mismatch");
      auto sup = e.support_vars();
      if (sup.empty()) {
        if (!e.is_zero()) infeasible = true;
        continue;
      }
      checks[sup.back()].push_back(&e);
    }
  }

  // Calls visit on each solution; visit returns false to stop.
  bool run(size_t i, const std::function<bool(const Vec&)>& visit) {
    if (i == sys.num_unknowns) return visit(x);
    for (Fe v : domain) {
      if (++nodes > sys.budget) {
        over_budget = true;
        return false;
      }
      x[i] = v;
      bool ok = true;
      for (const MultiPoly* e : checks[i])
        if (e->evaluate(x) != 0) {
          ok = false;
          break;
        }
      if (ok && !run(i + 1, visit)) return false;
    }
    return true;
  }
};

}  // namespace

SolveResult solve_poly_system(const PolySystem& sys) {
  SystemSearch s(sys);
  SolveResult out;
  if (s.infeasible) return out;
  bool found = false;
  s.run(0, [&](const Vec& x) {
    out.assignment = x;
    found = true;
    return false;
  });
  out.nodes = s.nodes;
  out.status = found ? SolveStatus::Solved : s.over_budget ? SolveStatus::BudgetExceeded : SolveStatus::NoSolution;
  return out;
}

std::vector<Vec> all_solutions(const PolySystem& sys, size_t limit) {
  SystemSearch s(sys);
  std::vector<Vec> out;
  if (s.infeasible) return out;
  s.run(0, [&](const Vec& x) {
    out.push_back(x);
    return out.size() < limit;
  });
  if (s.over_budget) throw BudgetExceeded("all_solutions: node budget exhausted");
  return out;
}

// ---- multilinear learner ----------------------------------------------------
//
// Every gate containing a variable u equals ρ·N with N = ∂_u(gate) and ρ an
// affine form avoiding the variables of N.  Partial gates N come from first
// derivatives of f that are products, or from recursively learned circuits for
// the other first derivatives.  Gates of degree <= 1 merge into one affine
// residual.  Once candidates are fixed, f = Σ ρ_c N_c + residual is linear in
// the unknown coefficients of the ρ_c and the residual.

namespace {

using Gates = std::vector<ProductGate>;

struct Family {
  ProductGate gate;  // N, exactly
  std::vector<bool> used;
  std::vector<Fe> values;  // N at the shared sample points
};

class MlLearner {
 public:
  MlLearner(const Field& F, size_t n, Rng& rng, const LowdegOptions& opt) : F_(F), n_(n), rng_(rng), opt_(opt) {}

  std::optional<Gates> learn(const MultiPoly& Q, size_t k, size_t depth) {
    auto key = std::make_pair(k, Q.terms());
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    auto res = learn_uncached(Q, k, depth);
    memo_.emplace(std::move(key), res);
    return res;
  }

  size_t solves() const { return solves_; }

 private:
  std::optional<Gates> learn_uncached(const MultiPoly& Q, size_t k, size_t depth) {
    if (Q.is_zero()) return Gates{};
    if (k == 0) return std::nullopt;
    if (auto g = as_product(Q, rng_)) return Gates{*g};
    if (k == 1) return std::nullopt;

    LinearSplit split = strip_linear_factors(Q, rng_);
    if (!split.lin.is_constant()) {
      auto lin = as_product(split.lin, rng_);
      auto sub = learn(split.residual, k, depth);
      if (!sub) return std::nullopt;
      for (auto& g : *sub) {
        g.scalar = F_.mul(g.scalar, lin->scalar);
        g.forms.insert(g.forms.end(), lin->forms.begin(), lin->forms.end());
      }
      return sub;
    }

    Context ctx(Q);
    std::vector<size_t> deferred;
    for (size_t u : ctx.support) {
      MultiPoly D = Q.derivative(u);
      if (D.is_zero() || D.is_constant()) continue;
      if (auto g = as_product(D, rng_))
        add_family(ctx, *g);
      else
        deferred.push_back(u);
    }
    for (size_t t = 1; t <= k; ++t)
      if (auto r = assemble(ctx, t, 0)) return r;

    // Slices x_v = t on which f becomes a single product: that product is a
    // gate with at most one form cut by the slice.
    size_t before_slices = ctx.fams.size();
    for (size_t v : ctx.support) {
      MultiPoly Q1 = Q.derivative(v);
      MultiPoly Q0 = Q - MultiPoly::variable(F_, n_, v) * Q1;
      for (Fe t : product_slices(ctx.support, v, Q0, Q1)) {
        auto g = as_product(Q0 + Q1.scaled(t), rng_);
        if (!g) continue;
        add_family(ctx, *g);
        for (size_t i = 0; i < g->forms.size(); ++i) {
          ProductGate h = *g;
          h.forms.erase(h.forms.begin() + static_cast<std::ptrdiff_t>(i));
          if (normalize_gate(F_, h).degree() >= 1) add_family(ctx, h);
        }
      }
    }
    if (ctx.fams.size() > before_slices)
      for (size_t t = 1; t <= k; ++t)
        if (auto r = assemble(ctx, t, before_slices)) return r;

    if (depth >= opt_.recursion_depth) return std::nullopt;
    // Smaller derivatives first: they recurse faster.
    std::vector<std::pair<size_t, size_t>> order;
    for (size_t u : deferred) order.push_back({Q.derivative(u).num_terms(), u});
    std::sort(order.begin(), order.end());
    for (auto [terms, u] : order) {
      (void)terms;
      auto sub = learn(Q.derivative(u), k, depth + 1);
      if (!sub) continue;
      size_t before = ctx.fams.size();
      for (const auto& g : *sub)
        if (normalize_gate(F_, g).degree() >= 1) add_family(ctx, g);
      if (ctx.fams.size() == before) continue;
      for (size_t t = 1; t <= k; ++t)
        if (auto r = assemble(ctx, t, before)) return r;
    }
    return std::nullopt;
  }

  // Candidate t with (Q0 + t·Q1) a product of affine forms.  Writing the slice
  // as A + x_i B + x_j C + x_i x_j D, a product needs (AD - BC)·D = 0 for every
  // pair i, j; at a random point this is a cubic in t.
  std::vector<Fe> product_slices(const std::vector<size_t>& support, size_t v, const MultiPoly& Q0,
                                 const MultiPoly& Q1) {
    std::vector<size_t> others;
    for (size_t w : support)
      if (w != v) others.push_back(w);
    if (others.size() < 2 || Q1.is_zero()) return {};
    std::optional<std::set<Fe>> cand;
    std::uniform_int_distribution<size_t> pick(0, others.size() - 1);
    size_t informative = 0;
    for (int attempt = 0; attempt < 12 && informative < 2; ++attempt) {
      size_t i = others[pick(rng_)], j = others[pick(rng_)];
      if (i == j) continue;
      Vec z = F_.random_vector(n_, rng_);
      auto corners = [&](const MultiPoly& P, Fe out[4]) {
        Fe val[2][2];
        for (Fe a = 0; a < 2; ++a)
          for (Fe b = 0; b < 2; ++b) {
            z[i] = a;
            z[j] = b;
            val[a][b] = P.evaluate(z);
          }
        out[0] = val[0][0];
        out[1] = F_.sub(val[1][0], val[0][0]);
        out[2] = F_.sub(val[0][1], val[0][0]);
        out[3] = F_.sub(F_.sub(val[1][1], val[1][0]), out[2]);
      };
      Fe c0[4], c1[4];
      corners(Q0, c0);
      corners(Q1, c1);
      UPoly A{c0[0], c1[0]}, B{c0[1], c1[1]}, C{c0[2], c1[2]}, D{c0[3], c1[3]};
      for (UPoly* u : {&A, &B, &C, &D}) upoly::trim(*u);
      UPoly E = upoly::mul(F_, upoly::sub(F_, upoly::mul(F_, A, D), upoly::mul(F_, B, C)), D);
      if (E.empty()) continue;
      ++informative;
      auto r = upoly::roots(F_, E, rng_);
      std::set<Fe> rs(r.begin(), r.end());
      if (!cand) {
        cand = rs;
      } else {
        std::set<Fe> both;
        for (Fe t : rs)
          if (cand->count(t)) both.insert(t);
        cand = both;
      }
    }
    if (!cand) return {};
    return {cand->begin(), cand->end()};
  }

  struct Context {
    const MultiPoly& Q;
    std::vector<size_t> support;
    std::vector<Family> fams;
    std::set<std::map<Monomial, Fe>> seen;
    std::vector<Vec> points;
    std::vector<Fe> q_values;
    explicit Context(const MultiPoly& q) : Q(q), support(q.support_vars()) {}
  };

  void add_family(Context& ctx, const ProductGate& g) {
    ProductGate gn = normalize_gate(F_, g);
    MultiPoly N = expand_gate(F_, n_, gn);
    // Scale-free key: ρ absorbs constants.
    Fe lead = N.terms().begin()->second;
    MultiPoly key = N.scaled(F_.inv(lead));
    if (!ctx.seen.insert(key.terms()).second) return;
    Family fam;
    fam.gate = gn;
    fam.used.assign(n_, false);
    for (const auto& l : gn.forms)
      for (size_t v : l.support()) fam.used[v] = true;
    ctx.fams.push_back(std::move(fam));
  }

  bool large_field() const { return F_.p() >= (std::uint64_t{1} << 20); }

  void ensure_points(Context& ctx, size_t count) {
    while (ctx.points.size() < count) {
      Vec x = F_.random_vector(n_, rng_);
      ctx.q_values.push_back(ctx.Q.evaluate(x));
      ctx.points.push_back(std::move(x));
    }
    for (auto& f : ctx.fams)
      while (f.values.size() < ctx.points.size()) f.values.push_back(eval_gate(F_, f.gate, ctx.points[f.values.size()]));
  }

  // Gate count exactly t, using combinations with at least one family index >= first_new.
  std::optional<Gates> assemble(Context& ctx, size_t t, size_t first_new) {
    size_t nf = ctx.fams.size();
    for (int with_res = 0; with_res <= 1; ++with_res) {
      size_t s = t - static_cast<size_t>(with_res);
      if (s == 0 || s > nf) continue;
      std::vector<size_t> idx(s);
      for (size_t i = 0; i < s; ++i) idx[i] = i;
      for (;;) {
        if (idx.back() >= first_new) {
          if (++solves_ > opt_.assembly_budget) throw BudgetExceeded("multilinear learner: assembly budget exhausted");
          if (auto r = solve_subset(ctx, idx, with_res != 0)) return r;
        }
        size_t i = s;
        while (i > 0 && idx[i - 1] == nf - s + i - 1) --i;
        if (i == 0) break;
        ++idx[i - 1];
        for (size_t j = i; j < s; ++j) idx[j] = idx[j - 1] + 1;
      }
    }
    return std::nullopt;
  }

  std::optional<Gates> solve_subset(Context& ctx, const std::vector<size_t>& idx, bool with_res) {
    std::vector<bool> in_v(n_, false);
    for (size_t v : ctx.support) in_v[v] = true;
    for (size_t c : idx)
      for (size_t v = 0; v < n_; ++v)
        if (ctx.fams[c].used[v]) in_v[v] = true;
    std::vector<size_t> V;
    for (size_t v = 0; v < n_; ++v)
      if (in_v[v]) V.push_back(v);

    // Column layout.
    struct Col {
      int fam;    // -1 for the residual
      int var;    // -1 for the constant
    };
    std::vector<Col> cols;
    for (size_t c : idx) {
      for (size_t v : V)
        if (!ctx.fams[c].used[v]) cols.push_back({static_cast<int>(c), static_cast<int>(v)});
      cols.push_back({static_cast<int>(c), -1});
    }
    if (with_res) {
      for (size_t v : V) cols.push_back({-1, static_cast<int>(v)});
      cols.push_back({-1, -1});
    }
    size_t U = cols.size();

    std::optional<Vec> sol;
    if (large_field()) {
      size_t P = U + 8;
      ensure_points(ctx, P);
      Matrix M(F_, P, U);
      Vec b(P);
      for (size_t i = 0; i < P; ++i) {
        const Vec& x = ctx.points[i];
        for (size_t j = 0; j < U; ++j) {
          Fe base = cols[j].fam < 0 ? 1 : ctx.fams[static_cast<size_t>(cols[j].fam)].values[i];
          M.at(i, j) = cols[j].var < 0 ? base : F_.mul(base, x[static_cast<size_t>(cols[j].var)]);
        }
        b[i] = ctx.q_values[i];
      }
      sol = solve(M, b);
    } else {
      // Exact coefficient matching.
      std::vector<MultiPoly> colpolys;
      std::map<size_t, MultiPoly> Ns;
      for (const auto& col : cols) {
        MultiPoly base = MultiPoly::constant(F_, n_, 1);
        if (col.fam >= 0) {
          auto f = static_cast<size_t>(col.fam);
          if (!Ns.count(f)) Ns.emplace(f, expand_gate(F_, n_, ctx.fams[f].gate));
          base = Ns.at(f);
        }
        if (col.var >= 0) base = base * MultiPoly::variable(F_, n_, static_cast<size_t>(col.var));
        colpolys.push_back(std::move(base));
      }
      std::map<Monomial, size_t> rows;
      for (const auto& [m, c] : ctx.Q.terms()) rows.emplace(m, rows.size());
      for (const auto& p : colpolys)
        for (const auto& [m, c] : p.terms()) rows.emplace(m, rows.size());
      Matrix M(F_, rows.size(), U);
      Vec b(rows.size(), 0);
      for (size_t j = 0; j < U; ++j)
        for (const auto& [m, c] : colpolys[j].terms()) M.at(rows.at(m), j) = c;
      for (const auto& [m, c] : ctx.Q.terms()) b[rows.at(m)] = c;
      sol = solve(M, b);
    }
    if (!sol) return std::nullopt;

    Gates out;
    size_t j = 0;
    for (size_t c : idx) {
      LinearForm rho(Vec(n_, 0), 0);
      for (; j < U && cols[j].fam == static_cast<int>(c); ++j) {
        if (cols[j].var < 0)
          rho.constant = (*sol)[j];
        else
          rho.coeffs[static_cast<size_t>(cols[j].var)] = (*sol)[j];
      }
      if (rho.is_zero()) continue;
      ProductGate g = ctx.fams[c].gate;
      g.forms.push_back(rho);
      out.push_back(normalize_gate(F_, g));
    }
    if (with_res) {
      LinearForm res(Vec(n_, 0), 0);
      for (; j < U; ++j) {
        if (cols[j].var < 0)
          res.constant = (*sol)[j];
        else
          res.coeffs[static_cast<size_t>(cols[j].var)] = (*sol)[j];
      }
      if (!res.is_zero()) out.push_back(normalize_gate(F_, ProductGate{1, {res}}));
    }
    MultiPoly sum(F_, n_);
    for (const auto& g : out) sum = sum + expand_gate(F_, n_, g);
    if (sum != ctx.Q) return std::nullopt;
    return out;
  }

  Field F_;
  size_t n_;
  Rng& rng_;
  LowdegOptions opt_;
  size_t solves_ = 0;
  std::map<std::pair<size_t, std::map<Monomial, Fe>>, std::optional<Gates>> memo_;
};

DepthThreeCircuit ml_circuit(const Field& F, size_t n, Gates gates) {
  DepthThreeCircuit C;
  C.field = F;
  C.num_vars = n;
  C.multilinear = true;
  for (auto& g : gates) {
    ProductGate gn = normalize_gate(F, g);
    if (gn.scalar != 0) C.gates.push_back(std::move(gn));
  }
  return C;
}

std::vector<size_t> all_vars(size_t n) {
  std::vector<size_t> v(n);
  for (size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

void check_against_oracle(const Oracle& o, const DepthThreeCircuit& C, unsigned e, Rng& rng) {
  if (!pit_equal(o, circuit_oracle(C), e, rng).equal)
    throw NotInClass("learned circuit disagrees with the oracle (degree or multilinearity promise violated)");
}

}  // namespace

DepthThreeCircuit learn_ml_explicit(const MultiPoly& f, size_t k, Rng& rng, const LowdegOptions& opt) {
  if (!f.is_multilinear()) throw NotInClass("polynomial is not multilinear");
  MlLearner L(f.field(), f.num_vars(), rng, opt);
  auto gates = L.learn(f, k, 0);
  if (!gates) throw NotInClass("no multilinear ΣΠΣ(" + std::to_string(k) + ") representation found");
  DepthThreeCircuit C = ml_circuit(f.field(), f.num_vars(), std::move(*gates));
  if (expand(C) != f) throw Error("learn_ml_explicit: internal verification failed");
  return C;
}

DepthThreeCircuit learn_ml_lowdeg(const Oracle& o, size_t k, unsigned d, Rng& rng, const LowdegOptions& opt) {
  if (k > opt.max_k || d > opt.max_d)
    throw BudgetExceeded("learn_ml_lowdeg: instance over the desk gate (k=" + std::to_string(k) +
                         ", d=" + std::to_string(d) + ")");
  MultiPoly f = interpolate_multilinear(o, all_vars(o.num_vars()), d);
  if (!f.is_zero()) {
    size_t m = sem_rank(f, rng);
    if (m > opt.max_m) throw BudgetExceeded("learn_ml_lowdeg: essential count " + std::to_string(m) + " over the desk gate");
  }
  DepthThreeCircuit C = learn_ml_explicit(f, k, rng, opt);
  check_against_oracle(o, C, opt.error_exponent, rng);
  return C;
}

DepthThreeCircuit learn_ml_lowrank_explicit(const MultiPoly& f, size_t k, size_t r, Rng& rng,
                                            const LowdegOptions& opt) {
  if (k > opt.max_k) throw BudgetExceeded("learn_ml_lowrank: k over the desk gate");
  if (f.is_zero()) return ml_circuit(f.field(), f.num_vars(), {});
  if (!f.is_multilinear()) throw NotInClass("polynomial is not multilinear");
  // Δ_sem <= Δ_syn, so a semantic rank above r breaks the promise.
  size_t m = sem_rank(f, rng);
  if (m > r) throw NotInClass("rank promise violated: semantic rank " + std::to_string(m) + " > " + std::to_string(r));
  if (m > opt.max_m) throw BudgetExceeded("learn_ml_lowrank: semantic rank over the desk gate");
  return learn_ml_explicit(f, k, rng, opt);
}

DepthThreeCircuit learn_ml_lowrank(const Oracle& o, size_t k, size_t r, Rng& rng, const LowdegOptions& opt) {
  MultiPoly f = interpolate_multilinear(o, all_vars(o.num_vars()), o.degree_bound());
  DepthThreeCircuit C = learn_ml_lowrank_explicit(f, k, r, rng, opt);
  check_against_oracle(o, C, opt.error_exponent, rng);
  return C;
}

DepthThreeCircuit learn_ml_low_semrank_explicit(const MultiPoly& f, size_t k, size_t r, Rng& rng,
                                                const LowdegOptions& opt) {
  if (f.is_zero()) return ml_circuit(f.field(), f.num_vars(), {});
  if (!f.is_multilinear()) throw NotInClass("polynomial is not multilinear");
  size_t m = sem_rank(f, rng);
  if (m > r) throw NotInClass("semantic rank promise violated: " + std::to_string(m) + " > " + std::to_string(r));
  // Δ_syn <= 2^7 k^2 log2 k · max(1, Δ_sem) for a minimal simple representation.
  long double lg = k >= 2 ? std::log2(static_cast<long double>(k)) : 1.0L;
  auto syn = static_cast<size_t>(std::ceil(128.0L * k * k * lg * std::max<size_t>(1, r)));
  return learn_ml_lowrank_explicit(f, k, std::max(syn, m), rng, opt);
}

DepthThreeCircuit learn_ml_low_semrank(const Oracle& o, size_t k, size_t r, Rng& rng, const LowdegOptions& opt) {
  MultiPoly f = interpolate_multilinear(o, all_vars(o.num_vars()), o.degree_bound());
  DepthThreeCircuit C = learn_ml_low_semrank_explicit(f, k, r, rng, opt);
  check_against_oracle(o, C, opt.error_exponent, rng);
  return C;
}

// ---- literal polynomial-system backend ---------------------------------------

namespace {

// Indices of a maximal linearly independent subset, scanning in order.
std::vector<size_t> independent_subset(const Field& F, const std::vector<MultiPoly>& polys) {
  std::map<Monomial, size_t> cols;
  for (const auto& p : polys)
    for (const auto& [m, c] : p.terms()) cols.emplace(m, cols.size());
  std::vector<size_t> keep;
  std::vector<Vec> rows;
  size_t r = 0;
  for (size_t i = 0; i < polys.size(); ++i) {
    Vec v(cols.size(), 0);
    for (const auto& [m, c] : polys[i].terms()) v[cols.at(m)] = c;
    rows.push_back(v);
    size_t nr = rank(Matrix::from_rows(F, rows, cols.size()));
    if (nr > r) {
      r = nr;
      keep.push_back(i);
    } else {
      rows.pop_back();
    }
  }
  return keep;
}

}  // namespace

DepthThreeCircuit learn_ml_system(const Oracle& o, size_t k, unsigned d, Rng& rng, const LowdegOptions& opt,
                                  SystemDiagnostics* diag) {
  const Field& F = o.field();
  size_t n = o.num_vars();
  if (F.p() > 97) throw InvalidArgument("learn_ml_system: tiny fields only");
  MultiPoly f = interpolate_multilinear(o, all_vars(n), d);
  if (f.is_zero()) return ml_circuit(F, n, {});
  EssentialReduction red = reduce_poly(f);
  size_t m = red.m;
  MultiPoly g = f.compose(red.A);
  for (size_t kk = 1; kk <= k; ++kk) {
    size_t U = kk * d * (m + 1);
    if (U > 16) throw BudgetExceeded("learn_ml_system: " + std::to_string(U) + " unknowns");
    size_t N = U + n;  // unknowns, then the variables of g
    auto unk = [&](size_t i, size_t j, size_t t) { return (i * d + j) * (m + 1) + t; };
    // Σ_i Π_j (Σ_t a_ijt y_t + a_ijm) - g(y), expanded in the joint ring.
    MultiPoly lhs(F, N);
    for (size_t i = 0; i < kk; ++i) {
      MultiPoly prod = MultiPoly::constant(F, N, 1);
      for (size_t j = 0; j < d; ++j) {
        MultiPoly form = MultiPoly::variable(F, N, unk(i, j, m));
        for (size_t t = 0; t < m; ++t)
          form = form + MultiPoly::variable(F, N, unk(i, j, t)) * MultiPoly::variable(F, N, U + t);
        prod = prod * form;
      }
      lhs = lhs + prod;
    }
    for (const auto& [mono, c] : g.terms()) {
      Monomial big(N, 0);
      for (size_t v = 0; v < n; ++v) big[U + v] = mono[v];
      lhs.add_term(big, F.neg(c));
    }
    // Group by the y-part.
    std::map<Monomial, MultiPoly> eqs;
    for (const auto& [mono, c] : lhs.terms()) {
      Monomial y(mono.begin() + static_cast<std::ptrdiff_t>(U), mono.end());
      Monomial a(mono.begin(), mono.begin() + static_cast<std::ptrdiff_t>(U));
      auto it = eqs.try_emplace(y, F, U).first;
      it->second.add_term(a, c);
    }
    PolySystem sys{F, U, {}, {}, opt.assembly_budget * 50};
    for (auto& [y, e] : eqs)
      if (!e.is_zero()) sys.equations.push_back(e);
    // Lifted x-coefficient of form (i, j) at variable v is Σ_t a_ijt A_inv[t][v];
    // forms of one gate must not share a variable.
    std::vector<MultiPoly> lifting;
    for (size_t i = 0; i < kk; ++i)
      for (size_t v = 0; v < n; ++v) {
        std::vector<MultiPoly> cv;
        for (size_t j = 0; j < d; ++j) {
          MultiPoly c(F, U);
          for (size_t t = 0; t < m; ++t) {
            Fe w = red.A_inv.at(t, v);
            if (w != 0) c = c + MultiPoly::variable(F, U, unk(i, j, t)).scaled(w);
          }
          cv.push_back(std::move(c));
        }
        for (size_t j = 0; j < d; ++j)
          for (size_t j2 = j + 1; j2 < d; ++j2) {
            MultiPoly q = cv[j] * cv[j2];
            if (!q.is_zero()) lifting.push_back(std::move(q));
          }
      }
    auto basis = independent_subset(F, lifting);
    if (diag) {
      diag->unknowns = U;
      diag->lifting_constraints = lifting.size();
      diag->lifting_basis = basis.size();
      // Rank of all constraints at once must equal the size of the kept subset.
      std::map<Monomial, size_t> cols;
      for (const auto& q : lifting)
        for (const auto& [mono, c] : q.terms()) cols.emplace(mono, cols.size());
      Matrix M(F, lifting.size(), cols.size());
      for (size_t r = 0; r < lifting.size(); ++r)
        for (const auto& [mono, c] : lifting[r].terms()) M.at(r, cols.at(mono)) = c;
      diag->basis_spans_all = lifting.empty() ? basis.empty() : rank(M) == basis.size();
    }
    for (size_t b : basis) sys.equations.push_back(lifting[b]);
    SolveResult res = solve_poly_system(sys);
    if (diag) diag->nodes += res.nodes;
    if (res.status == SolveStatus::BudgetExceeded) throw BudgetExceeded("learn_ml_system: search budget exhausted");
    if (res.status == SolveStatus::NoSolution) continue;
    std::vector<ProductGate> gates;
    for (size_t i = 0; i < kk; ++i) {
      ProductGate pg{1, {}};
      for (size_t j = 0; j < d; ++j) {
        LinearForm l(Vec(n, 0), res.assignment[unk(i, j, m)]);
        for (size_t v = 0; v < n; ++v)
          for (size_t t = 0; t < m; ++t)
            l.coeffs[v] = F.add(l.coeffs[v], F.mul(res.assignment[unk(i, j, t)], red.A_inv.at(t, v)));
        pg.forms.push_back(l);
      }
      gates.push_back(pg);
    }
    DepthThreeCircuit C = ml_circuit(F, n, gates);
    check_against_oracle(o, C, opt.error_exponent, rng);
    return C;
  }
  throw NotInClass("no multilinear ΣΠΣ(" + std::to_string(k) + ") solution of the polynomial system");
}

}  // namespace d3r
