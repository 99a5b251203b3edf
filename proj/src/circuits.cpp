#include "d3r/circuits.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>

namespace d3r {

unsigned ProductGate::degree() const {
  unsigned d = 0;
  for (const auto& l : forms)
    if (!l.is_constant()) ++d;
  return d;
}

unsigned DepthThreeCircuit::degree() const {
  unsigned d = 0;
  for (const auto& g : gates) d = std::max(d, g.degree());
  return d;
}

Fe eval_gate(const Field& F, const ProductGate& g, const Vec& x) {
  Fe v = g.scalar;
  for (const auto& l : g.forms) {
    if (v == 0) break;
    v = F.mul(v, l.evaluate(F, x));
  }
  return v;
}

MultiPoly expand_gate(const Field& F, size_t n, const ProductGate& g) {
  MultiPoly p = MultiPoly::constant(F, n, g.scalar);
  for (const auto& l : g.forms) p = p * MultiPoly::from_form(F, l);
  return p;
}

MultiPoly expand(const DepthThreeCircuit& C) {
  MultiPoly f(C.field, C.num_vars);
  for (const auto& g : C.gates) f = f + expand_gate(C.field, C.num_vars, g);
  return f;
}

MultiPoly expand(const PowerCircuit& P) {
  MultiPoly f(P.field, P.num_vars);
  for (const auto& t : P.terms) f = f + MultiPoly::from_form(P.field, t.form).pow(P.degree).scaled(t.c);
  return f;
}

Oracle circuit_oracle(const DepthThreeCircuit& C) {
  auto shared = std::make_shared<const DepthThreeCircuit>(C);
  return Oracle::base(C.field, C.num_vars, C.degree(), [shared](const Vec& x) {
    const Field& F = shared->field;
    Fe s = 0;
    for (const auto& g : shared->gates) s = F.add(s, eval_gate(F, g, x));
    return s;
  });
}

Oracle circuit_oracle(const PowerCircuit& P) {
  auto shared = std::make_shared<const PowerCircuit>(P);
  return Oracle::base(P.field, P.num_vars, P.degree, [shared](const Vec& x) {
    const Field& F = shared->field;
    Fe s = 0;
    for (const auto& t : shared->terms) s = F.add(s, F.mul(t.c, F.pow(t.form.evaluate(F, x), shared->degree)));
    return s;
  });
}

ProductGate normalize_gate(const Field& F, const ProductGate& g) {
  ProductGate out;
  out.scalar = g.scalar;
  for (const auto& l : g.forms) {
    if (l.is_constant())
      out.scalar = F.mul(out.scalar, l.constant);
    else
      out.forms.push_back(l);
  }
  if (out.scalar == 0) out.forms.clear();
  return out;
}

bool gates_variable_disjoint(const DepthThreeCircuit& C) {
  for (const auto& g : C.gates) {
    std::vector<bool> seen(C.num_vars, false);
    for (const auto& l : g.forms)
      for (size_t v : l.support()) {
        if (seen[v]) return false;
        seen[v] = true;
      }
  }
  return true;
}

bool is_set_multilinear_shape(const DepthThreeCircuit& C) {
  std::vector<size_t> block_of(C.num_vars, C.blocks.size());
  for (size_t b = 0; b < C.blocks.size(); ++b)
    for (size_t v : C.blocks[b]) block_of[v] = b;
  for (const auto& g : C.gates) {
    if (g.forms.size() != C.blocks.size()) return false;
    std::vector<bool> used(C.blocks.size(), false);
    for (const auto& l : g.forms) {
      auto sup = l.support();
      if (sup.empty()) return false;
      size_t b = block_of[sup[0]];
      if (b == C.blocks.size() || used[b] || l.constant != 0) return false;
      for (size_t v : sup)
        if (block_of[v] != b) return false;
      used[b] = true;
    }
  }
  return true;
}

GcdSplit gcd_and_simplify(const DepthThreeCircuit& C) {
  const Field& F = C.field;
  GcdSplit out;
  out.simp = C;
  if (C.gates.empty()) return out;
  std::vector<ProductGate> gates;
  for (const auto& g : C.gates) gates.push_back(normalize_gate(F, g));
  // Multiplicity of each proportionality class, minimized over gates.
  std::map<LinearForm, size_t> common;
  for (size_t i = 0; i < gates.size(); ++i) {
    std::map<LinearForm, size_t> mult;
    for (const auto& l : gates[i].forms) ++mult[l.canonical(F)];
    if (i == 0) {
      common = mult;
      continue;
    }
    for (auto it = common.begin(); it != common.end();) {
      auto f = mult.find(it->first);
      if (f == mult.end()) {
        it = common.erase(it);
      } else {
        it->second = std::min(it->second, f->second);
        ++it;
      }
    }
  }
  for (const auto& [l, m] : common)
    for (size_t t = 0; t < m; ++t) out.gcd.push_back(l);
  for (auto& g : gates) {
    std::map<LinearForm, size_t> remove = common;
    ProductGate s;
    s.scalar = g.scalar;
    for (const auto& l : g.forms) {
      Fe scale = 1;
      LinearForm c = l.canonical(F, &scale);
      auto it = remove.find(c);
      if (it != remove.end() && it->second > 0) {
        --it->second;
        s.scalar = F.mul(s.scalar, scale);
      } else {
        s.forms.push_back(l);
      }
    }
    g = s;
  }
  out.simp.gates = gates;
  return out;
}

size_t syn_rank(const DepthThreeCircuit& C) {
  GcdSplit s = gcd_and_simplify(C);
  std::vector<Vec> rows;
  for (const auto& g : s.simp.gates)
    for (const auto& l : g.forms) rows.push_back(l.as_vector());
  if (rows.empty()) return 0;
  return rank(Matrix::from_rows(C.field, rows, C.num_vars + 1));
}

DepthThreeCircuit syntactic_sum(const DepthThreeCircuit& a, const DepthThreeCircuit& b) {
  if (a.num_vars != b.num_vars || a.field != b.field) throw InvalidArgument("syntactic_sum: incompatible circuits");
  DepthThreeCircuit c = a;
  c.gates.insert(c.gates.end(), b.gates.begin(), b.gates.end());
  c.multilinear = a.multilinear && b.multilinear;
  c.set_multilinear = a.set_multilinear && b.set_multilinear && a.blocks == b.blocks;
  return c;
}

size_t distance(const DepthThreeCircuit& a, const DepthThreeCircuit& b) { return syn_rank(syntactic_sum(a, b)); }

DepthThreeCircuit subcircuit(const DepthThreeCircuit& C, const std::vector<size_t>& gate_indices) {
  DepthThreeCircuit s = C;
  s.gates.clear();
  for (size_t i : gate_indices) s.gates.push_back(C.gates.at(i));
  return s;
}

bool is_minimal(const DepthThreeCircuit& C, unsigned error_exponent, Rng& rng) {
  size_t k = C.gates.size();
  if (k > 16) throw InvalidArgument("is_minimal: too many gates for a subset scan");
  Oracle zero = zero_oracle(C.field, C.num_vars);
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << k); ++mask) {
    std::vector<size_t> idx;
    for (size_t i = 0; i < k; ++i)
      if (mask >> i & 1) idx.push_back(i);
    if (pit_equal(circuit_oracle(subcircuit(C, idx)), zero, error_exponent, rng).equal) return false;
  }
  return true;
}

bool is_minimal(const PowerCircuit& P) {
  for (size_t i = 0; i < P.terms.size(); ++i) {
    if (P.terms[i].c == 0 || P.terms[i].form.is_zero()) return false;
    for (size_t j = 0; j < i; ++j)
      if (proportional(P.field, P.terms[i].form, P.terms[j].form)) return false;
  }
  return true;
}

PowerCircuit minimalize_power(const PowerCircuit& P) {
  const Field& F = P.field;
  std::vector<std::pair<LinearForm, Fe>> classes;
  for (const auto& t : P.terms) {
    if (t.c == 0 || t.form.is_zero()) continue;
    Fe s = 1;
    LinearForm c = t.form.canonical(F, &s);
    Fe coef = F.mul(t.c, F.pow(s, P.degree));
    auto it = std::find_if(classes.begin(), classes.end(), [&](const auto& e) { return e.first == c; });
    if (it == classes.end())
      classes.emplace_back(c, coef);
    else
      it->second = F.add(it->second, coef);
  }
  PowerCircuit out = P;
  out.terms.clear();
  for (const auto& [l, c] : classes)
    if (c != 0) out.terms.push_back({c, l});
  return out;
}

size_t L_of(const PowerCircuit& P) { return minimalize_power(P).terms.size(); }

std::vector<LinearForm> canonical_forms(const PowerCircuit& P) {
  std::vector<LinearForm> out;
  for (const auto& t : minimalize_power(P).terms) out.push_back(t.form);
  std::sort(out.begin(), out.end());
  return out;
}

PowerCircuit random_power_circuit(const Field& F, size_t n, size_t k, unsigned d, Rng& rng, bool affine) {
  PowerCircuit P;
  P.field = F;
  P.num_vars = n;
  P.degree = d;
  while (P.terms.size() < k) {
    LinearForm l(F.random_vector(n, rng), affine ? F.random(rng) : 0);
    if (l.is_constant()) continue;
    bool fresh = true;
    for (const auto& t : P.terms) fresh = fresh && !proportional(F, t.form, l);
    if (fresh) P.terms.push_back({F.random_nonzero(rng), l});
  }
  return P;
}

ProductGate random_ml_gate(const Field& F, size_t n, const std::vector<size_t>& vars, size_t parts, Rng& rng,
                           bool with_constants) {
  if (parts == 0 || parts > vars.size()) throw InvalidArgument("random_ml_gate: bad part count");
  std::vector<size_t> order = vars;
  std::shuffle(order.begin(), order.end(), rng);
  // parts-1 distinct cut points in 1..|vars|-1.
  std::vector<size_t> cuts(vars.size() - 1);
  std::iota(cuts.begin(), cuts.end(), 1);
  std::shuffle(cuts.begin(), cuts.end(), rng);
  cuts.resize(parts - 1);
  cuts.push_back(0);
  cuts.push_back(vars.size());
  std::sort(cuts.begin(), cuts.end());
  ProductGate g;
  g.scalar = F.random_nonzero(rng);
  for (size_t p = 0; p + 1 < cuts.size(); ++p) {
    LinearForm l(Vec(n, 0), with_constants ? F.random(rng) : 0);
    for (size_t i = cuts[p]; i < cuts[p + 1]; ++i) l.coeffs[order[i]] = F.random_nonzero(rng);
    g.forms.push_back(l);
  }
  return g;
}

DepthThreeCircuit random_setml_circuit(const Field& F, const std::vector<std::vector<size_t>>& blocks, size_t n,
                                       size_t k, Rng& rng) {
  DepthThreeCircuit C;
  C.field = F;
  C.num_vars = n;
  C.multilinear = C.set_multilinear = true;
  C.blocks = blocks;
  for (size_t i = 0; i < k; ++i) {
    ProductGate g;
    for (const auto& b : blocks) {
      LinearForm l(Vec(n, 0), 0);
      while (l.is_zero())
        for (size_t v : b) l.coeffs[v] = F.random(rng);
      g.forms.push_back(l);
    }
    C.gates.push_back(g);
  }
  return C;
}

}  // namespace d3r
