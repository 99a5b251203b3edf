// Set-multilinear learner: dense tensor decomposition over F_p.

#include <algorithm>
#include <cmath>
#include <numeric>

#include "d3r/lowdeg.hpp"
#include "d3r/upoly.hpp"

namespace d3r {

namespace {

struct Tensor {
  Field F;
  std::vector<size_t> dims;
  Vec data;

  Tensor(Field f, std::vector<size_t> d) : F(f), dims(std::move(d)) {
    data.assign(std::accumulate(dims.begin(), dims.end(), size_t{1}, std::multiplies<>()), 0);
  }
  size_t order() const { return dims.size(); }
  size_t stride(size_t b) const {
    size_t s = 1;
    for (size_t j = b + 1; j < dims.size(); ++j) s *= dims[j];
    return s;
  }
  bool is_zero() const {
    return std::all_of(data.begin(), data.end(), [](Fe v) { return v == 0; });
  }
  std::vector<size_t> coords(size_t idx) const {
    std::vector<size_t> c(dims.size());
    for (size_t b = dims.size(); b-- > 0;) {
      c[b] = idx % dims[b];
      idx /= dims[b];
    }
    return c;
  }
  size_t index(const std::vector<size_t>& c) const {
    size_t idx = 0;
    for (size_t b = 0; b < dims.size(); ++b) idx = idx * dims[b] + c[b];
    return idx;
  }
};

Matrix flatten(const Tensor& T, size_t b) {
  size_t rows = T.dims[b], cols = T.data.size() / rows, s = T.stride(b);
  Matrix M(T.F, rows, cols);
  for (size_t idx = 0; idx < T.data.size(); ++idx) {
    size_t i = idx / s % rows;
    size_t rest = idx / (s * rows) * s + idx % s;
    M.at(i, rest) = T.data[idx];
  }
  return M;
}

// Mode-b product with M (new_dim × dims[b]).
Tensor mode_apply(const Tensor& T, size_t b, const Matrix& M) {
  std::vector<size_t> nd = T.dims;
  nd[b] = M.rows();
  Tensor out(T.F, nd);
  size_t s = T.stride(b), dim = T.dims[b];
  for (size_t idx = 0; idx < T.data.size(); ++idx) {
    if (T.data[idx] == 0) continue;
    size_t i = idx / s % dim;
    size_t hi = idx / (s * dim), lo = idx % s;
    for (size_t r = 0; r < M.rows(); ++r) {
      Fe m = M.at(r, i);
      if (m == 0) continue;
      size_t o = (hi * M.rows() + r) * s + lo;
      out.data[o] = T.F.add(out.data[o], T.F.mul(m, T.data[idx]));
    }
  }
  return out;
}

// Drops mode b, which must have dimension 1.
Tensor drop_mode(const Tensor& T, size_t b) {
  std::vector<size_t> nd = T.dims;
  nd.erase(nd.begin() + static_cast<std::ptrdiff_t>(b));
  Tensor out(T.F, nd);
  out.data = T.data;
  return out;
}

struct Rank1 {
  Fe c = 1;
  std::vector<Vec> vecs;  // one per mode
};

Tensor outer(const Field& F, const std::vector<size_t>& dims, const Rank1& g) {
  Tensor T(F, dims);
  // Mode by mode: data holds the outer product of the first b factors.
  T.data.assign(1, g.c);
  for (size_t b = 0; b < dims.size(); ++b) {
    Vec next(T.data.size() * dims[b]);
    for (size_t i = 0; i < T.data.size(); ++i)
      for (size_t j = 0; j < dims[b]; ++j) next[i * dims[b] + j] = F.mul(T.data[i], g.vecs[b][j]);
    T.data = std::move(next);
  }
  return T;
}

Tensor sum_of(const Field& F, const std::vector<size_t>& dims, const std::vector<Rank1>& gs) {
  Tensor T(F, dims);
  for (const auto& g : gs) {
    Tensor o = outer(F, dims, g);
    for (size_t i = 0; i < T.data.size(); ++i) T.data[i] = F.add(T.data[i], o.data[i]);
  }
  return T;
}

// Rank <= 1 test; on success the factors of a nonzero tensor.
std::optional<Rank1> as_rank1(const Tensor& T) {
  const Field& F = T.F;
  auto it = std::find_if(T.data.begin(), T.data.end(), [](Fe v) { return v != 0; });
  if (it == T.data.end()) return std::nullopt;
  auto anchor = T.coords(static_cast<size_t>(it - T.data.begin()));
  Fe a = *it;
  Rank1 g;
  for (size_t b = 0; b < T.order(); ++b) {
    Vec fiber(T.dims[b]);
    auto c = anchor;
    for (size_t j = 0; j < T.dims[b]; ++j) {
      c[b] = j;
      fiber[j] = T.data[T.index(c)];
    }
    g.vecs.push_back(std::move(fiber));
  }
  g.c = F.inv(F.pow(a, T.order() - 1));
  Tensor o = outer(F, T.dims, g);
  if (o.data != T.data) return std::nullopt;
  return g;
}

// Column space of every flattening: T = core ×_b U_b for all b.
struct Reduced {
  Tensor core;
  std::vector<Matrix> U;
};

Reduced reduce_tensor(const Tensor& T) {
  Reduced r{T, {}};
  for (size_t b = 0; b < T.order(); ++b) {
    Matrix M = flatten(r.core, b);
    // Basis of the column space of M: its columns at the pivots of rref(M).
    Matrix Mc = M;
    auto cols = row_reduce(Mc);
    size_t m = cols.size();
    Matrix Ub(T.F, M.rows(), m);
    for (size_t t = 0; t < m; ++t)
      for (size_t i = 0; i < M.rows(); ++i) Ub.at(i, t) = M.at(i, cols[t]);
    // Left inverse from m independent rows of Ub.
    Matrix Ut = Ub.transpose();
    auto rows = row_reduce(Ut);
    Matrix S(T.F, m, m);
    for (size_t t = 0; t < m; ++t)
      for (size_t j = 0; j < m; ++j) S.at(t, j) = Ub.at(rows[t], j);
    Matrix Sinv = *inverse(S);
    Matrix L(T.F, m, M.rows());
    for (size_t t = 0; t < m; ++t)
      for (size_t j = 0; j < m; ++j) L.at(t, rows[j]) = Sinv.at(t, j);
    r.core = mode_apply(r.core, b, L);
    r.U.push_back(std::move(Ub));
  }
  return r;
}

class TensorDecomposer {
 public:
  TensorDecomposer(const Field& F, Rng& rng, size_t budget) : F_(F), rng_(rng), budget_(budget) {}

  // Minimal decomposition with at most kmax terms, nullopt when rank > kmax.
  std::optional<std::vector<Rank1>> run(const Tensor& T, size_t kmax) {
    if (T.is_zero()) return std::vector<Rank1>{};
    if (kmax == 0) return std::nullopt;
    if (T.order() == 0) return std::vector<Rank1>{Rank1{T.data[0], {}}};
    Reduced R = reduce_tensor(T);
    auto core_res = run_core(R.core, kmax);
    if (!core_res) return std::nullopt;
    for (auto& g : *core_res)
      for (size_t b = 0; b < T.order(); ++b) g.vecs[b] = R.U[b].apply(g.vecs[b]);
    return core_res;
  }

 private:
  std::optional<std::vector<Rank1>> run_core(const Tensor& T, size_t kmax) {
    // A mode of dimension one is a scalar factor.
    for (size_t b = 0; b < T.order(); ++b)
      if (T.dims[b] == 1) {
        auto sub = run(drop_mode(T, b), kmax);
        if (!sub) return std::nullopt;
        for (auto& g : *sub) g.vecs.insert(g.vecs.begin() + static_cast<std::ptrdiff_t>(b), Vec{1});
        return sub;
      }
    if (T.order() == 1) return std::vector<Rank1>{Rank1{1, {T.data}}};
    size_t lb = *std::max_element(T.dims.begin(), T.dims.end());
    if (lb > kmax) return std::nullopt;
    if (T.order() == 2) return matrix_rank_decomposition(T);
    if (auto j = jennrich(T, lb)) return j;
    for (size_t r = lb; r <= kmax; ++r)
      if (auto e = enumerate(T, r)) return e;
    return std::nullopt;
  }

  std::vector<Rank1> matrix_rank_decomposition(const Tensor& T) {
    Matrix M = flatten(T, 0);
    Matrix R = M;
    auto piv = row_reduce(R);
    std::vector<Rank1> out;
    for (size_t t = 0; t < piv.size(); ++t) out.push_back(Rank1{1, {M.column(piv[t]), R.row(t)}});
    return out;
  }

  std::optional<std::vector<Rank1>> jennrich(const Tensor& T, size_t r) {
    if (F_.p() <= r + 1) return std::nullopt;
    std::vector<size_t> modes;
    for (size_t b = 0; b < T.order(); ++b)
      if (T.dims[b] == r) modes.push_back(b);
    if (modes.size() < 2) return std::nullopt;
    size_t b0 = modes[0], b1 = modes[1];
    // Slices T[i, j, c] with c ranging over the remaining modes.
    size_t rest = T.data.size() / (r * r);
    std::vector<Matrix> slices(rest, Matrix(F_, r, r));
    for (size_t idx = 0; idx < T.data.size(); ++idx) {
      auto c = T.coords(idx);
      size_t ci = 0;
      for (size_t b = 0; b < T.order(); ++b)
        if (b != b0 && b != b1) ci = ci * T.dims[b] + c[b];
      slices[ci].at(c[b0], c[b1]) = T.data[idx];
    }
    size_t trials = F_.p() < 64 ? 6 : 12;
    for (size_t trial = 0; trial < trials; ++trial) {
      Matrix Mw(F_, r, r), Mv(F_, r, r);
      for (size_t c = 0; c < rest; ++c) {
        Fe w = F_.random(rng_), v = F_.random(rng_);
        for (size_t i = 0; i < r; ++i)
          for (size_t j = 0; j < r; ++j) {
            Mw.at(i, j) = F_.add(Mw.at(i, j), F_.mul(w, slices[c].at(i, j)));
            Mv.at(i, j) = F_.add(Mv.at(i, j), F_.mul(v, slices[c].at(i, j)));
          }
      }
      auto Mvi = inverse(Mv);
      if (!Mvi) continue;
      Matrix X = Mw * *Mvi;
      // Characteristic polynomial by interpolation at λ = 0..r.
      std::vector<Fe> xs, ys;
      for (Fe lam = 0; lam <= r; ++lam) {
        Matrix Y = X;
        for (size_t i = 0; i < r; ++i) Y.at(i, i) = F_.sub(Y.at(i, i), lam);
        xs.push_back(lam);
        ys.push_back(determinant(Y));
      }
      auto lams = upoly::roots(F_, upoly::interpolate(F_, xs, ys), rng_);
      if (lams.size() != r) continue;
      Matrix A(F_, r, r);
      bool ok = true;
      for (size_t t = 0; t < r && ok; ++t) {
        Matrix Y = X;
        for (size_t i = 0; i < r; ++i) Y.at(i, i) = F_.sub(Y.at(i, i), lams[t]);
        auto ker = kernel_basis(Y);
        if (ker.size() != 1) ok = false;
        else
          for (size_t i = 0; i < r; ++i) A.at(i, t) = ker[0][i];
      }
      if (!ok) continue;
      auto Ai = inverse(A);
      if (!Ai) continue;
      // Row t of A^{-1} applied along b0 isolates the t-th term.
      std::vector<Rank1> out;
      for (size_t t = 0; t < r && ok; ++t) {
        Matrix row(F_, 1, r);
        for (size_t i = 0; i < r; ++i) row.at(0, i) = Ai->at(t, i);
        Tensor piece = drop_mode(mode_apply(T, b0, row), b0);
        auto g = as_rank1(piece);
        if (!g) {
          ok = false;
          break;
        }
        g->vecs.insert(g->vecs.begin() + static_cast<std::ptrdiff_t>(b0), A.column(t));
        out.push_back(*g);
      }
      if (ok && sum_of(F_, T.dims, out).data == T.data) return out;
    }
    return std::nullopt;
  }

  // All nonzero vectors of F^m whose first nonzero entry is 1.
  static bool next_normalized(const Field& F, Vec& v) {
    // Odometer over the entries after the leading one; then move the lead.
    size_t lead = 0;
    while (lead < v.size() && v[lead] == 0) ++lead;
    for (size_t i = v.size(); i-- > lead + 1;) {
      if (++v[i] < F.p()) return true;
      v[i] = 0;
    }
    if (lead == 0) return false;
    std::fill(v.begin(), v.end(), 0);
    v[lead - 1] = 1;
    return true;
  }

  std::optional<std::vector<Rank1>> enumerate(const Tensor& T, size_t r) {
    if (r == 1) {
      if (auto g = as_rank1(T)) return std::vector<Rank1>{*g};
      return std::nullopt;
    }
    // Candidate count guard.
    long double count = static_cast<long double>(F_.p() - 1);
    for (size_t d : T.dims) count *= (std::pow(static_cast<long double>(F_.p()), d) - 1) / (F_.p() - 1);
    if (count > static_cast<long double>(budget_)) throw BudgetExceeded("tensor enumeration over budget");
    size_t q = T.order();
    std::vector<Vec> v(q);
    for (size_t b = 0; b < q; ++b) {
      v[b].assign(T.dims[b], 0);
      v[b].back() = 1;  // start from the last unit vector, the odometer walks up
    }
    for (;;) {
      Rank1 g{1, v};
      Tensor o = outer(F_, T.dims, g);
      for (Fe c = 1; c < F_.p(); ++c) {
        if ((spent_ += 1) > budget_) throw BudgetExceeded("tensor enumeration over budget");
        Tensor res = T;
        bool fits = true;
        for (size_t i = 0; i < res.data.size(); ++i) res.data[i] = F_.sub(res.data[i], F_.mul(c, o.data[i]));
        if (r == 2) {
          if (auto h = as_rank1(res)) {
            g.c = c;
            return std::vector<Rank1>{*h, g};
          }
          continue;
        }
        for (size_t b = 0; b < q && fits; ++b) fits = rank(flatten(res, b)) <= r - 1;
        if (!fits) continue;
        auto sub = run(res, r - 1);
        if (sub) {
          g.c = c;
          sub->push_back(g);
          return sub;
        }
      }
      size_t b = q;
      while (b > 0) {
        --b;
        if (next_normalized(F_, v[b])) break;
        v[b].assign(T.dims[b], 0);
        v[b].back() = 1;
        if (b == 0) return std::nullopt;
      }
    }
  }

  Field F_;
  Rng& rng_;
  size_t budget_;
  size_t spent_ = 0;
};

struct BlockIndex {
  std::vector<std::pair<size_t, size_t>> pos;  // variable -> (block, offset)
};

BlockIndex index_blocks(size_t n, const std::vector<std::vector<size_t>>& blocks) {
  BlockIndex bi;
  bi.pos.assign(n, {SIZE_MAX, 0});
  for (size_t b = 0; b < blocks.size(); ++b)
    for (size_t j = 0; j < blocks[b].size(); ++j) {
      size_t v = blocks[b][j];
      if (v >= n || bi.pos[v].first != SIZE_MAX) throw InvalidArgument("blocks must partition distinct variables");
      bi.pos[v] = {b, j};
    }
  return bi;
}

Tensor to_tensor(const MultiPoly& f, const std::vector<std::vector<size_t>>& blocks) {
  BlockIndex bi = index_blocks(f.num_vars(), blocks);
  std::vector<size_t> dims;
  for (const auto& b : blocks) dims.push_back(b.size());
  Tensor T(f.field(), dims);
  for (const auto& [m, c] : f.terms()) {
    std::vector<size_t> coord(blocks.size(), SIZE_MAX);
    for (size_t v = 0; v < m.size(); ++v) {
      if (m[v] == 0) continue;
      auto [b, j] = bi.pos[v];
      if (m[v] != 1 || b == SIZE_MAX || coord[b] != SIZE_MAX) throw NotInClass("polynomial is not set-multilinear");
      coord[b] = j;
    }
    for (size_t x : coord)
      if (x == SIZE_MAX) throw NotInClass("polynomial is not set-multilinear");
    T.data[T.index(coord)] = c;
  }
  return T;
}

}  // namespace

DepthThreeCircuit learn_setml_explicit(const MultiPoly& f, size_t k, const std::vector<std::vector<size_t>>& blocks,
                                       Rng& rng, const LowdegOptions& opt) {
  if (k > opt.max_k) throw BudgetExceeded("learn_setml: k over the desk gate");
  if (blocks.empty()) throw InvalidArgument("learn_setml: no blocks");
  Tensor T = to_tensor(f, blocks);
  TensorDecomposer dec(f.field(), rng, opt.assembly_budget * 10);
  auto gates = dec.run(T, k);
  if (!gates) throw NotInClass("tensor rank exceeds " + std::to_string(k));
  DepthThreeCircuit C;
  C.field = f.field();
  C.num_vars = f.num_vars();
  C.multilinear = true;
  C.set_multilinear = true;
  C.blocks = blocks;
  for (const auto& g : *gates) {
    ProductGate pg{g.c, {}};
    for (size_t b = 0; b < blocks.size(); ++b) {
      LinearForm l(Vec(f.num_vars(), 0), 0);
      for (size_t j = 0; j < blocks[b].size(); ++j) l.coeffs[blocks[b][j]] = g.vecs[b][j];
      pg.forms.push_back(std::move(l));
    }
    C.gates.push_back(std::move(pg));
  }
  if (expand(C) != f) throw Error("learn_setml: internal verification failed");
  return C;
}

DepthThreeCircuit learn_setml_lowdeg(const Oracle& o, size_t k, const std::vector<std::vector<size_t>>& blocks,
                                     Rng& rng, const LowdegOptions& opt) {
  std::vector<size_t> vars;
  for (const auto& b : blocks) vars.insert(vars.end(), b.begin(), b.end());
  std::sort(vars.begin(), vars.end());
  MultiPoly f = interpolate_multilinear(o, vars, static_cast<unsigned>(blocks.size()));
  DepthThreeCircuit C = learn_setml_explicit(f, k, blocks, rng, opt);
  if (!pit_equal(o, circuit_oracle(C), opt.error_exponent, rng).equal)
    throw NotInClass("learned set-multilinear circuit disagrees with the oracle");
  return C;
}

}  // namespace d3r
