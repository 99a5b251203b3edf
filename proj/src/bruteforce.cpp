#include "d3r/bruteforce.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

#include "d3r/errors.hpp"

namespace d3r {

namespace {

// Vectors of length len over `values` whose first nonzero entry is 1.
std::vector<Vec> normalized_vectors(const std::vector<Fe>& values, size_t len) {
  std::vector<Vec> out;
  Vec v(len, 0);
  std::function<void(size_t, bool)> rec = [&](size_t i, bool lead) {
    if (i == len) {
      if (lead) out.push_back(v);
      return;
    }
    if (!lead) {
      v[i] = 0;
      rec(i + 1, false);
      v[i] = 1;
      rec(i + 1, true);
      v[i] = 0;
      return;
    }
    for (Fe x : values) {
      v[i] = x;
      rec(i + 1, true);
    }
    v[i] = 0;
  };
  rec(0, false);
  return out;
}

// Visits increasing index tuples of length r from [0, N) until visit returns true.
template <class Visit>
bool for_each_combination(size_t N, size_t r, bool repeat, Visit&& visit) {
  if (r == 0) return visit(std::vector<size_t>{});
  if (N == 0) return false;
  std::vector<size_t> idx(r);
  for (size_t i = 0; i < r; ++i) idx[i] = repeat ? 0 : i;
  if (!repeat && r > N) return false;
  for (;;) {
    if (visit(idx)) return true;
    size_t i = r;
    while (i > 0) {
      size_t cap = repeat ? N - 1 : N - r + i - 1;
      if (idx[i - 1] < cap) break;
      --i;
    }
    if (i == 0) return false;
    ++idx[i - 1];
    for (size_t j = i; j < r; ++j) idx[j] = repeat ? idx[i - 1] : idx[j - 1] + 1;
  }
}

}  // namespace

WaringRank brute_force_waring_rank(const MultiPoly& f, size_t k_max, const std::vector<Fe>& values,
                                   size_t budget) {
  const Field& F = f.field();
  size_t n = f.num_vars();
  WaringRank out;
  out.witness.field = F;
  out.witness.num_vars = n;
  if (f.is_zero()) return out;
  unsigned d = static_cast<unsigned>(f.degree());
  out.witness.degree = d;
  bool homogeneous = true;
  for (const auto& [m, c] : f.terms()) {
    unsigned deg = 0;
    for (auto e : m) deg += e;
    homogeneous = homogeneous && deg == d;
  }
  std::set<Fe> vals;
  for (Fe v : values) vals.insert(v % F.p());
  vals.insert(0);
  vals.insert(1);
  std::vector<Fe> vs(vals.begin(), vals.end());
  auto coords = normalized_vectors(vs, homogeneous ? n : n + 1);
  std::vector<LinearForm> forms;
  std::vector<MultiPoly> powers;
  std::map<Monomial, size_t> index;
  for (const auto& [m, c] : f.terms()) index.emplace(m, index.size());
  for (const auto& v : coords) {
    LinearForm l(Vec(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n)), homogeneous ? 0 : v[n]);
    if (l.is_constant()) continue;
    forms.push_back(l);
    powers.push_back(MultiPoly::from_form(F, l).pow(d));
    for (const auto& [m, c] : powers.back().terms()) index.emplace(m, index.size());
  }
  Vec target(index.size(), 0);
  for (const auto& [m, c] : f.terms()) target[index.at(m)] = c;
  size_t spent = 0;
  for (size_t r = 1; r <= k_max; ++r) {
    bool found = for_each_combination(forms.size(), r, false, [&](const std::vector<size_t>& idx) {
      if (++spent > budget) throw BudgetExceeded("brute_force_waring_rank: candidate budget exhausted");
      Matrix A(F, index.size(), r);
      for (size_t j = 0; j < r; ++j)
        for (const auto& [m, c] : powers[idx[j]].terms()) A.at(index.at(m), j) = c;
      auto c = solve(A, target);
      if (!c) return false;
      for (Fe x : *c)
        if (x == 0) return false;
      out.witness.terms.clear();
      for (size_t j = 0; j < r; ++j) out.witness.terms.push_back({(*c)[j], forms[idx[j]]});
      return true;
    });
    if (found) {
      if (expand(out.witness) != f) throw Error("brute_force_waring_rank: witness failed to verify");
      out.rank = r;
      return out;
    }
  }
  out.exceeded = true;
  out.rank = k_max + 1;
  out.witness.terms.clear();
  return out;
}

TensorData outer_product(const Field& F, const std::vector<Vec>& vecs) {
  TensorData T;
  T.field = F;
  for (const auto& v : vecs) T.dims.push_back(v.size());
  T.data.assign(T.size(), 1);
  size_t stride = 1;
  for (size_t mode = 0; mode < vecs.size(); ++mode) {
    for (size_t pos = 0; pos < T.data.size(); ++pos) T.data[pos] = F.mul(T.data[pos], vecs[mode][(pos / stride) % T.dims[mode]]);
    stride *= T.dims[mode];
  }
  return T;
}

namespace {

struct Space {
  Field F;
  std::vector<size_t> dims;
  size_t N = 0;
  std::vector<std::uint64_t> pw;      // p^i
  std::vector<std::vector<Fe>> rank1;  // digit vectors of every nonzero rank-one tensor
  std::vector<std::uint64_t> codes;
  std::unordered_map<std::uint64_t, size_t> lookup;  // code -> rank-one index

  std::uint64_t encode(const std::vector<Fe>& digits) const {
    std::uint64_t c = 0;
    for (size_t i = 0; i < N; ++i) c += digits[i] * pw[i];
    return c;
  }
  std::vector<Fe> decode(std::uint64_t c) const {
    std::vector<Fe> d(N);
    for (size_t i = 0; i < N; ++i) {
      d[i] = c % F.p();
      c /= F.p();
    }
    return d;
  }
};

Space build_space(const Field& F, const std::vector<size_t>& dims) {
  Space S;
  S.F = F;
  S.dims = dims;
  S.N = 1;
  for (size_t d : dims) S.N *= d;
  long double bits = static_cast<long double>(S.N) * std::log2(static_cast<long double>(F.p()));
  if (bits >= 63.99L) throw InvalidArgument("brute_force_tensor_rank: tensor space too large for the search field");
  S.pw.assign(S.N, 1);
  for (size_t i = 1; i < S.N; ++i) S.pw[i] = S.pw[i - 1] * F.p();
  std::vector<Fe> all;
  for (Fe v = 0; v < F.p(); ++v) all.push_back(v);
  std::vector<std::vector<Vec>> per_mode;
  for (size_t d : dims) per_mode.push_back(normalized_vectors(all, d));
  std::vector<size_t> pick(dims.size(), 0);
  std::function<void(size_t)> rec = [&](size_t m) {
    if (m == dims.size()) {
      std::vector<Vec> vecs;
      for (size_t i = 0; i < dims.size(); ++i) vecs.push_back(per_mode[i][pick[i]]);
      TensorData base = outer_product(F, vecs);
      for (Fe c = 1; c < F.p(); ++c) {
        std::vector<Fe> dg(S.N);
        for (size_t i = 0; i < S.N; ++i) dg[i] = F.mul(c, base.data[i]);
        S.codes.push_back(S.encode(dg));
        S.rank1.push_back(std::move(dg));
      }
      return;
    }
    for (pick[m] = 0; pick[m] < per_mode[m].size(); ++pick[m]) rec(m + 1);
  };
  rec(0);
  for (size_t r = 0; r < S.codes.size(); ++r) S.lookup.emplace(S.codes[r], r);
  return S;
}

const Space& make_space(const Field& F, const std::vector<size_t>& dims) {
  static std::map<std::pair<std::uint64_t, std::vector<size_t>>, Space> spaces;
  auto key = std::make_pair(F.p(), dims);
  auto it = spaces.find(key);
  if (it == spaces.end()) it = spaces.emplace(key, build_space(F, dims)).first;
  return it->second;
}

struct Table {
  std::vector<std::uint8_t> rank;     // 255 = above the explored depth
  std::vector<std::uint32_t> parent;  // rank-one term added last
  size_t depth = 0;
};

const Table& full_table(const Space& S, size_t k_max) {
  static std::map<std::pair<std::uint64_t, std::vector<size_t>>, Table> tables;
  Table& T = tables[{S.F.p(), S.dims}];
  std::uint64_t size = S.pw.back() * S.F.p();
  if (T.rank.empty()) {
    T.rank.assign(size, 255);
    T.parent.assign(size, 0);
    T.rank[0] = 0;
  }
  const Field& F = S.F;
  while (T.depth < k_max) {
    std::uint8_t cur = static_cast<std::uint8_t>(T.depth);
    bool grew = false;
    for (std::uint64_t c = 0; c < size; ++c) {
      if (T.rank[c] != cur) continue;
      auto dg = S.decode(c);
      for (size_t r = 0; r < S.rank1.size(); ++r) {
        std::uint64_t code = 0;
        for (size_t i = 0; i < S.N; ++i) code += F.add(dg[i], S.rank1[r][i]) * S.pw[i];
        if (T.rank[code] == 255) {
          T.rank[code] = static_cast<std::uint8_t>(cur + 1);
          T.parent[code] = static_cast<std::uint32_t>(r);
          grew = true;
        }
      }
    }
    ++T.depth;
    if (!grew) break;
  }
  return T;
}

TensorData from_digits(const TensorData& shape, const std::vector<Fe>& digits) {
  TensorData T;
  T.field = shape.field;
  T.dims = shape.dims;
  T.data = digits;
  return T;
}

}  // namespace

TensorRank brute_force_tensor_rank(const TensorData& T, size_t k_max, size_t budget) {
  const Field& F = T.field;
  if (F.p() > 64) throw InvalidArgument("brute_force_tensor_rank: needs a small field");
  const Space& S = make_space(F, T.dims);
  TensorRank out;
  std::vector<Fe> digits(T.data.begin(), T.data.end());
  for (auto& x : digits) x %= F.p();
  std::uint64_t code = S.encode(digits);
  auto finish = [&](size_t r) {
    out.rank = r;
    std::vector<Fe> sum(S.N, 0);
    for (const auto& w : out.witness)
      for (size_t i = 0; i < S.N; ++i) sum[i] = F.add(sum[i], w.data[i]);
    if (sum != digits) throw Error("brute_force_tensor_rank: witness failed to verify");
    return out;
  };
  if (S.pw.back() <= (std::uint64_t{1} << 22) / F.p()) {
    const Table& tab = full_table(S, k_max);
    if (tab.rank[code] > k_max) {
      out.exceeded = true;
      out.rank = k_max + 1;
      return out;
    }
    std::uint64_t c = code;
    while (c != 0) {
      const auto& r1 = S.rank1[tab.parent[c]];
      out.witness.push_back(from_digits(T, r1));
      auto dg = S.decode(c);
      for (size_t i = 0; i < S.N; ++i) dg[i] = F.sub(dg[i], r1[i]);
      c = S.encode(dg);
    }
    return finish(out.witness.size());
  }
  if (code == 0) return finish(0);
  size_t spent = 0;
  for (size_t r = 1; r <= k_max; ++r) {
    bool found = for_each_combination(S.rank1.size(), r - 1, true, [&](const std::vector<size_t>& idx) {
      if (++spent > budget) throw BudgetExceeded("brute_force_tensor_rank: candidate budget exhausted");
      std::vector<Fe> rest = digits;
      for (size_t j : idx)
        for (size_t i = 0; i < S.N; ++i) rest[i] = F.sub(rest[i], S.rank1[j][i]);
      auto it = S.lookup.find(S.encode(rest));
      if (it == S.lookup.end()) return false;
      out.witness.clear();
      for (size_t j : idx) out.witness.push_back(from_digits(T, S.rank1[j]));
      out.witness.push_back(from_digits(T, S.rank1[it->second]));
      return true;
    });
    if (found) return finish(r);
  }
  out.exceeded = true;
  out.rank = k_max + 1;
  return out;
}

}  // namespace d3r
