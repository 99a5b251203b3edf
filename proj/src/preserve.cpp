#include "d3r/preserve.hpp"

#include <algorithm>
#include <map>
#include <optional>

namespace d3r {

std::vector<bool> PreservingContext::keep_mask(size_t n) const {
  std::vector<bool> keep(n, false);
  for (size_t v : B) keep[v] = true;
  return keep;
}

std::vector<size_t> match_clusters(const std::vector<MultiPoly>& next, const std::vector<MultiPoly>& prev,
                                   const std::vector<bool>& keep, const Vec& a) {
  if (next.size() != prev.size()) return {};
  std::vector<size_t> sigma(next.size());
  std::vector<bool> used(prev.size(), false);
  for (size_t i = 0; i < next.size(); ++i) {
    MultiPoly r = next[i].restrict(keep, a);
    bool found = false;
    for (size_t j = 0; j < prev.size() && !found; ++j)
      if (!used[j] && r == prev[j]) {
        used[j] = true;
        sigma[i] = j;
        found = true;
      }
    if (!found) return {};
  }
  return sigma;
}

namespace {

struct Analysis {
  DepthThreeCircuit circuit;
  Clustering clustering;
  std::vector<MultiPoly> clusters;
  std::vector<uint64_t> ranks;
};

// Visits the subsets of `pool` of size 1..max_size, smaller sizes first and
// lexicographic within a size, until visit returns true.
template <class Visit>
bool for_each_subset(const std::vector<size_t>& pool, size_t max_size, Visit&& visit) {
  std::vector<size_t> idx;
  for (size_t sz = 1; sz <= std::min(max_size, pool.size()); ++sz) {
    idx.resize(sz);
    for (size_t i = 0; i < sz; ++i) idx[i] = i;
    for (;;) {
      std::vector<size_t> I(sz);
      for (size_t i = 0; i < sz; ++i) I[i] = pool[idx[i]];
      if (visit(I)) return true;
      size_t i = sz;
      while (i > 0 && idx[i - 1] == pool.size() - sz + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (size_t j = i; j < sz; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return false;
}

class Search {
 public:
  Search(const Oracle& o, size_t k, uint64_t tau, Rng& rng, const PreserveOptions& opt)
      : o_(o), k_(k), tau_(tau), rng_(rng), opt_(opt), n_(o.num_vars()) {
    std::vector<size_t> vars(n_);
    for (size_t i = 0; i < n_; ++i) vars[i] = i;
    // One interpolation of f; every restriction is then taken symbolically and
    // re-checked against the restricted oracle.
    f_ = interpolate_multilinear(o, vars, std::min<unsigned>(o.degree_bound(), static_cast<unsigned>(n_)));
  }

  PreservingContext run(const Vec& a) {
    ctx_ = PreservingContext();
    ctx_.a = a;
    ctx_.tau = tau_;
    ctx_.k = k_;
    cache_.clear();
    for (;;) {
      std::vector<size_t> pool;
      for (size_t v = 0; v < n_; ++v)
        if (!std::binary_search(ctx_.B.begin(), ctx_.B.end(), v)) pool.push_back(v);
      bool grew = for_each_subset(pool, opt_.max_I, [&](const std::vector<size_t>& I) { return consider(I); });
      if (!grew) break;
    }
    return ctx_;
  }

 private:
  const Analysis& analyse(const std::vector<bool>& keep) {
    MultiPoly g = f_.restrict(keep, ctx_.a);
    auto it = cache_.find(g.terms());
    if (it != cache_.end()) return it->second;
    size_t width = static_cast<size_t>(std::count(keep.begin(), keep.end(), true));
    Analysis an;
    ++ctx_.learner_calls;
    an.circuit = learn_ml_low_semrank_explicit(g, k_, width, rng_, opt_.learner);
    if (!pit_equal(restrict_oracle(o_, keep, ctx_.a), circuit_oracle(an.circuit), opt_.error_exponent, rng_).equal)
      throw NotInClass("find_preserving_set: learned restriction disagrees with the oracle");
    if (!an.circuit.gates.empty()) {
      an.clustering = semantic_clustering(an.circuit, tau_, rng_);
      std::vector<MultiPoly> polys;
      for (const auto& gate : an.circuit.gates) polys.push_back(expand_gate(an.circuit.field, n_, gate));
      an.clusters = cluster_polys(polys, an.clustering);
      an.ranks = an.clustering.cluster_ranks;
    }
    return cache_.emplace(g.terms(), std::move(an)).first->second;
  }

  bool consider(const std::vector<size_t>& I) {
    ++ctx_.candidates_checked;
    std::vector<bool> keep = ctx_.keep_mask(n_);
    for (size_t v : I) keep[v] = true;
    const Analysis& an = analyse(keep);
    bool grow = an.clusters.size() != ctx_.s;
    if (!grow && ctx_.s > 0) {
      auto sigma = match_clusters(an.clusters, ctx_.clusters, ctx_.keep_mask(n_), ctx_.a);
      if (sigma.empty()) {
        grow = true;
      } else {
        for (size_t i = 0; i < sigma.size() && !grow; ++i) grow = an.ranks[i] > ctx_.cluster_ranks[sigma[i]];
      }
    }
    if (!grow) return false;
    for (size_t v : I) ctx_.B.push_back(v);
    std::sort(ctx_.B.begin(), ctx_.B.end());
    ctx_.s = an.clusters.size();
    ctx_.learned = an.circuit;
    ctx_.clustering = an.clustering;
    ctx_.clusters = an.clusters;
    ctx_.cluster_ranks = an.ranks;
    ++ctx_.iterations;
    if (ctx_.B.size() > opt_.max_B)
      throw PreserveBudgetExceeded("find_preserving_set: |B| = " + std::to_string(ctx_.B.size()) + " over budget",
                                   ctx_);
    if (ctx_.iterations > opt_.max_iterations)
      throw PreserveBudgetExceeded("find_preserving_set: iteration budget exhausted", ctx_);
    return true;
  }

  const Oracle& o_;
  size_t k_;
  uint64_t tau_;
  Rng& rng_;
  PreserveOptions opt_;
  size_t n_;
  MultiPoly f_;
  PreservingContext ctx_;
  std::map<std::map<Monomial, Fe>, Analysis> cache_;
};

}  // namespace

PreservingContext find_preserving_set_at(const Oracle& o, size_t k, uint64_t tau, const Vec& a, Rng& rng,
                                         const PreserveOptions& opt) {
  if (a.size() != o.num_vars()) throw InvalidArgument("find_preserving_set: anchor has the wrong length");
  Search s(o, k, tau, rng, opt);
  return s.run(a);
}

PreservingContext find_preserving_set(const Oracle& o, size_t k, uint64_t tau, Rng& rng,
                                      const PreserveOptions& opt) {
  Vec a = o.field().random_vector(o.num_vars(), rng);
  return find_preserving_set_at(o, k, tau, a, rng, opt);
}

}  // namespace d3r
