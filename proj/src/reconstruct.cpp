#include "d3r/reconstruct.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "d3r/cluster.hpp"
#include "d3r/upoly.hpp"

namespace d3r {

ClusterEvaluator::ClusterEvaluator(Oracle o, PreservingContext ctx, Rng& rng, EvalOptions opt)
    : o_(std::move(o)), ctx_(std::move(ctx)), rng_(rng), opt_(std::move(opt)) {
  in_B_ = ctx_.keep_mask(o_.num_vars());
  if (ctx_.a.size() != o_.num_vars()) throw InvalidArgument("ClusterEvaluator: anchor has the wrong length");
  cache_.emplace(key_of(ctx_.a), ctx_.clusters);
}

unsigned ClusterEvaluator::cluster_degree() const {
  return opt_.cluster_degree ? opt_.cluster_degree : o_.degree_bound();
}

size_t ClusterEvaluator::sample_count() const {
  return std::max<size_t>(cluster_degree() + 2 * opt_.E + 1, opt_.W_min);
}

Vec ClusterEvaluator::key_of(const Vec& b) const {
  Vec key = b;
  for (size_t i = 0; i < key.size(); ++i)
    if (in_B_[i]) key[i] = 0;
  return key;
}

std::vector<MultiPoly> ClusterEvaluator::step(const Vec& b, const std::vector<MultiPoly>& at_b, size_t j, Fe value) {
  size_t n = o_.num_vars();
  Vec b2 = b;
  b2[j] = value;
  if (in_B_[j] || value == b[j]) return at_b;
  ++steps_;
  std::vector<bool> keep = in_B_;
  keep[j] = true;
  std::vector<size_t> vars;
  for (size_t i = 0; i < n; ++i)
    if (keep[i]) vars.push_back(i);
  unsigned d = std::min<unsigned>(o_.degree_bound(), static_cast<unsigned>(vars.size()));
  MultiPoly g = interpolate_multilinear(restrict_oracle(o_, keep, b), vars, d);
  std::vector<MultiPoly> polys;
  if (!g.is_zero()) {
    DepthThreeCircuit C = learn_ml_low_semrank_explicit(g, ctx_.k, vars.size(), rng_, opt_.learner);
    Clustering cl = semantic_clustering(C, ctx_.tau, rng_);
    std::vector<MultiPoly> gates;
    for (const auto& gate : C.gates) gates.push_back(expand_gate(C.field, n, gate));
    polys = cluster_polys(gates, cl);
  }
  auto sigma = match_clusters(polys, at_b, in_B_, b);
  if (sigma.empty() && !at_b.empty())
    throw EvaluationFailure("neighbor step on x" + std::to_string(j + 1) + ": clusters do not match", j);
  if (polys.size() != at_b.size())
    throw EvaluationFailure("neighbor step on x" + std::to_string(j + 1) + ": cluster count changed", j);
  std::vector<MultiPoly> out(polys.size());
  for (size_t i = 0; i < polys.size(); ++i) out[sigma[i]] = polys[i].restrict(in_B_, b2);
  return out;
}

const std::vector<MultiPoly>& ClusterEvaluator::clusters_at(const Vec& b) {
  if (b.size() != o_.num_vars()) throw InvalidArgument("ClusterEvaluator: point has the wrong length");
  Vec key = key_of(b);
  auto hit = cache_.find(key);
  if (hit != cache_.end()) return hit->second;
  Vec cur = key_of(ctx_.a);
  const std::vector<MultiPoly>* polys = &cache_.at(cur);
  for (size_t i = 0; i < b.size(); ++i) {
    if (in_B_[i] || cur[i] == b[i]) continue;
    Vec next = cur;
    next[i] = b[i];
    auto it = cache_.find(next);
    if (it == cache_.end()) {
      // Neighbor steps restrict at a point carrying a's values on B; only the
      // coordinates outside B matter.
      Vec at = cur;
      for (size_t v = 0; v < at.size(); ++v)
        if (in_B_[v]) at[v] = ctx_.a[v];
      auto stepped = step(at, *polys, i, b[i]);
      it = cache_.emplace(next, std::move(stepped)).first;
    }
    polys = &it->second;
    cur = std::move(next);
  }
  return *polys;
}

std::vector<Fe> ClusterEvaluator::eval_line(const Vec& b) {
  const auto& polys = clusters_at(b);
  std::vector<Fe> out;
  for (const auto& p : polys) out.push_back(p.evaluate(b));
  return out;
}

std::vector<Fe> ClusterEvaluator::eval_neighbor(const Vec& b, const Vec& b_prime) {
  if (b.size() != b_prime.size() || b.size() != o_.num_vars())
    throw InvalidArgument("eval_clusters_neighbor: points of the wrong length");
  std::vector<size_t> diff;
  for (size_t i = 0; i < b.size(); ++i)
    if (b[i] != b_prime[i]) diff.push_back(i);
  if (diff.size() > 1) throw InvalidArgument("eval_clusters_neighbor: points differ in more than one coordinate");
  std::vector<MultiPoly> at_b = clusters_at(b);
  std::vector<MultiPoly> polys = at_b;
  if (!diff.empty()) {
    Vec base = key_of(b);
    for (size_t v = 0; v < base.size(); ++v)
      if (in_B_[v]) base[v] = ctx_.a[v];
    polys = step(base, at_b, diff[0], b_prime[diff[0]]);
    cache_.emplace(key_of(b_prime), polys);
  }
  std::vector<Fe> out;
  for (const auto& p : polys) out.push_back(p.evaluate(b_prime));
  return out;
}

std::vector<Fe> ClusterEvaluator::eval_arbitrary(const Vec& b) {
  const Field& F = o_.field();
  auto memo = arbitrary_cache_.find(b);
  if (memo != arbitrary_cache_.end()) return memo->second;
  size_t W = sample_count();
  unsigned deg = cluster_degree();
  if (F.p() <= W + 1) throw FieldTooSmall("eval_clusters_arbitrary: field too small for the line samples");
  std::set<Fe> seen;
  std::vector<Fe> ts;
  while (ts.size() < W) {
    Fe t = F.random(rng_);
    if (t != 1 && seen.insert(t).second) ts.push_back(t);
  }
  size_t s = num_clusters();
  std::vector<Fe> pts;
  std::vector<std::vector<Fe>> vals(s);
  for (size_t i = 0; i < W; ++i) {
    Vec x(b.size());
    for (size_t v = 0; v < b.size(); ++v) x[v] = F.add(ctx_.a[v], F.mul(ts[i], F.sub(b[v], ctx_.a[v])));
    std::vector<Fe> cv;
    try {
      cv = eval_line(x);
    } catch (const Error&) {
      continue;  // a bad parameter is dropped; decoding tolerates it as an error
    }
    if (opt_.fault) opt_.fault(i, cv);
    pts.push_back(ts[i]);
    for (size_t j = 0; j < s; ++j) vals[j].push_back(cv[j]);
  }
  size_t dropped = W - pts.size();
  if (dropped > opt_.E || pts.size() < deg + 2 * (opt_.E - dropped) + 1)
    throw DecodeFailure("eval_clusters_arbitrary: too many failed line samples");
  std::vector<Fe> out(s);
  Fe total = 0;
  for (size_t j = 0; j < s; ++j) {
    UPoly u = rs_decode(F, pts, vals[j], deg, opt_.E - dropped);
    out[j] = upoly::eval(F, u, 1);
    total = F.add(total, out[j]);
  }
  if (total != o_(b)) throw DecodeFailure("eval_clusters_arbitrary: decoded clusters do not sum to f(b)");
  arbitrary_cache_.emplace(b, out);
  return out;
}

Oracle ClusterEvaluator::cluster_oracle(size_t j) {
  if (j >= num_clusters()) throw InvalidArgument("cluster_oracle: no such cluster");
  return Oracle(o_.field(), o_.num_vars(), cluster_degree(),
                [this, j](const Vec& x) { return eval_arbitrary(x)[j]; }, o_.counter());
}

std::vector<MultiPoly> materialize_clusters(ClusterEvaluator& ev, Rng& rng) {
  const PreservingContext& ctx = ev.context();
  const Vec& a = ctx.a;
  size_t n = a.size();
  size_t s = ev.num_clusters();
  if (s == 0) return {};
  const Field& F = ctx.clusters[0].field();
  std::vector<bool> inB = ctx.keep_mask(n);
  std::vector<size_t> free;
  for (size_t i = 0; i < n; ++i)
    if (!inB[i]) free.push_back(i);
  if (free.size() > 24) throw BudgetExceeded("materialize_clusters: too many variables outside B");
  size_t D = std::min<size_t>(ev.cluster_degree(), free.size());
  Vec delta(n, 0);
  for (size_t i : free) delta[i] = F.random_nonzero(rng);

  // Values on the grid, keyed by subset mask over `free`.
  std::map<std::uint32_t, std::vector<MultiPoly>> grid;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << free.size()); ++mask) {
    if (static_cast<size_t>(std::popcount(mask)) > D) continue;
    Vec b = a;
    for (size_t t = 0; t < free.size(); ++t)
      if (mask >> t & 1) b[free[t]] = F.add(a[free[t]], delta[free[t]]);
    grid.emplace(mask, ev.clusters_at(b));
  }
  // Möbius inversion on the downward-closed family of small subsets.
  for (size_t t = 0; t < free.size(); ++t)
    for (auto& [mask, polys] : grid)
      if (mask >> t & 1) {
        const auto& lower = grid.at(mask ^ (std::uint32_t{1} << t));
        for (size_t j = 0; j < s; ++j) polys[j] = polys[j] - lower[j];
      }
  // y_i = (x_i - a_i) / δ_i.
  std::vector<MultiPoly> y(n);
  for (size_t i : free) {
    Fe inv = F.inv(delta[i]);
    LinearForm l = LinearForm::variable(n, i).scaled(F, inv);
    l.constant = F.neg(F.mul(a[i], inv));
    y[i] = MultiPoly::from_form(F, l);
  }
  std::vector<MultiPoly> out(s, MultiPoly(F, n));
  for (const auto& [mask, polys] : grid) {
    MultiPoly mono = MultiPoly::constant(F, n, 1);
    for (size_t t = 0; t < free.size(); ++t)
      if (mask >> t & 1) mono = mono * y[free[t]];
    for (size_t j = 0; j < s; ++j)
      if (!polys[j].is_zero()) out[j] = out[j] + polys[j] * mono;
  }
  return out;
}

std::vector<uint64_t> default_tau_schedule(size_t k) {
  std::vector<uint64_t> taus = {4, 8, 16, 32};
  uint64_t rm = rank_bound_ml(2 * k);
  if (rm > taus.back()) taus.push_back(rm);
  return taus;
}

namespace {

DepthThreeCircuit empty_circuit(const Oracle& o) {
  DepthThreeCircuit C;
  C.field = o.field();
  C.num_vars = o.num_vars();
  C.multilinear = true;
  return C;
}

void record(ReconstructDiagnostics* diag, const std::string& msg) {
  if (diag) diag->failures.push_back(msg);
}

}  // namespace

DepthThreeCircuit reconstruct_multilinear(const Oracle& o, size_t k, Rng& rng, const ReconstructOptions& opt,
                                          ReconstructDiagnostics* diag) {
  ReconstructDiagnostics local;
  if (!diag) diag = &local;
  *diag = ReconstructDiagnostics{};
  std::uint64_t q0 = o.queries();
  if (pit_is_zero(o, opt.error_exponent, rng)) {
    diag->certified = true;
    diag->queries = o.queries() - q0;
    return empty_circuit(o);
  }
  if (k == 0) throw NotInClass("reconstruct_multilinear: nonzero polynomial with k = 0");
  std::vector<uint64_t> taus = opt.taus.empty() ? default_tau_schedule(k) : opt.taus;
  bool only_budget = true;
  for (uint64_t tau : taus) {
    for (size_t attempt = 0; attempt < opt.anchor_retries; ++attempt) {
      ++diag->attempts;
      try {
        PreservingContext ctx = find_preserving_set(o, k, tau, rng, opt.preserve);
        if (ctx.s == 0 || ctx.s > k) throw NotInClass("cluster count " + std::to_string(ctx.s) + " outside [1, k]");
        diag->tau = tau;
        diag->B = ctx.B;
        diag->clusters = ctx.s;
        ClusterEvaluator ev(o, ctx, rng, opt.eval);
        diag->sample_count = ev.sample_count();
        size_t kj = k - (ctx.s - 1);
        DepthThreeCircuit out = empty_circuit(o);
        if (opt.access == ClusterAccess::Grid) {
          auto polys = materialize_clusters(ev, rng);
          for (size_t j = 0; j < polys.size(); ++j) {
            DepthThreeCircuit Cj =
                learn_ml_low_semrank_explicit(polys[j], kj, ctx.cluster_ranks[j], rng, opt.eval.learner);
            for (auto& g : Cj.gates) out.gates.push_back(std::move(g));
          }
        } else {
          for (size_t j = 0; j < ctx.s; ++j) {
            DepthThreeCircuit Cj =
                learn_ml_low_semrank(ev.cluster_oracle(j), kj, ctx.cluster_ranks[j], rng, opt.eval.learner);
            for (auto& g : Cj.gates) out.gates.push_back(std::move(g));
          }
        }
        diag->neighbor_steps += ev.neighbor_steps();
        if (out.gates.size() > k) throw NotInClass("cluster circuits exceed the fan-in budget");
        if (!gates_variable_disjoint(out)) throw NotInClass("output is not structurally multilinear");
        if (!pit_equal(o, circuit_oracle(out), opt.error_exponent, rng).equal)
          throw NotInClass("final identity test failed");
        diag->certified = true;
        diag->queries = o.queries() - q0;
        return out;
      } catch (const BudgetExceeded& e) {
        record(diag, "tau=" + std::to_string(tau) + ": " + e.what());
      } catch (const Error& e) {
        only_budget = false;
        record(diag, "tau=" + std::to_string(tau) + ": " + e.what());
      }
    }
  }
  diag->queries = o.queries() - q0;
  std::string last = diag->failures.empty() ? "" : diag->failures.back();
  if (only_budget) throw BudgetExceeded("reconstruct_multilinear: sweep exhausted (" + last + ")");
  throw NotInClass("reconstruct_multilinear: sweep exhausted (" + last + ")");
}

DepthThreeCircuit reconstruct_setml(const Oracle& o, size_t k, const std::vector<std::vector<size_t>>& blocks,
                                    Rng& rng, const ReconstructOptions& opt, ReconstructDiagnostics* diag) {
  ReconstructDiagnostics local;
  if (!diag) diag = &local;
  *diag = ReconstructDiagnostics{};
  std::uint64_t q0 = o.queries();
  // Every tensor is a single cluster once τ exceeds its rank, so the driver
  // reduces to the set-multilinear learner on f itself.
  ++diag->attempts;
  diag->clusters = 1;
  DepthThreeCircuit C = learn_setml_lowdeg(o, k, blocks, rng, opt.eval.learner);
  if (!is_set_multilinear_shape(C)) throw Error("reconstruct_setml: output is not set-multilinear");
  if (!pit_equal(o, circuit_oracle(C), opt.error_exponent, rng).equal)
    throw NotInClass("reconstruct_setml: final identity test failed");
  if (C.gates.empty()) diag->clusters = 0;
  diag->certified = true;
  diag->queries = o.queries() - q0;
  return C;
}

}  // namespace d3r
