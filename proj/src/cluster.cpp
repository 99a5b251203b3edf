#include "d3r/cluster.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "d3r/semrank.hpp"

namespace d3r {

namespace {

std::uint64_t ceil_pos(long double x) {
  // Guard against log2 noise on exact values such as log₂4 = 2.
  long double r = std::round(x);
  if (std::fabs(x - r) < 1e-9L) return static_cast<std::uint64_t>(r);
  return static_cast<std::uint64_t>(std::ceil(x));
}

using Mask = std::uint32_t;

std::vector<Mask> masks_of(const std::vector<std::vector<size_t>>& partition) {
  std::vector<Mask> out;
  for (const auto& block : partition) {
    Mask m = 0;
    for (size_t g : block) m |= Mask{1} << g;
    out.push_back(m);
  }
  return out;
}

std::vector<std::vector<size_t>> blocks_from_rgs(const std::vector<size_t>& rgs) {
  std::vector<std::vector<size_t>> blocks;
  for (size_t i = 0; i < rgs.size(); ++i) {
    if (rgs[i] >= blocks.size()) blocks.resize(rgs[i] + 1);
    blocks[rgs[i]].push_back(i);
  }
  return blocks;
}

// Shared search over all partitions: rank_of(mask) gives a cluster rank,
// dist_of(mask) the rank of a union of two clusters.
struct Choice {
  std::vector<std::vector<size_t>> partition;
  std::uint64_t r = 0, raw = 0;
};

Choice best_partition(size_t k, std::uint64_t tau, std::uint64_t r_floor,
                      const std::function<std::uint64_t(Mask)>& rank_of,
                      const std::function<std::uint64_t(Mask)>& dist_of) {
  Choice best;
  bool have = false;
  for (const auto& rgs : restricted_growth_strings(k)) {
    auto blocks = blocks_from_rgs(rgs);
    auto masks = masks_of(blocks);
    std::uint64_t raw = 0;
    for (Mask m : masks) raw = std::max(raw, rank_of(m));
    std::uint64_t r = blocks.size() == 1 ? raw : std::max(raw, r_floor);
    bool ok = true;
    for (size_t i = 0; i < masks.size() && ok; ++i)
      for (size_t j = i + 1; j < masks.size() && ok; ++j) ok = dist_of(masks[i] | masks[j]) >= tau * r;
    if (!ok) continue;
    if (!have || r < best.r || (r == best.r && blocks.size() > best.partition.size())) {
      best = {blocks, r, raw};
      have = true;
    }
  }
  return best;
}

void fill_measures(Clustering& c, const std::function<std::uint64_t(Mask)>& rank_of,
                   const std::function<std::uint64_t(Mask)>& dist_of) {
  auto masks = masks_of(c.partition);
  c.cluster_ranks.clear();
  for (Mask m : masks) c.cluster_ranks.push_back(rank_of(m));
  c.distances.assign(masks.size(), std::vector<std::uint64_t>(masks.size(), 0));
  for (size_t i = 0; i < masks.size(); ++i)
    for (size_t j = i + 1; j < masks.size(); ++j) c.distances[i][j] = c.distances[j][i] = dist_of(masks[i] | masks[j]);
}

// Cached semantic ranks of subset sums; zero sums get rank 0.
struct SemCache {
  const std::vector<MultiPoly>& gates;
  Rng& rng;
  std::map<Mask, std::uint64_t> memo;

  MultiPoly sum(Mask m) const {
    MultiPoly s(gates[0].field(), gates[0].num_vars());
    for (size_t i = 0; i < gates.size(); ++i)
      if (m >> i & 1) s = s + gates[i];
    return s;
  }
  std::uint64_t operator()(Mask m) {
    auto it = memo.find(m);
    if (it != memo.end()) return it->second;
    MultiPoly s = sum(m);
    std::uint64_t v = s.is_zero() ? 0 : sem_rank(s, rng);
    memo.emplace(m, v);
    return v;
  }
};

}  // namespace

std::uint64_t rank_bound(std::uint64_t k, std::uint64_t d) {
  return ceil_pos(4.0L * k * k * std::log2(2.0L * d));
}

std::uint64_t rank_bound_ml(std::uint64_t k) {
  if (k < 2) return 0;
  return ceil_pos(10.0L * k * k * std::log2(static_cast<long double>(k)));
}

std::vector<std::vector<size_t>> restricted_growth_strings(size_t k) {
  std::vector<std::vector<size_t>> out;
  if (k == 0) return {{}};
  std::vector<size_t> a(k, 0);
  std::function<void(size_t, size_t)> rec = [&](size_t i, size_t mx) {
    if (i == k) {
      out.push_back(a);
      return;
    }
    for (size_t v = 0; v <= mx + 1; ++v) {
      a[i] = v;
      rec(i + 1, std::max(mx, v));
    }
  };
  a[0] = 0;
  rec(1, 0);
  return out;
}

std::vector<MultiPoly> cluster_polys(const std::vector<MultiPoly>& gate_polys, const Clustering& part) {
  std::vector<MultiPoly> out;
  for (const auto& block : part.partition) {
    MultiPoly s(gate_polys.at(0).field(), gate_polys.at(0).num_vars());
    for (size_t g : block) s = s + gate_polys[g];
    out.push_back(s);
  }
  return out;
}

PartitionCheck validate_partition(const DepthThreeCircuit& C, const Clustering& part, Rng& rng) {
  PartitionCheck out;
  std::vector<bool> seen(C.gates.size(), false);
  for (const auto& block : part.partition)
    for (size_t g : block) {
      if (g >= seen.size() || seen[g]) {
        out.valid = false;
        out.report = "partition does not cover the gates exactly once";
        return out;
      }
      seen[g] = true;
    }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    out.valid = false;
    out.report = "partition misses a gate";
    return out;
  }
  std::function<std::uint64_t(Mask)> rank_of, dist_of;
  std::vector<MultiPoly> polys;
  std::optional<SemCache> cache;
  if (part.kind == ClusterKind::Syntactic) {
    rank_of = dist_of = [&](Mask m) {
      std::vector<size_t> idx;
      for (size_t i = 0; i < C.gates.size(); ++i)
        if (m >> i & 1) idx.push_back(i);
      return static_cast<std::uint64_t>(syn_rank(subcircuit(C, idx)));
    };
  } else {
    for (const auto& g : C.gates) polys.push_back(expand_gate(C.field, C.num_vars, g));
    cache.emplace(SemCache{polys, rng, {}});
    dist_of = [&](Mask m) { return (*cache)(m); };
    rank_of = [&](Mask m) { return std::max<std::uint64_t>(1, (*cache)(m)); };
  }
  auto masks = masks_of(part.partition);
  for (size_t i = 0; i < masks.size(); ++i)
    if (rank_of(masks[i]) > part.r) {
      out.valid = false;
      out.bad_cluster = i;
      out.report = "cluster " + std::to_string(i + 1) + " has rank " + std::to_string(rank_of(masks[i])) + " > r";
      return out;
    }
  for (size_t i = 0; i < masks.size(); ++i)
    for (size_t j = i + 1; j < masks.size(); ++j) {
      std::uint64_t dd = dist_of(masks[i] | masks[j]);
      if (dd < part.tau * part.r) {
        out.valid = false;
        out.bad_pair = {i, j};
        out.report = "clusters (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ") at distance " +
                     std::to_string(dd) + " < tau*r = " + std::to_string(part.tau * part.r);
        return out;
      }
    }
  return out;
}

Clustering syntactic_clustering(const DepthThreeCircuit& C, std::uint64_t tau, const SyntacticOptions& opt) {
  size_t k = C.gates.size();
  if (k == 0) throw InvalidArgument("syntactic_clustering of an empty circuit");
  if (k > 24) throw InvalidArgument("syntactic_clustering: too many gates");
  std::map<Mask, std::uint64_t> memo;
  std::function<std::uint64_t(Mask)> rank_of = [&](Mask m) {
    auto it = memo.find(m);
    if (it != memo.end()) return it->second;
    std::vector<size_t> idx;
    for (size_t i = 0; i < k; ++i)
      if (m >> i & 1) idx.push_back(i);
    std::uint64_t v = syn_rank(subcircuit(C, idx));
    memo.emplace(m, v);
    return v;
  };
  std::uint64_t floor = opt.r_floor ? *opt.r_floor : rank_bound_ml(2 * k);
  Clustering out;
  out.kind = ClusterKind::Syntactic;
  out.tau = tau;
  // Iterated merging.
  std::vector<Mask> clusters;
  for (size_t i = 0; i < k; ++i) clusters.push_back(Mask{1} << i);
  std::uint64_t r = floor;
  for (;;) {
    bool merged = false;
    for (size_t i = 0; i < clusters.size() && !merged; ++i)
      for (size_t j = i + 1; j < clusters.size() && !merged; ++j)
        if (rank_of(clusters[i] | clusters[j]) < tau * r) {
          clusters[i] |= clusters[j];
          clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(j));
          merged = true;
        }
    std::uint64_t raw = 0;
    for (Mask m : clusters) raw = std::max(raw, rank_of(m));
    r = std::max(r, raw);
    if (!merged) break;
  }
  for (Mask m : clusters) {
    std::vector<size_t> block;
    for (size_t i = 0; i < k; ++i)
      if (m >> i & 1) block.push_back(i);
    out.partition.push_back(block);
  }
  std::sort(out.partition.begin(), out.partition.end());
  out.raw_r = 0;
  for (Mask m : clusters) out.raw_r = std::max(out.raw_r, rank_of(m));
  out.r = out.partition.size() == 1 ? out.raw_r : r;
  if (opt.refine && k <= 8) {
    Choice c = best_partition(k, tau, floor, rank_of, rank_of);
    if (c.r < out.r || (c.r == out.r && c.partition.size() > out.partition.size())) {
      out.partition = c.partition;
      out.r = c.r;
      out.raw_r = c.raw;
    }
  }
  fill_measures(out, rank_of, rank_of);
  return out;
}

Clustering semantic_clustering(const std::vector<MultiPoly>& gate_polys, std::uint64_t tau, Rng& rng,
                               size_t max_gates) {
  size_t k = gate_polys.size();
  if (k == 0) throw InvalidArgument("semantic_clustering of an empty circuit");
  if (k > max_gates) throw InvalidArgument("semantic_clustering: gate count over the enumeration cap");
  SemCache cache{gate_polys, rng, {}};
  std::function<std::uint64_t(Mask)> dist_of = [&](Mask m) { return cache(m); };
  std::function<std::uint64_t(Mask)> rank_of = [&](Mask m) { return std::max<std::uint64_t>(1, cache(m)); };
  Choice c = best_partition(k, tau, 0, rank_of, dist_of);
  Clustering out;
  out.kind = ClusterKind::Semantic;
  out.tau = tau;
  out.partition = c.partition;
  out.r = c.r;
  out.raw_r = c.raw;
  fill_measures(out, rank_of, dist_of);
  return out;
}

Clustering semantic_clustering(const DepthThreeCircuit& C, std::uint64_t tau, Rng& rng, size_t max_gates) {
  std::vector<MultiPoly> polys;
  for (const auto& g : C.gates) polys.push_back(expand_gate(C.field, C.num_vars, g));
  return semantic_clustering(polys, tau, rng, max_gates);
}

}  // namespace d3r
