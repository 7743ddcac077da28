#include "match_arena/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "match_arena/format.hpp"
#include "match_arena/parallel.hpp"
#include "match_arena/random.hpp"

namespace match_arena {

namespace {

constexpr std::uint64_t kTauSalt = 0x7a75u;

std::vector<std::vector<VertexId>> later_neighbors(const ArrivalInstance& inst) {
  std::vector<std::vector<VertexId>> later(inst.size());
  for (VertexId v = 0; v < inst.size(); ++v)
    for (VertexId u : inst.earlier_neighbors(v)) later[u].push_back(v);
  return later;  // already ascending since v runs in order
}

}  // namespace

BlockingWeights::BlockingWeights(const ArrivalInstance& inst,
                                 const std::function<double(VertexId, VertexId)>& z)
    : later_(later_neighbors(inst)), prefix_(inst.size()) {
  for (VertexId w = 0; w < inst.size(); ++w) {
    auto& sums = prefix_[w];
    sums.assign(later_[w].size() + 1, 0.0);
    for (std::size_t i = 0; i < later_[w].size(); ++i) sums[i + 1] = sums[i] + z(later_[w][i], w);
  }
}

BlockingWeights::BlockingWeights(const ArrivalInstance& inst, const RoundingPlan& plan)
    : BlockingWeights(inst, [&](VertexId source, VertexId target) {
        const ArrivalPlan& a = plan.arrivals.at(source);
        const auto it = std::find(a.neighbors.begin(), a.neighbors.end(), target);
        if (it == a.neighbors.end()) throw std::invalid_argument("plan is missing an instance arc");
        return a.z[static_cast<std::size_t>(it - a.neighbors.begin())];
      }) {}

double BlockingWeights::arc_z(VertexId source, VertexId target) const {
  const auto& later = later_.at(target);
  const auto it = std::lower_bound(later.begin(), later.end(), source);
  if (it == later.end() || *it != source) return 0.0;
  const auto i = static_cast<std::size_t>(it - later.begin());
  return prefix_[target][i + 1] - prefix_[target][i];
}

double BlockingWeights::blocking_mass(VertexId source, VertexId target) const {
  const auto& later = later_.at(target);
  const auto count = static_cast<std::size_t>(std::lower_bound(later.begin(), later.end(), source) -
                                              later.begin());
  return prefix_[target][count];
}

std::vector<PathStat> primary_path_stats(const PrunedGraph& h, const BlockingWeights& w) {
  const auto primary = h.primary_targets();
  std::vector<PathStat> stats(h.num_vertices);
  // Targets precede sources, so one pass in arrival order suffices. Targets
  // along a path are distinct, so the blocking sets are disjoint.
  for (VertexId v = 0; v < h.num_vertices; ++v) {
    if (!primary[v]) continue;
    const VertexId t = *primary[v];
    stats[v].length = stats[t].length + 1;
    stats[v].blocking_mass = stats[t].blocking_mass + w.blocking_mass(v, t);
  }
  return stats;
}

namespace {

struct PrimaryIndex {
  std::vector<std::optional<VertexId>> g_primary;      // per source, in G_tau
  std::vector<std::optional<VertexId>> h_primary;      // per source, in H_tau
  std::vector<std::optional<VertexId>> first_source;   // per target, earliest primary source
};

PrimaryIndex index_primaries(const SelectionGraph& g, const PrunedGraph& h) {
  PrimaryIndex idx;
  idx.g_primary.resize(g.num_vertices);
  idx.first_source.resize(g.num_vertices);
  for (const Arc& a : g.arcs) {
    if (a.kind != ArcKind::Primary) continue;
    idx.g_primary[a.source] = a.target;
    auto& first = idx.first_source[a.target];
    if (!first || a.source < *first) first = a.source;
  }
  idx.h_primary = h.primary_targets();
  return idx;
}

CertifiedPath certified_path(VertexId root, const PrimaryIndex& idx, const BlockingWeights& w) {
  CertifiedPath path;
  VertexId cur = root;
  path.vertices.push_back(cur);
  while (idx.h_primary[cur]) {
    const VertexId next = *idx.h_primary[cur];
    path.blocking_mass += w.blocking_mass(cur, next);
    cur = next;
    path.vertices.push_back(cur);
  }
  if (idx.g_primary[cur]) {
    const VertexId target = *idx.g_primary[cur];
    const VertexId blocker = *idx.first_source[target];
    path.terminator = Arc{blocker, target, ArcKind::Primary};
    // target precedes every vertex of P, so B(T) is disjoint from B(P).
    path.blocking_mass += w.blocking_mass(blocker, target);
  }
  return path;
}

}  // namespace

CertifiedPath certified_path(VertexId root, const SelectionGraph& g, const PrunedGraph& h,
                             const BlockingWeights& w) {
  if (root >= g.num_vertices || g.num_vertices != h.num_vertices)
    throw std::invalid_argument("root outside the selection graph");
  return certified_path(root, index_primaries(g, h), w);
}

void GoodVertexParams::validate() const {
  if (length_threshold < 1) throw std::invalid_argument("length threshold must be >= 1");
  if (!(prob_threshold > 0.0 && prob_threshold < 1.0))
    throw std::invalid_argument("probability threshold must lie in (0, 1)");
  if (samples == 0) throw std::invalid_argument("need at least one sample");
}

Proportion wilson_proportion(std::size_t hits, std::size_t samples, double z) {
  if (samples == 0) throw std::invalid_argument("proportion of zero samples");
  Proportion p;
  p.hits = hits;
  p.samples = samples;
  const double n = static_cast<double>(samples);
  const double phat = static_cast<double>(hits) / n;
  p.estimate = phat;
  const double z2 = z * z;
  const double centre = (phat + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z / (1 + z2 / n) * std::sqrt(phat * (1 - phat) / n + z2 / (4 * n * n));
  p.lower = std::max(0.0, centre - half);
  p.upper = std::min(1.0, centre + half);
  return p;
}

namespace {

// Draws tau for samples [0, count) across workers and hands each sample's
// (G, H) to visit(worker, g, h). Per-worker accumulators keep the sums
// independent of scheduling.
template <class Visit>
void for_each_tau(const ArrivalInstance& inst, const RoundingPlan& plan, std::size_t count,
                  std::uint64_t seed, std::size_t workers, Visit&& visit) {
  parallel_chunks(count, workers, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) {
      SplitMix64 gen(derive_seed(seed ^ kTauSalt, s));
      const ArcProfile profile = sample_profile(plan, gen);
      const SelectionGraph g = build_selection(inst, profile);
      const PrunedGraph h = prune_selection(g);
      visit(chunk, g, h);
    }
  });
}

}  // namespace

GoodVertexReport estimate_long_path_prob(const ArrivalInstance& inst, const RoundingConfig& cfg,
                                         const GoodVertexParams& params) {
  params.validate();
  GoodVertexReport report;
  report.params = params;
  report.plan = plan_improved(inst, cfg);
  const BlockingWeights weights(inst, report.plan);

  const std::size_t n = inst.size();
  const std::size_t workers = std::min(worker_count(), params.samples);
  std::vector<std::vector<std::size_t>> hits(workers, std::vector<std::size_t>(n, 0));
  for_each_tau(inst, report.plan, params.samples, cfg.seed, workers,
               [&](std::size_t chunk, const SelectionGraph&, const PrunedGraph& h) {
                 const auto stats = primary_path_stats(h, weights);
                 for (VertexId v = 0; v < n; ++v)
                   if (stats[v].length >= params.length_threshold) ++hits[chunk][v];
               });

  for (VertexId v = 0; v < n; ++v) {
    std::size_t total = 0;
    for (const auto& h : hits) total += h[v];
    VertexClass c;
    c.vertex = v;
    c.long_path = wilson_proportion(total, params.samples);
    c.good = c.long_path.estimate <= params.prob_threshold;
    report.vertices.push_back(c);
  }
  return report;
}

TailReport tail_bound_report(const ArrivalInstance& inst, const RoundingPlan& plan,
                             const std::vector<double>& k_grid, std::size_t samples,
                             std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("need at least one sample");
  const BlockingWeights weights(inst, plan);
  const std::size_t n = inst.size();
  const std::size_t cells = n * k_grid.size();
  const std::size_t workers = std::min(worker_count(), samples);
  std::vector<std::vector<std::size_t>> exceed(workers, std::vector<std::size_t>(cells, 0));

  for_each_tau(inst, plan, samples, seed, workers,
               [&](std::size_t chunk, const SelectionGraph& g, const PrunedGraph& h) {
                 const PrimaryIndex idx = index_primaries(g, h);
                 for (VertexId v = 0; v < n; ++v) {
                   const double mass = certified_path(v, idx, weights).blocking_mass;
                   for (std::size_t j = 0; j < k_grid.size(); ++j)
                     if (mass >= k_grid[j]) ++exceed[chunk][v * k_grid.size() + j];
                 }
               });

  TailReport report;
  for (VertexId v = 0; v < n; ++v) {
    for (std::size_t j = 0; j < k_grid.size(); ++j) {
      TailCell cell;
      cell.vertex = v;
      cell.k = k_grid[j];
      cell.samples = samples;
      for (const auto& e : exceed) cell.exceed += e[v * k_grid.size() + j];
      cell.frequency = static_cast<double>(cell.exceed) / static_cast<double>(samples);
      cell.bound = std::min(1.0, std::exp(-cell.k / 2.0));
      cell.sigma = std::sqrt(cell.bound * (1.0 - cell.bound) / static_cast<double>(samples));
      cell.within = cell.frequency <= cell.bound + 4.0 * cell.sigma;
      report.all_within = report.all_within && cell.within;
      report.cells.push_back(cell);
    }
  }
  return report;
}

TailReport tail_bound_report(const ArrivalInstance& inst, const RoundingConfig& cfg,
                             const std::vector<double>& k_grid, std::size_t samples) {
  return tail_bound_report(inst, plan_improved(inst, cfg), k_grid, samples, cfg.seed);
}

BadVertexReport bad_vertex_report(const GoodVertexReport& report, double epsilon) {
  BadVertexReport out;
  out.vertex_count = report.vertices.size();
  std::vector<bool> bad(report.vertices.size(), false);
  for (const auto& c : report.vertices) {
    if (c.good) continue;
    bad[c.vertex] = true;
    ++out.bad_count;
  }
  for (const auto& [e, x] : report.plan.fractional.x) {
    out.fractional_value += x;
    if (bad.at(e.u) || bad.at(e.v)) out.bad_incident_mass += x;
  }
  out.scaled_value = epsilon * epsilon * epsilon * out.fractional_value;
  return out;
}

void write_diagnostics_csv(std::ostream& out, const GoodVertexReport& good, const TailReport& tail) {
  out << "vertex,samples,long_path_freq,classification,k,tail_freq,tail_bound\n";
  for (const auto& c : good.vertices) {
    auto prefix = [&] {
      out << c.vertex << ',' << c.long_path.samples << ',' << format_real(c.long_path.estimate) << ','
          << (c.good ? "good" : "bad") << ',';
    };
    bool any = false;
    for (const auto& cell : tail.cells) {
      if (cell.vertex != c.vertex) continue;
      any = true;
      prefix();
      out << format_real(cell.k) << ',' << format_real(cell.frequency) << ','
          << format_real(cell.bound) << '\n';
    }
    if (!any) {
      prefix();
      out << ",,\n";
    }
  }
}

}  // namespace match_arena
