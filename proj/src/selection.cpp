#include "match_arena/selection.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace match_arena {

namespace {

void require_neighbor(const ArrivalInstance& inst, VertexId v, VertexId u) {
  const auto nbrs = inst.earlier_neighbors(v);
  if (!std::binary_search(nbrs.begin(), nbrs.end(), u))
    throw std::invalid_argument("vertex " + std::to_string(v) + " selected " + std::to_string(u) +
                                ", which is not an earlier neighbor");
}

}  // namespace

std::vector<std::optional<VertexId>> PrunedGraph::primary_targets() const {
  std::vector<std::optional<VertexId>> out(num_vertices);
  for (const Arc& a : arcs)
    if (a.kind == ArcKind::Primary) out[a.source] = a.target;
  return out;
}

std::vector<std::optional<VertexId>> PrunedGraph::secondary_targets() const {
  std::vector<std::optional<VertexId>> out(num_vertices);
  for (const Arc& a : arcs)
    if (a.kind == ArcKind::Secondary) out[a.source] = a.target;
  return out;
}

SelectionGraph build_selection(const ArrivalInstance& inst, const ArcProfile& profile) {
  if (profile.choices.size() > inst.size())
    throw std::invalid_argument("arc profile has more vertices than the instance");
  SelectionGraph g;
  g.num_vertices = inst.size();
  for (VertexId v = 0; v < profile.choices.size(); ++v) {
    const ArcChoice& c = profile.choices[v];
    if (c.primary) {
      require_neighbor(inst, v, *c.primary);
      g.arcs.push_back({v, *c.primary, ArcKind::Primary});
    }
    if (c.secondary_kept()) {
      require_neighbor(inst, v, *c.secondary);
      g.arcs.push_back({v, *c.secondary, ArcKind::Secondary});
    }
  }
  return g;
}

PrunedGraph prune_selection(const SelectionGraph& g) {
  // Earliest source of a primary arc into each target.
  std::vector<std::optional<VertexId>> first_primary(g.num_vertices);
  for (const Arc& a : g.arcs) {
    if (a.kind != ArcKind::Primary) continue;
    auto& first = first_primary.at(a.target);
    if (!first || a.source < *first) first = a.source;
  }
  PrunedGraph h;
  h.num_vertices = g.num_vertices;
  for (const Arc& a : g.arcs) {
    const auto& first = first_primary[a.target];
    if (first && *first < a.source) continue;
    if (a.kind == ArcKind::Secondary && first && *first == a.source) continue;
    h.arcs.push_back(a);
  }
  return h;
}

namespace {

template <class OnArrival>
void run_greedy(const PrunedGraph& h, OnArrival&& on_arrival) {
  const auto primary = h.primary_targets();
  const auto secondary = h.secondary_targets();
  std::vector<bool> matched(h.num_vertices, false);
  for (VertexId v = 0; v < h.num_vertices; ++v) {
    std::optional<VertexId> partner;
    if (primary[v] && !matched[*primary[v]]) partner = primary[v];
    else if (secondary[v] && !matched[*secondary[v]]) partner = secondary[v];
    if (partner) matched[*partner] = matched[v] = true;
    on_arrival(v, partner, matched);
  }
}

}  // namespace

Matching greedy_match_pruned(const PrunedGraph& h, const ArrivalInstance& inst) {
  if (h.num_vertices != inst.size()) throw std::invalid_argument("pruned graph/instance size mismatch");
  Matching m;
  run_greedy(h, [&](VertexId v, std::optional<VertexId> partner, const std::vector<bool>&) {
    if (partner) m.edges.emplace_back(*partner, v);
  });
  return m;
}

std::vector<std::vector<bool>> matched_status_trace(const PrunedGraph& h) {
  std::vector<std::vector<bool>> trace;
  trace.reserve(h.num_vertices);
  run_greedy(h, [&](VertexId, std::optional<VertexId>, const std::vector<bool>& matched) {
    trace.push_back(matched);
  });
  return trace;
}

}  // namespace match_arena
