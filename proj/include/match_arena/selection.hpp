#pragma once

#include <optional>
#include <vector>

#include "match_arena/graph.hpp"
#include "match_arena/rounding.hpp"

namespace match_arena {

enum class ArcKind { Primary, Secondary };

/// Arc from a vertex to the earlier neighbor it selected.
struct Arc {
  VertexId source = 0;
  VertexId target = 0;
  ArcKind kind = ArcKind::Primary;

  bool operator==(const Arc&) const = default;
};

/// G_tau: every primary arc and every kept secondary arc, in arrival order of
/// the source (primary before secondary for the same source).
struct SelectionGraph {
  std::size_t num_vertices = 0;
  std::vector<Arc> arcs;
};

/// H_tau: the arcs of G_tau that survive pruning, same order.
struct PrunedGraph {
  std::size_t num_vertices = 0;
  std::vector<Arc> arcs;

  /// Per source vertex, the surviving primary / secondary target.
  std::vector<std::optional<VertexId>> primary_targets() const;
  std::vector<std::optional<VertexId>> secondary_targets() const;
};

/// Throws std::invalid_argument when a choice is not an earlier neighbor.
SelectionGraph build_selection(const ArrivalInstance& inst, const ArcProfile& profile);

/// Drops every arc (v, u) that has a primary arc (v', u) with v' < v, and the
/// secondary (v, u) when (v, u) is also primary.
PrunedGraph prune_selection(const SelectionGraph& g);

/// Greedy in arrival order: surviving primary target if free, else surviving
/// secondary target if free.
Matching greedy_match_pruned(const PrunedGraph& h, const ArrivalInstance& inst);

/// matched[t][u]: matched status of u after the first t + 1 arrivals of the
/// greedy matching on H_tau.
std::vector<std::vector<bool>> matched_status_trace(const PrunedGraph& h);

}  // namespace match_arena
