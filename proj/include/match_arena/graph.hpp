#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace match_arena {

/// Vertex identifier. Equal to the vertex's 0-based arrival position.
using VertexId = std::uint32_t;

/// Undirected edge stored with `u < v`.
struct Edge {
  VertexId u = 0;
  VertexId v = 0;

  Edge() = default;
  Edge(VertexId a, VertexId b) : u(a < b ? a : b), v(a < b ? b : a) {}

  VertexId other(VertexId w) const { return w == u ? v : u; }
  bool touches(VertexId w) const { return w == u || w == v; }

  auto operator<=>(const Edge&) const = default;
};

/// Simple undirected graph with sorted adjacency lists.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t num_vertices);

  /// Adds {a, b}. Throws on self loops, out-of-range endpoints and duplicates.
  void add_edge(VertexId a, VertexId b);

  std::size_t num_vertices() const { return adjacency_.size(); }
  std::size_t num_edges() const { return edges_.size(); }
  std::span<const VertexId> neighbors(VertexId v) const { return adjacency_.at(v); }
  const std::vector<Edge>& edges() const { return edges_; }
  bool has_edge(VertexId a, VertexId b) const;

 private:
  std::vector<std::vector<VertexId>> adjacency_;
  std::vector<Edge> edges_;
};

/// General vertex arrivals: vertex v arrives together with the sorted list of
/// its earlier-arriving neighbors.
class ArrivalInstance {
 public:
  ArrivalInstance() = default;

  /// Validates that every listed neighbor precedes its vertex and that lists
  /// are duplicate free. Lists are sorted on construction.
  explicit ArrivalInstance(std::vector<std::vector<VertexId>> earlier_neighbors);

  /// Builds the instance induced by a graph whose vertex ids are arrival order.
  static ArrivalInstance from_graph(const Graph& g);

  std::size_t size() const { return earlier_.size(); }
  std::span<const VertexId> earlier_neighbors(VertexId v) const { return earlier_.at(v); }

  /// Edges in arrival order: by later endpoint, then by earlier endpoint.
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t num_edges() const { return edges_.size(); }

  /// Position of an edge in `edges()`; throws std::out_of_range if absent.
  std::size_t edge_index(const Edge& e) const;

  Graph graph() const;
  /// Instance restricted to the first `count` arrivals.
  ArrivalInstance prefix(std::size_t count) const;

 private:
  std::vector<std::vector<VertexId>> earlier_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> first_edge_;  // offset of v's edges in edges_
};

/// Edge arrivals over a fixed vertex set.
class EdgeArrivalInstance {
 public:
  EdgeArrivalInstance() = default;
  EdgeArrivalInstance(std::size_t num_vertices, std::vector<Edge> edges);

  std::size_t num_vertices() const { return num_vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }

  Graph graph() const { return graph_prefix(edges_.size()); }
  Graph graph_prefix(std::size_t edge_count) const;

 private:
  std::size_t num_vertices_ = 0;
  std::vector<Edge> edges_;
};

struct Matching {
  std::vector<Edge> edges;

  std::size_t size() const { return edges.size(); }
  /// mate[v] == v when v is unmatched.
  std::vector<VertexId> mates(std::size_t num_vertices) const;
};

/// True iff the edges are pairwise vertex-disjoint instance edges.
bool is_valid_matching(const Graph& g, const Matching& m);

/// Maximum-cardinality matching for general graphs.
Matching maximum_matching(const Graph& g);

/// Exhaustive-search maximum matching. Throws std::invalid_argument when the
/// graph has more than `vertex_limit` vertices.
Matching brute_force_max_matching(const Graph& g, std::size_t vertex_limit = 12);

using FractionalAssignment = std::map<Edge, double>;

struct FeasibilityReport {
  bool feasible = true;
  double max_load = 0.0;
  double min_value = 0.0;
  VertexId worst_vertex = 0;
};

/// Checks membership in the fractional matching polytope up to `tol`.
/// Throws std::invalid_argument if `x` has a key that is not a graph edge.
FeasibilityReport check_fractional_feasibility(const FractionalAssignment& x, const Graph& g,
                                               double tol = 1e-9);

double fractional_value(const FractionalAssignment& x);

/// Per-vertex sum of incident values.
std::vector<double> fractional_loads(const FractionalAssignment& x, std::size_t num_vertices);

}  // namespace match_arena
