#include "match_arena/graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>

namespace match_arena {

Graph::Graph(std::size_t num_vertices) : adjacency_(num_vertices) {}

void Graph::add_edge(VertexId a, VertexId b) {
  if (a == b) throw std::invalid_argument("self loop at vertex " + std::to_string(a));
  if (a >= num_vertices() || b >= num_vertices())
    throw std::invalid_argument("edge endpoint out of range");
  if (has_edge(a, b))
    throw std::invalid_argument("duplicate edge " + std::to_string(a) + "-" + std::to_string(b));
  auto insert_sorted = [](std::vector<VertexId>& list, VertexId w) {
    list.insert(std::lower_bound(list.begin(), list.end(), w), w);
  };
  insert_sorted(adjacency_[a], b);
  insert_sorted(adjacency_[b], a);
  edges_.emplace_back(a, b);
}

bool Graph::has_edge(VertexId a, VertexId b) const {
  if (a >= num_vertices() || b >= num_vertices()) return false;
  const auto& list = adjacency_[a];
  return std::binary_search(list.begin(), list.end(), b);
}

ArrivalInstance::ArrivalInstance(std::vector<std::vector<VertexId>> earlier_neighbors)
    : earlier_(std::move(earlier_neighbors)) {
  first_edge_.reserve(earlier_.size() + 1);
  for (VertexId v = 0; v < earlier_.size(); ++v) {
    auto& list = earlier_[v];
    std::sort(list.begin(), list.end());
    if (std::adjacent_find(list.begin(), list.end()) != list.end())
      throw std::invalid_argument("duplicate neighbor of vertex " + std::to_string(v));
    if (!list.empty() && list.back() >= v)
      throw std::invalid_argument("vertex " + std::to_string(v) +
                                  " lists a neighbor that has not arrived");
    first_edge_.push_back(edges_.size());
    for (VertexId u : list) edges_.emplace_back(u, v);
  }
  first_edge_.push_back(edges_.size());
}

ArrivalInstance ArrivalInstance::from_graph(const Graph& g) {
  std::vector<std::vector<VertexId>> lists(g.num_vertices());
  for (const Edge& e : g.edges()) lists[e.v].push_back(e.u);
  return ArrivalInstance(std::move(lists));
}

std::size_t ArrivalInstance::edge_index(const Edge& e) const {
  if (e.v >= earlier_.size()) throw std::out_of_range("edge endpoint out of range");
  const auto& list = earlier_[e.v];
  auto it = std::lower_bound(list.begin(), list.end(), e.u);
  if (it == list.end() || *it != e.u) throw std::out_of_range("edge not in instance");
  return first_edge_[e.v] + static_cast<std::size_t>(it - list.begin());
}

Graph ArrivalInstance::graph() const {
  Graph g(size());
  for (const Edge& e : edges_) g.add_edge(e.u, e.v);
  return g;
}

ArrivalInstance ArrivalInstance::prefix(std::size_t count) const {
  count = std::min(count, size());
  return ArrivalInstance({earlier_.begin(), earlier_.begin() + static_cast<std::ptrdiff_t>(count)});
}

EdgeArrivalInstance::EdgeArrivalInstance(std::size_t num_vertices, std::vector<Edge> edges)
    : num_vertices_(num_vertices), edges_(std::move(edges)) {
  // Graph construction performs the range and duplicate checks.
  (void)graph();
}

Graph EdgeArrivalInstance::graph_prefix(std::size_t edge_count) const {
  Graph g(num_vertices_);
  edge_count = std::min(edge_count, edges_.size());
  for (std::size_t i = 0; i < edge_count; ++i) g.add_edge(edges_[i].u, edges_[i].v);
  return g;
}

std::vector<VertexId> Matching::mates(std::size_t num_vertices) const {
  std::vector<VertexId> mate(num_vertices);
  for (VertexId v = 0; v < num_vertices; ++v) mate[v] = v;
  for (const Edge& e : edges) {
    mate.at(e.u) = e.v;
    mate.at(e.v) = e.u;
  }
  return mate;
}

bool is_valid_matching(const Graph& g, const Matching& m) {
  std::vector<bool> used(g.num_vertices(), false);
  for (const Edge& e : m.edges) {
    if (!g.has_edge(e.u, e.v)) return false;
    if (used[e.u] || used[e.v]) return false;
    used[e.u] = used[e.v] = true;
  }
  return true;
}

Matching maximum_matching(const Graph& g) {
  using BoostGraph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  using Descriptor = boost::graph_traits<BoostGraph>::vertex_descriptor;
  BoostGraph bg(g.num_vertices());
  for (const Edge& e : g.edges()) boost::add_edge(e.u, e.v, bg);
  std::vector<Descriptor> mate(g.num_vertices());
  boost::edmonds_maximum_cardinality_matching(bg, mate.data());

  Matching m;
  const auto null_vertex = boost::graph_traits<BoostGraph>::null_vertex();
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (mate[v] != null_vertex && v < mate[v])
      m.edges.emplace_back(v, static_cast<VertexId>(mate[v]));
  }
  return m;
}

namespace {

// Branch on the lowest undecided vertex: leave it unmatched, or match it to
// each free neighbor in turn.
void brute_force_search(const Graph& g, std::vector<bool>& used, std::vector<Edge>& current,
                        VertexId next, std::vector<Edge>& best) {
  while (next < g.num_vertices() && used[next]) ++next;
  if (next >= g.num_vertices()) {
    if (current.size() > best.size()) best = current;
    return;
  }
  // Upper bound: every remaining free vertex pairs up.
  std::size_t free_left = 0;
  for (VertexId w = next; w < g.num_vertices(); ++w) free_left += used[w] ? 0 : 1;
  if (current.size() + free_left / 2 <= best.size()) return;

  used[next] = true;
  for (VertexId w : g.neighbors(next)) {
    if (used[w]) continue;
    used[w] = true;
    current.emplace_back(next, w);
    brute_force_search(g, used, current, next + 1, best);
    current.pop_back();
    used[w] = false;
  }
  brute_force_search(g, used, current, next + 1, best);
  used[next] = false;
}

}  // namespace

Matching brute_force_max_matching(const Graph& g, std::size_t vertex_limit) {
  if (g.num_vertices() > vertex_limit)
    throw std::invalid_argument("brute force matching limited to " +
                                std::to_string(vertex_limit) + " vertices");
  std::vector<bool> used(g.num_vertices(), false);
  std::vector<Edge> current;
  std::vector<Edge> best;
  brute_force_search(g, used, current, 0, best);
  return Matching{best};
}

FeasibilityReport check_fractional_feasibility(const FractionalAssignment& x, const Graph& g,
                                               double tol) {
  FeasibilityReport report;
  std::vector<double> load(g.num_vertices(), 0.0);
  for (const auto& [e, value] : x) {
    if (!g.has_edge(e.u, e.v))
      throw std::invalid_argument("fractional value on unknown edge " + std::to_string(e.u) +
                                  "-" + std::to_string(e.v));
    load[e.u] += value;
    load[e.v] += value;
    report.min_value = std::min(report.min_value, value);
  }
  for (VertexId v = 0; v < load.size(); ++v) {
    if (load[v] > report.max_load) {
      report.max_load = load[v];
      report.worst_vertex = v;
    }
  }
  report.feasible = report.max_load <= 1.0 + tol && report.min_value >= -tol;
  return report;
}

double fractional_value(const FractionalAssignment& x) {
  double total = 0.0;
  for (const auto& [e, value] : x) total += value;
  return total;
}

std::vector<double> fractional_loads(const FractionalAssignment& x, std::size_t num_vertices) {
  std::vector<double> load(num_vertices, 0.0);
  for (const auto& [e, value] : x) {
    load.at(e.u) += value;
    load.at(e.v) += value;
  }
  return load;
}

}  // namespace match_arena
