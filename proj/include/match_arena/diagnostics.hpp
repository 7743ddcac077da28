#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "match_arena/graph.hpp"
#include "match_arena/rounding.hpp"
#include "match_arena/selection.hpp"

namespace match_arena {

/// z(u', w): the z-value of w recorded when u' arrived, for every potential
/// arc, with prefix sums so a blocking set costs one lookup.
class BlockingWeights {
 public:
  BlockingWeights(const ArrivalInstance& inst, const RoundingPlan& plan);
  BlockingWeights(const ArrivalInstance& inst, const std::function<double(VertexId, VertexId)>& z);

  /// z of the arc (source, target); 0 if it is not a potential arc.
  double arc_z(VertexId source, VertexId target) const;
  /// z(B(source, target)): arcs (u', target) with target < u' < source.
  double blocking_mass(VertexId source, VertexId target) const;

 private:
  // Per target: later neighbors in arrival order and prefix sums of their z.
  std::vector<std::vector<VertexId>> later_;
  std::vector<std::vector<double>> prefix_;
};

struct PathStat {
  std::size_t length = 0;      // arcs on the primary path rooted here
  double blocking_mass = 0.0;  // z(B(P))
};

/// Per root vertex, the primary path of H_tau and its blocking mass.
std::vector<PathStat> primary_path_stats(const PrunedGraph& h, const BlockingWeights& w);

struct CertifiedPath {
  std::vector<VertexId> vertices;  // root first
  std::optional<Arc> terminator;   // T; empty when the last vertex picked no primary arc
  double blocking_mass = 0.0;      // z(B(P, T))
};

/// The certified primary path rooted at `root`. The path is the maximal one
/// in H_tau; when its last vertex w picked a primary arc (w, w'') in G_tau
/// that was pruned, T is the earliest primary arc into w''.
CertifiedPath certified_path(VertexId root, const SelectionGraph& g, const PrunedGraph& h,
                             const BlockingWeights& w);

struct GoodVertexParams {
  std::size_t length_threshold = 5;  // L
  double prob_threshold = 0.05;      // delta
  std::size_t samples = 10000;

  /// Throws std::invalid_argument unless L >= 1, delta in (0, 1), samples >= 1.
  void validate() const;
};

struct Proportion {
  std::size_t hits = 0;
  std::size_t samples = 0;
  double estimate = 0.0;
  double lower = 0.0;  // Wilson score interval
  double upper = 0.0;
};

Proportion wilson_proportion(std::size_t hits, std::size_t samples, double z = 1.96);

struct VertexClass {
  VertexId vertex = 0;
  Proportion long_path;
  bool good = true;
};

struct GoodVertexReport {
  GoodVertexParams params;
  std::vector<VertexClass> vertices;
  RoundingPlan plan;
};

/// Monte Carlo over tau drawn from the improved plan of (inst, cfg). Sample s
/// uses SplitMix64(derive_seed(cfg.seed ^ salt, s)), so results do not depend
/// on the worker count.
GoodVertexReport estimate_long_path_prob(const ArrivalInstance& inst, const RoundingConfig& cfg,
                                         const GoodVertexParams& params);

struct TailCell {
  VertexId vertex = 0;
  double k = 0.0;
  std::size_t exceed = 0;
  std::size_t samples = 0;
  double frequency = 0.0;
  double bound = 0.0;  // e^{-k/2}
  double sigma = 0.0;  // sqrt(b (1 - b) / samples) at b = bound
  bool within = true;  // frequency <= bound + 4 sigma
};

struct TailReport {
  std::vector<TailCell> cells;  // vertex-major, k in grid order
  bool all_within = true;
};

/// Frequency of z(B(P, T)) >= k for the certified path rooted at each vertex.
TailReport tail_bound_report(const ArrivalInstance& inst, const RoundingConfig& cfg,
                             const std::vector<double>& k_grid, std::size_t samples);
/// Same, with the plan already built.
TailReport tail_bound_report(const ArrivalInstance& inst, const RoundingPlan& plan,
                             const std::vector<double>& k_grid, std::size_t samples,
                             std::uint64_t seed);

/// Bad vertices against the fractional value. Reported only.
struct BadVertexReport {
  std::size_t bad_count = 0;
  std::size_t vertex_count = 0;
  double fractional_value = 0.0;  // sum x
  double scaled_value = 0.0;      // eps^3 sum x
  double bad_incident_mass = 0.0; // sum of x over edges touching a bad vertex
};

BadVertexReport bad_vertex_report(const GoodVertexReport& report, double epsilon);

/// Columns: vertex,samples,long_path_freq,classification,k,tail_freq,tail_bound.
/// One line per (vertex, k); k and the tail columns are empty when the tail
/// report has no cell for the vertex.
void write_diagnostics_csv(std::ostream& out, const GoodVertexReport& good, const TailReport& tail);

}  // namespace match_arena
