#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "match_arena/graph.hpp"
#include "match_arena/rounding.hpp"

namespace match_arena {

/// Exact distribution over which vertices are matched. Each support entry is a
/// bitmask of matched vertices; every other arrived vertex is free.
class FreeStateDistribution {
 public:
  static constexpr std::size_t kMaxVertices = 22;

  /// Starts from "nothing matched" with probability 1.
  explicit FreeStateDistribution(std::size_t num_vertices,
                                 std::size_t max_support = std::size_t{1} << 22);

  std::size_t num_vertices() const { return num_vertices_; }
  std::size_t support_size() const { return states_.size(); }
  const std::vector<std::pair<std::uint32_t, double>>& states() const { return states_; }

  double total_mass() const;
  double free_probability(VertexId u) const;
  double joint_free_probability(VertexId u, VertexId w) const;
  /// Pr[F_w | F_given]; 0 when Pr[F_given] is 0.
  double conditional_free(VertexId w, VertexId given) const;

  /// Advances through one arrival. Returns Pr[{u, v} in M] per neighbor.
  /// Throws std::runtime_error once the support exceeds its cap.
  std::vector<double> apply_arrival(const ArrivalPlan& plan);

 private:
  std::size_t num_vertices_;
  std::size_t max_support_;
  std::vector<std::pair<std::uint32_t, double>> states_;  // sorted by mask
};

/// Distribution after the first `upto` arrivals of the improved rounding.
FreeStateDistribution exact_free_distribution(const ArrivalInstance& inst, const RoundingConfig& cfg,
                                              std::size_t upto);

}  // namespace match_arena
