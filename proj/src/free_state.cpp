#include "match_arena/free_state.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "plan_builder.hpp"

namespace match_arena {

FreeStateDistribution::FreeStateDistribution(std::size_t num_vertices, std::size_t max_support)
    : num_vertices_(num_vertices), max_support_(max_support), states_{{0u, 1.0}} {
  if (num_vertices > kMaxVertices)
    throw std::runtime_error("probability engine exhausted: " + std::to_string(num_vertices) +
                             " vertices exceed the exact engine cap");
}

double FreeStateDistribution::total_mass() const {
  double total = 0.0;
  for (const auto& [mask, p] : states_) total += p;
  return total;
}

double FreeStateDistribution::free_probability(VertexId u) const {
  const std::uint32_t bit = 1u << u;
  double total = 0.0;
  for (const auto& [mask, p] : states_)
    if (!(mask & bit)) total += p;
  return total;
}

double FreeStateDistribution::joint_free_probability(VertexId u, VertexId w) const {
  const std::uint32_t bits = (1u << u) | (1u << w);
  double total = 0.0;
  for (const auto& [mask, p] : states_)
    if (!(mask & bits)) total += p;
  return total;
}

double FreeStateDistribution::conditional_free(VertexId w, VertexId given) const {
  const double base = free_probability(given);
  return base > 0.0 ? joint_free_probability(w, given) / base : 0.0;
}

std::vector<double> FreeStateDistribution::apply_arrival(const ArrivalPlan& plan) {
  const std::size_t degree = plan.degree();
  const std::uint32_t self = 1u << plan.vertex;
  std::vector<double> match_prob(degree, 0.0);
  std::unordered_map<std::uint32_t, double> next;
  next.reserve(states_.size() * (degree + 1));

  for (const auto& [mask, p] : states_) {
    double first_succeeds = 0.0;
    for (std::size_t i = 0; i < degree; ++i)
      if (!(mask & (1u << plan.neighbors[i]))) first_succeeds += plan.z_norm[i];
    const double first_fails = 1.0 - first_succeeds;

    double moved = 0.0;
    for (std::size_t i = 0; i < degree; ++i) {
      const std::uint32_t bit = 1u << plan.neighbors[i];
      if (mask & bit) continue;
      const double via_first = plan.z_norm[i];
      const double via_second = first_fails * plan.second_prob * plan.z_norm[i] * plan.keep[i];
      const double mass = p * (via_first + via_second);
      if (mass <= 0.0) continue;
      next[mask | bit | self] += mass;
      match_prob[i] += mass;
      moved += mass;
    }
    const double stay = p - moved;
    if (stay > 0.0) next[mask] += stay;
  }

  if (next.size() > max_support_)
    throw std::runtime_error("probability engine exhausted: support exceeds " +
                             std::to_string(max_support_) + " states");
  states_.assign(next.begin(), next.end());
  std::sort(states_.begin(), states_.end());
  return match_prob;
}

FreeStateDistribution exact_free_distribution(const ArrivalInstance& inst, const RoundingConfig& cfg,
                                              std::size_t upto) {
  cfg.validate();
  const auto* exact = std::get_if<ExactEngine>(&cfg.engine);
  if (exact && inst.size() > exact->max_n)
    throw std::runtime_error("probability engine exhausted: exact engine capped at " +
                             std::to_string(exact->max_n) + " vertices");
  FreeStateDistribution dist(inst.size());
  detail::build_improved_plan(
      inst, cfg, dist, [&](ArrivalPlan& plan) { plan.match_prob = dist.apply_arrival(plan); }, upto);
  return dist;
}

}  // namespace match_arena
