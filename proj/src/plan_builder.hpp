#pragma once

// Shared per-arrival planning for the exact and particle engines.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "match_arena/fractional.hpp"
#include "match_arena/rounding.hpp"

namespace match_arena::detail {

// Engine needs free_probability(u) and conditional_free(w, given).
template <class Engine>
ArrivalPlan plan_arrival(const ArrivalUpdate& update, const Engine& engine, double epsilon,
                         double z_floor) {
  ArrivalPlan plan;
  plan.vertex = update.vertex;
  const std::size_t degree = update.increments.size();
  plan.neighbors.reserve(degree);
  for (const auto& [u, value] : update.increments) {
    const double free = std::max(engine.free_probability(u), z_floor);
    const double z = std::clamp(value / free, 0.0, 1.0);
    plan.neighbors.push_back(u);
    plan.x.push_back(value);
    plan.free_prob.push_back(free);
    plan.z.push_back(z);
    plan.sum_z += z;
  }
  const double scale = std::max(1.0, plan.sum_z);
  plan.z_norm.reserve(degree);
  for (double z : plan.z) plan.z_norm.push_back(z / scale);
  plan.keep.assign(degree, 1.0);
  if (!plan.normalized()) return plan;

  plan.second_prob = std::sqrt(epsilon);
  std::vector<double> conditional(degree);
  for (std::size_t i = 0; i < degree; ++i) {
    for (std::size_t j = 0; j < degree; ++j)
      conditional[j] = i == j ? 1.0 : engine.conditional_free(plan.neighbors[j], plan.neighbors[i]);
    plan.keep[i] = keep_probability(plan.x[i], plan.free_prob[i], plan.z_norm[i], plan.second_prob,
                                    plan.z_norm, conditional);
  }
  return plan;
}

// Runs the fractional algorithm with kappa = 1 + 2 eps, beta = 2 - eps and
// plans each of the first `upto` arrivals; `apply(plan)` advances the engine.
template <class Engine, class Apply>
RoundingPlan build_improved_plan(const ArrivalInstance& inst, const RoundingConfig& cfg,
                                 Engine& engine, Apply&& apply,
                                 std::size_t upto = std::numeric_limits<std::size_t>::max()) {
  const WWParams params = WWParams::improved(cfg.epsilon);
  FractionalState state(inst.size());
  RoundingPlan result;
  upto = std::min(upto, inst.size());
  result.arrivals.reserve(upto);
  for (VertexId v = 0; v < upto; ++v) {
    ArrivalUpdate update = state.process_arrival(v, inst.earlier_neighbors(v), params);
    ArrivalPlan plan = plan_arrival(update, engine, cfg.epsilon, cfg.z_floor);
    apply(plan);
    result.fractional.trace.push_back({v, update.theta.theta, state.dual_value(), state.primal_value()});
    result.fractional.updates.push_back(std::move(update));
    result.arrivals.push_back(std::move(plan));
  }
  result.fractional.x = state.assignment();
  result.fractional.y.assign(state.duals().begin(), state.duals().end());
  return result;
}

}  // namespace match_arena::detail
