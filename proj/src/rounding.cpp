#include "match_arena/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

#include "match_arena/format.hpp"
#include "match_arena/free_state.hpp"
#include "match_arena/particles.hpp"
#include "plan_builder.hpp"

namespace match_arena {

void RoundingConfig::validate() const {
  if (!(epsilon > 0.0 && epsilon <= 0.09))
    throw std::invalid_argument("epsilon must lie in (0, 0.09]");
  if (!(z_floor > 0.0 && z_floor < 1.0)) throw std::invalid_argument("z_floor must lie in (0, 1)");
  if (const auto* exact = std::get_if<ExactEngine>(&engine)) {
    if (exact->max_n > FreeStateDistribution::kMaxVertices)
      throw std::invalid_argument("exact engine supports at most 22 vertices");
  } else if (std::get<ParticleEngine>(engine).particles < 1000) {
    throw std::invalid_argument("particle engine needs at least 1000 particles");
  }
}

std::optional<std::size_t> sample_index(std::span<const double> weights, double r) {
  double cumulative = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    cumulative += weights[i];
    if (r < cumulative) return i;
  }
  return std::nullopt;
}

ArcChoice sample_choice(const ArrivalPlan& plan, double r_first, double r_stage, double r_second,
                        double r_keep) {
  ArcChoice choice;
  if (auto i = sample_index(plan.z_norm, r_first)) choice.primary = plan.neighbors[*i];
  if (plan.second_prob > 0.0 && r_stage < plan.second_prob) {
    if (auto j = sample_index(plan.z_norm, r_second)) {
      choice.secondary = plan.neighbors[*j];
      choice.keep_threshold = plan.keep[*j];
    }
  }
  choice.keep_coin = r_keep;
  return choice;
}

Matching online_match(const ArrivalInstance& inst, const ArcProfile& profile) {
  if (profile.choices.size() != inst.size())
    throw std::invalid_argument("arc profile does not cover the instance");
  std::vector<bool> matched(inst.size(), false);
  Matching m;
  for (VertexId v = 0; v < inst.size(); ++v) {
    const ArcChoice& c = profile.choices[v];
    std::optional<VertexId> partner;
    if (c.primary && !matched[*c.primary]) partner = c.primary;
    else if (c.secondary_kept() && !matched[*c.secondary]) partner = c.secondary;
    if (partner) {
      matched[*partner] = matched[v] = true;
      m.edges.emplace_back(*partner, v);
    }
  }
  return m;
}

double keep_probability(double x_uv, double free_u, double z_norm_u, double sqrt_epsilon,
                        std::span<const double> z_norm, std::span<const double> conditional_free) {
  if (z_norm.size() != conditional_free.size())
    throw std::invalid_argument("keep_probability: missing conditional estimates");
  if (!std::isfinite(x_uv) || !std::isfinite(free_u) || !std::isfinite(z_norm_u))
    throw std::invalid_argument("keep_probability: missing marginal estimate");
  double first_fails = 0.0;
  for (std::size_t i = 0; i < z_norm.size(); ++i) {
    if (!std::isfinite(conditional_free[i]))
      throw std::invalid_argument("keep_probability: missing conditional estimate");
    first_fails += z_norm[i] * (1.0 - conditional_free[i]);
  }
  const double first = free_u * z_norm_u;
  const double second = first * sqrt_epsilon * first_fails;
  if (second <= 0.0) return 1.0;
  return std::clamp((x_uv - first) / second, 0.0, 1.0);
}

RoundingPlan plan_warmup(const ArrivalInstance& inst) {
  const WWParams params = WWParams::water_filling();
  FractionalState state(inst.size());
  RoundingPlan result;
  result.arrivals.reserve(inst.size());
  for (VertexId v = 0; v < inst.size(); ++v) {
    ArrivalUpdate update = state.process_arrival(v, inst.earlier_neighbors(v), params);
    ArrivalPlan plan;
    plan.vertex = v;
    for (std::size_t i = 0; i < update.increments.size(); ++i) {
      const auto [u, value] = update.increments[i];
      // Pr[u free when v arrives] = 1 - y_u for the water-filling instance.
      const double free = 1.0 - update.prior_duals[i];
      const double z = free > 0.0 ? value / free : 0.0;
      plan.neighbors.push_back(u);
      plan.x.push_back(value);
      plan.free_prob.push_back(free);
      plan.z.push_back(z);
      plan.sum_z += z;
    }
    if (plan.sum_z > 1.0 + 1e-9)
      throw std::logic_error("warmup z is not a sub-distribution at vertex " + std::to_string(v));
    const double scale = std::max(1.0, plan.sum_z);
    for (double z : plan.z) plan.z_norm.push_back(z / scale);
    plan.keep.assign(plan.degree(), 1.0);
    result.fractional.trace.push_back({v, update.theta.theta, state.dual_value(), state.primal_value()});
    result.fractional.updates.push_back(std::move(update));
    result.arrivals.push_back(std::move(plan));
  }
  result.fractional.x = state.assignment();
  result.fractional.y.assign(state.duals().begin(), state.duals().end());
  return result;
}

RoundingPlan plan_improved_exact(const ArrivalInstance& inst, const RoundingConfig& cfg) {
  const auto* exact = std::get_if<ExactEngine>(&cfg.engine);
  const std::size_t max_n = exact ? exact->max_n : FreeStateDistribution::kMaxVertices;
  if (inst.size() > max_n)
    throw std::runtime_error("probability engine exhausted: exact engine capped at " +
                             std::to_string(max_n) + " vertices");
  FreeStateDistribution dist(inst.size());
  return detail::build_improved_plan(inst, cfg, dist,
                                     [&](ArrivalPlan& plan) { plan.match_prob = dist.apply_arrival(plan); });
}

std::vector<double> exact_edge_probabilities(const ArrivalInstance& inst, const RoundingPlan& plan) {
  if (plan.arrivals.size() != inst.size())
    throw std::invalid_argument("plan does not cover the instance");
  FreeStateDistribution dist(inst.size());
  std::vector<double> probs(inst.num_edges(), 0.0);
  for (const ArrivalPlan& arrival : plan.arrivals) {
    const auto per_neighbor = dist.apply_arrival(arrival);
    for (std::size_t i = 0; i < arrival.degree(); ++i)
      probs[inst.edge_index(Edge(arrival.neighbors[i], arrival.vertex))] = per_neighbor[i];
  }
  return probs;
}

namespace {

RoundingRun finish_run(const ArrivalInstance& inst, RoundingPlan plan, ArcProfile profile) {
  RoundingRun run;
  run.matching = online_match(inst, profile);
  run.matched_edges.assign(inst.num_edges(), false);
  const auto mate = run.matching.mates(inst.size());
  for (const Edge& e : run.matching.edges) run.matched_edges[inst.edge_index(e)] = true;

  run.record.reserve(inst.size());
  for (const ArrivalPlan& arrival : plan.arrivals) {
    RunRecordRow row;
    row.arrival = arrival.vertex;
    row.sum_z = arrival.sum_z;
    row.normalized = arrival.normalized();
    row.second_sampled = profile.choices[arrival.vertex].secondary.has_value();
    const VertexId partner = mate[arrival.vertex];
    if (partner < arrival.vertex) row.matched_to = partner;
    if (!arrival.free_prob.empty()) {
      auto [lo, hi] = std::minmax_element(arrival.free_prob.begin(), arrival.free_prob.end());
      row.marginal_min = *lo;
      row.marginal_max = *hi;
    }
    run.record.push_back(row);
  }
  run.plan = std::move(plan);
  run.profile = std::move(profile);
  return run;
}

}  // namespace

RoundingRun run_warmup(const ArrivalInstance& inst, std::uint64_t seed) {
  RoundingPlan plan = plan_warmup(inst);
  std::mt19937_64 gen(seed);
  ArcProfile profile = sample_profile(plan, gen);
  return finish_run(inst, std::move(plan), std::move(profile));
}

RoundingPlan plan_improved(const ArrivalInstance& inst, const RoundingConfig& cfg) {
  cfg.validate();
  if (std::holds_alternative<ParticleEngine>(cfg.engine)) return plan_improved_particles(inst, cfg).plan;
  return plan_improved_exact(inst, cfg);
}

RoundingRun run_improved(const ArrivalInstance& inst, const RoundingConfig& cfg) {
  cfg.validate();
  if (std::holds_alternative<ParticleEngine>(cfg.engine)) {
    auto [plan, profile] = plan_improved_particles(inst, cfg);
    return finish_run(inst, std::move(plan), std::move(profile));
  }
  RoundingPlan plan = plan_improved_exact(inst, cfg);
  std::mt19937_64 gen(cfg.seed);
  ArcProfile profile = sample_profile(plan, gen);
  return finish_run(inst, std::move(plan), std::move(profile));
}

void write_run_record_csv(std::ostream& out, const std::vector<RunRecordRow>& record) {
  out << "arrival,sum_z,normalized,second_sampled,matched_to,engine_marginal_min,"
         "engine_marginal_max\n";
  for (const auto& row : record) {
    out << row.arrival << ',' << format_real(row.sum_z) << ',' << (row.normalized ? 1 : 0) << ','
        << (row.second_sampled ? 1 : 0) << ',';
    if (row.matched_to) out << *row.matched_to;
    out << ',';
    if (row.marginal_min) out << format_real(*row.marginal_min);
    out << ',';
    if (row.marginal_max) out << format_real(*row.marginal_max);
    out << '\n';
  }
}

ZStructureReport z_structure_report(const RoundingPlan& plan, double epsilon, double constant) {
  ZStructureReport report;
  const double sum_cap = 1.0 + constant * epsilon;
  const double z_cap = 0.5 + constant * std::sqrt(epsilon);
  for (const ArrivalPlan& arrival : plan.arrivals) {
    if (!arrival.normalized()) continue;
    ++report.normalized_arrivals;
    report.max_sum_z = std::max(report.max_sum_z, arrival.sum_z);
    for (std::size_t i = 0; i < arrival.degree(); ++i) {
      report.max_z = std::max(report.max_z, arrival.z[i]);
      report.min_marginal = std::min(report.min_marginal, arrival.free_prob[i]);
      report.max_marginal = std::max(report.max_marginal, arrival.free_prob[i]);
    }
  }
  report.sum_bound_holds = report.max_sum_z <= sum_cap;
  report.max_bound_holds = report.max_z <= z_cap;
  return report;
}

}  // namespace match_arena
