#include "match_arena/particles.hpp"

#include <stdexcept>

#include "plan_builder.hpp"

namespace match_arena {

ParticleEnsemble::ParticleEnsemble(std::size_t num_vertices, std::size_t particles,
                                   std::uint64_t seed)
    : num_vertices_(num_vertices), particles_(particles), matched_(num_vertices * particles, 0) {
  if (particles == 0) throw std::invalid_argument("particle ensemble needs at least one particle");
  streams_.reserve(particles);
  for (std::size_t k = 0; k < particles; ++k) streams_.emplace_back(derive_seed(seed, k));
}

double ParticleEnsemble::free_probability(VertexId u) const {
  const std::uint8_t* row = &matched_[index(u, 0)];
  std::size_t free = 0;
  for (std::size_t k = 0; k < particles_; ++k) free += row[k] ? 0 : 1;
  return static_cast<double>(free) / static_cast<double>(particles_);
}

double ParticleEnsemble::conditional_free(VertexId w, VertexId given) const {
  const std::uint8_t* row_w = &matched_[index(w, 0)];
  const std::uint8_t* row_given = &matched_[index(given, 0)];
  std::size_t given_free = 0;
  std::size_t both_free = 0;
  for (std::size_t k = 0; k < particles_; ++k) {
    if (row_given[k]) continue;
    ++given_free;
    both_free += row_w[k] ? 0 : 1;
  }
  if (given_free == 0) return free_probability(w);
  return static_cast<double>(both_free) / static_cast<double>(given_free);
}

ArcChoice ParticleEnsemble::apply_arrival(const ArrivalPlan& plan) {
  if (plan.vertex >= num_vertices_) throw std::invalid_argument("arrival beyond ensemble capacity");
  ArcChoice first_particle;
  for (std::size_t k = 0; k < particles_; ++k) {
    const ArcChoice choice = sample_choice(plan, streams_[k]);
    std::optional<VertexId> partner;
    if (choice.primary && !matched(k, *choice.primary)) partner = choice.primary;
    else if (choice.secondary_kept() && !matched(k, *choice.secondary)) partner = choice.secondary;
    if (partner) {
      matched_[index(*partner, k)] = 1;
      matched_[index(plan.vertex, k)] = 1;
    }
    if (k == 0) first_particle = choice;
  }
  ++processed_;
  return first_particle;
}

ParticlePlanResult plan_improved_particles(const ArrivalInstance& inst, const RoundingConfig& cfg) {
  const auto& engine = std::get<ParticleEngine>(cfg.engine);
  ParticleEnsemble ensemble(inst.size(), engine.particles, cfg.seed);
  ParticlePlanResult result;
  result.profile.choices.reserve(inst.size());
  result.plan = detail::build_improved_plan(inst, cfg, ensemble, [&](const ArrivalPlan& plan) {
    result.profile.choices.push_back(ensemble.apply_arrival(plan));
  });
  return result;
}

}  // namespace match_arena
