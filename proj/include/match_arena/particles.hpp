#pragma once

#include <cstdint>
#include <vector>

#include "match_arena/graph.hpp"
#include "match_arena/random.hpp"
#include "match_arena/rounding.hpp"

namespace match_arena {

/// K simulated runs sharing one plan per arrival but drawing their own arcs
/// from per-particle SplitMix64 streams seeded by derive_seed(seed, k).
class ParticleEnsemble {
 public:
  ParticleEnsemble(std::size_t num_vertices, std::size_t particles, std::uint64_t seed);

  std::size_t particles() const { return particles_; }
  std::size_t arrivals_processed() const { return processed_; }

  bool matched(std::size_t particle, VertexId u) const { return matched_[index(u, particle)] != 0; }
  double free_probability(VertexId u) const;
  /// Fraction of particles with w free among those with `given` free; falls
  /// back to free_probability(w) when no particle has `given` free.
  double conditional_free(VertexId w, VertexId given) const;

  /// Every particle draws its own choices and applies the online rule.
  /// Returns the choice of particle 0.
  ArcChoice apply_arrival(const ArrivalPlan& plan);

 private:
  std::size_t index(VertexId u, std::size_t particle) const { return u * particles_ + particle; }

  std::size_t num_vertices_;
  std::size_t particles_;
  std::size_t processed_ = 0;
  std::vector<std::uint8_t> matched_;  // vertex-major
  std::vector<SplitMix64> streams_;
};

struct ParticlePlanResult {
  RoundingPlan plan;
  ArcProfile profile;  // particle 0
};

ParticlePlanResult plan_improved_particles(const ArrivalInstance& inst, const RoundingConfig& cfg);

}  // namespace match_arena
