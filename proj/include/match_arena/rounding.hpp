#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "match_arena/fractional.hpp"
#include "match_arena/graph.hpp"
#include "match_arena/random.hpp"

namespace match_arena {

/// Exact joint distribution over matched sets; ground truth for small n.
struct ExactEngine {
  std::size_t max_n = 22;
};

/// Monte Carlo ensemble of independently simulated runs.
struct ParticleEngine {
  std::size_t particles = 20000;
};

using EngineSpec = std::variant<ExactEngine, ParticleEngine>;

struct RoundingConfig {
  double epsilon = 0.05;
  EngineSpec engine = ExactEngine{};
  std::uint64_t seed = 0;
  /// Lower clamp on Pr[u free] before dividing by it.
  double z_floor = 1e-6;

  /// Throws std::invalid_argument unless epsilon in (0, 0.09], particles >= 1000
  /// and max_n <= 22.
  void validate() const;
};

/// Everything the rounding decides at one arrival, before any coin is flipped.
/// Vectors are indexed like `neighbors` (arrival order).
struct ArrivalPlan {
  VertexId vertex = 0;
  std::vector<VertexId> neighbors;
  std::vector<double> x;          // x_uv from the fractional algorithm
  std::vector<double> free_prob;  // Pr[u free when v arrives], as used for z
  std::vector<double> z;          // x_uv / Pr[u free], clamped to [0, 1]
  std::vector<double> z_norm;     // z / max(1, sum z)
  std::vector<double> keep;       // probability of keeping u when drawn second
  double sum_z = 0.0;
  double second_prob = 0.0;       // sqrt(eps) iff sum_z > 1, else 0
  /// Exact engine only: Pr[{u, v} in M] per neighbor.
  std::vector<double> match_prob;

  bool normalized() const { return sum_z > 1.0; }
  std::size_t degree() const { return neighbors.size(); }
};

struct RoundingPlan {
  FractionalRun fractional;
  std::vector<ArrivalPlan> arrivals;  // indexed by vertex
};

/// Random choices of one vertex. `secondary` is the raw second draw; the arc
/// exists in the selection graph only if `keep_coin < keep_threshold`.
struct ArcChoice {
  std::optional<VertexId> primary;
  std::optional<VertexId> secondary;
  double keep_coin = 0.0;
  double keep_threshold = 1.0;

  bool secondary_kept() const { return secondary.has_value() && keep_coin < keep_threshold; }
  bool operator==(const ArcChoice&) const = default;
};

/// tau: the arc choices of every vertex, indexed by vertex.
struct ArcProfile {
  std::vector<ArcChoice> choices;
};

/// Inverse-CDF draw over `weights` in order with a single uniform `r`;
/// nullopt when r falls beyond the total weight.
std::optional<std::size_t> sample_index(std::span<const double> weights, double r);

/// Draws u1, the second-stage coin, u2 and the keep coin from four uniforms.
ArcChoice sample_choice(const ArrivalPlan& plan, double r_first, double r_stage, double r_second,
                        double r_keep);

template <class Gen>
ArcChoice sample_choice(const ArrivalPlan& plan, Gen& gen) {
  const double r1 = uniform01(gen);
  const double r2 = uniform01(gen);
  const double r3 = uniform01(gen);
  const double r4 = uniform01(gen);
  return sample_choice(plan, r1, r2, r3, r4);
}

template <class Gen>
ArcProfile sample_profile(const RoundingPlan& plan, Gen& gen) {
  ArcProfile profile;
  profile.choices.reserve(plan.arrivals.size());
  for (const auto& arrival : plan.arrivals) profile.choices.push_back(sample_choice(arrival, gen));
  return profile;
}

/// The online rule: v takes u1 if free, else a kept u2 if free.
Matching online_match(const ArrivalInstance& inst, const ArcProfile& profile);

/// Probability that the drawn second choice u2 is kept so that {u2, v} is
/// matched with probability min(x_{u2 v}, first + second) where
///   first  = Pr[F_u2] z'_u2
///   second = Pr[F_u2] z'_u2 sqrt(eps) sum_w z'_w (1 - Pr[F_w | F_u2]).
/// Returns 1 when `second` is 0. `conditional_free[i]` is Pr[F_{w_i} | F_u2].
/// Throws std::invalid_argument on size mismatch or non-finite inputs.
double keep_probability(double x_uv, double free_u, double z_norm_u, double sqrt_epsilon,
                        std::span<const double> z_norm, std::span<const double> conditional_free);

/// Warmup plan: kappa = 1, beta = 2, z_u = x_uv / (1 - y_u). Throws
/// std::logic_error if some arrival has sum z > 1 + 1e-9.
RoundingPlan plan_warmup(const ArrivalInstance& inst);

/// Improved plan with the exact engine (kappa = 1 + 2 eps, beta = 2 - eps).
/// Fills match_prob. Throws std::runtime_error if the instance exceeds max_n.
RoundingPlan plan_improved_exact(const ArrivalInstance& inst, const RoundingConfig& cfg);

/// Improved plan with whichever engine `cfg` names.
RoundingPlan plan_improved(const ArrivalInstance& inst, const RoundingConfig& cfg);

/// Exact per-edge match probabilities of the process described by `plan`,
/// in `inst.edges()` order.
std::vector<double> exact_edge_probabilities(const ArrivalInstance& inst, const RoundingPlan& plan);

struct RunRecordRow {
  VertexId arrival = 0;
  double sum_z = 0.0;
  bool normalized = false;
  bool second_sampled = false;
  std::optional<VertexId> matched_to;
  std::optional<double> marginal_min;
  std::optional<double> marginal_max;
};

struct RoundingRun {
  Matching matching;
  std::vector<bool> matched_edges;  // per inst.edges() entry
  ArcProfile profile;
  RoundingPlan plan;
  std::vector<RunRecordRow> record;
};

RoundingRun run_warmup(const ArrivalInstance& inst, std::uint64_t seed);

/// With the particle engine the emitted run is particle 0.
RoundingRun run_improved(const ArrivalInstance& inst, const RoundingConfig& cfg);

/// Columns: arrival,sum_z,normalized,second_sampled,matched_to,
/// engine_marginal_min,engine_marginal_max. Missing values are left empty.
void write_run_record_csv(std::ostream& out, const std::vector<RunRecordRow>& record);

/// Bounds on z at arrivals with sum z > 1, with C a free constant.
struct ZStructureReport {
  std::size_t normalized_arrivals = 0;
  double max_sum_z = 0.0;
  double max_z = 0.0;
  double min_marginal = 1.0;  // over neighbors at normalized arrivals
  double max_marginal = 0.0;
  bool sum_bound_holds = true;  // sum z <= 1 + C eps
  bool max_bound_holds = true;  // max z <= 1/2 + C sqrt(eps)
};

ZStructureReport z_structure_report(const RoundingPlan& plan, double epsilon, double constant = 10.0);

}  // namespace match_arena
