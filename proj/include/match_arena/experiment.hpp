#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "match_arena/graph.hpp"
#include "match_arena/instance_io.hpp"
#include "match_arena/rounding.hpp"

namespace match_arena {

enum class FamilyKind { HardGn, RandomBipartite, RandomGeneral, Path, ThreeEdgePathInternalFirst, Triangle };

/// `n` is the round count for HardGn, the vertex count for the random
/// families and Path, and ignored otherwise. RandomBipartite puts n/2
/// vertices on one side and the rest on the other, then shuffles arrivals.
struct FamilySpec {
  FamilyKind kind = FamilyKind::RandomBipartite;
  std::size_t n = 8;
  double p = 0.5;
};

enum class AlgorithmKind { GreedyIntegral, WarmupRounding, ImprovedRounding, FractionalWW, FractionalEdgeBaseline };
enum class EdgeBaselineKind { MaximalGreedy, ProportionalSplit };

struct AlgorithmSpec {
  AlgorithmKind kind = AlgorithmKind::GreedyIntegral;
  double epsilon = 0.05;                  // ImprovedRounding
  EngineSpec engine = ParticleEngine{};   // ImprovedRounding
  double kappa = 1.1997;                  // FractionalWW
  std::optional<double> beta;             // FractionalWW; beta_star(kappa) when empty
  EdgeBaselineKind baseline = EdgeBaselineKind::MaximalGreedy;
};

struct ExperimentSpec {
  FamilySpec family;
  AlgorithmSpec algorithm;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  /// When set, every trial runs on this instance instead of generating one.
  std::optional<AnyInstance> fixed_instance;
  std::string fixed_label = "file";

  /// Throws std::invalid_argument on trials == 0, bad family parameters, or
  /// an edge-arrival algorithm paired with a vertex-arrival family (and the
  /// reverse).
  void validate() const;
};

std::string_view to_string(FamilyKind kind);
std::string_view to_string(AlgorithmKind kind);
std::string_view to_string(EdgeBaselineKind kind);
/// Accept the names produced by to_string; throw std::invalid_argument otherwise.
FamilyKind parse_family(std::string_view name);
AlgorithmKind parse_algorithm(std::string_view name);
EdgeBaselineKind parse_edge_baseline(std::string_view name);

bool is_edge_arrival(FamilyKind kind);

/// Deterministic in (spec, seed). HardGn yields an EdgeArrivalInstance, the
/// rest an ArrivalInstance whose ids are arrival positions.
AnyInstance generate_family(const FamilySpec& spec, std::uint64_t seed);

/// Instance label used in result rows, e.g. "random_bipartite:n=8:p=0.5".
std::string family_label(const FamilySpec& spec);

/// First free earlier neighbor, in id order.
Matching greedy_integral(const ArrivalInstance& inst);

struct ResultRow {
  std::string instance;
  std::size_t trial = 0;
  double value = 0.0;
  double opt = 0.0;
  double ratio = 0.0;  // value / opt, or 1 when opt == 0
  double runtime_seconds = 0.0;
};

/// Trial t uses seed derive_seed(spec.seed, t) for both the instance and the
/// algorithm. Trials run on worker_count() threads; rows come back in trial
/// order. Every matching is validated against the graph and every fractional
/// output against the polytope; failures throw std::logic_error.
std::vector<ResultRow> run_trials(const ExperimentSpec& spec);

struct Summary {
  std::size_t trials = 0;
  double mean_ratio = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(trials); 0 for one trial
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double mean_value = 0.0;
};

/// Throws std::invalid_argument on empty rows.
Summary summarize(const std::vector<ResultRow>& rows);

/// Header instance,trial,value,opt,ratio[,runtime_seconds]. Numbers use
/// "%.12g", so identical rows give identical bytes.
void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows, bool include_runtime = false);

/// Human-readable summary table.
void write_summary_table(std::ostream& out, const std::string& label, const Summary& s);

}  // namespace match_arena
