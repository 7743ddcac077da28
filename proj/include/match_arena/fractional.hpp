#pragma once

#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "match_arena/graph.hpp"

namespace match_arena {

/// f_kappa(theta) = ((1+k)/2 - theta)^((1+k)/(2k)) * (theta + (k-1)/2)^((k-1)/(2k)).
/// kappa == 1 gives water-filling, 1 - theta. Throws std::domain_error outside
/// theta in [0, 1], kappa >= 1.
double eval_f_kappa(double theta, double kappa);

/// 1 + f_kappa(0); the smallest beta for which the fractional algorithm is
/// 1/beta competitive.
double beta_star(double kappa);

/// (1 - theta)(1 + eps ln((theta + eps)/(1 + eps - theta))) + 1.01 eps, the
/// simplified upper bound on f_{1+2eps}. It only holds for small eps
/// (roughly eps < 4e-4); callers compare, nothing here asserts it.
double log_form_bound(double theta, double epsilon);

struct WWParams {
  double kappa = 1.0;
  double beta = 2.0;

  /// kappa = 1, beta = 2.
  static WWParams water_filling() { return {1.0, 2.0}; }
  /// kappa = 1 + 2 eps, beta = 2 - eps; the configuration that is rounded.
  static WWParams improved(double epsilon) { return {1.0 + 2.0 * epsilon, 2.0 - epsilon}; }
  /// beta = beta_star(kappa).
  static WWParams tight(double kappa) { return {kappa, beta_star(kappa)}; }
};

enum class ThetaBinding { AtOne, Interior };

struct ThetaResult {
  double theta = 1.0;
  ThetaBinding binding = ThetaBinding::AtOne;
};

/// Largest theta <= 1 with sum_u (theta - y_u)^+ <= f_kappa(theta). The slack
/// is nondecreasing in theta, so bisection to 1e-12 is exact enough.
ThetaResult solve_theta(std::span<const double> duals, double kappa);

struct ArrivalUpdate {
  VertexId vertex = 0;
  ThetaResult theta;
  /// (u, x_uv) for every earlier neighbor u, in neighbor order.
  std::vector<std::pair<VertexId, double>> increments;
  /// y_u of each neighbor just before the arrival, in neighbor order.
  std::vector<double> prior_duals;
};

/// Online primal-dual state over a fixed vertex capacity.
class FractionalState {
 public:
  explicit FractionalState(std::size_t capacity);

  /// Processes the arrival of `v` with earlier neighbors `nbrs`. Throws
  /// std::invalid_argument if v already arrived or a neighbor has not.
  ArrivalUpdate process_arrival(VertexId v, std::span<const VertexId> nbrs, const WWParams& params);

  std::span<const double> duals() const { return y_; }
  /// Fractional degree x_u of every vertex.
  std::span<const double> loads() const { return load_; }
  const FractionalAssignment& assignment() const { return x_; }
  bool arrived(VertexId v) const { return arrived_.at(v); }
  double primal_value() const { return primal_; }
  double dual_value() const { return dual_; }

 private:
  std::vector<double> y_;
  std::vector<double> load_;
  std::vector<bool> arrived_;
  FractionalAssignment x_;
  double primal_ = 0.0;
  double dual_ = 0.0;
};

struct TraceRow {
  VertexId arrival = 0;
  double theta = 1.0;
  double dual_sum = 0.0;
  double primal_sum = 0.0;
};

/// Fractional degrees and duals of all vertices, taken just before an arrival.
struct DegreeSnapshot {
  VertexId before_arrival = 0;
  std::vector<double> loads;
  std::vector<double> duals;
};

struct FractionalRun {
  FractionalAssignment x;
  std::vector<double> y;
  std::vector<TraceRow> trace;
  std::vector<ArrivalUpdate> updates;
  std::vector<DegreeSnapshot> snapshots;  // empty unless requested
};

FractionalRun run_fractional(const ArrivalInstance& inst, const WWParams& params,
                             bool record_snapshots = false);

/// Columns: arrival,theta,dual_sum,primal_sum.
void write_trace_csv(std::ostream& out, const FractionalRun& run);

}  // namespace match_arena
