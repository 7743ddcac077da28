#include "match_arena/fractional.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "match_arena/format.hpp"

namespace match_arena {

double eval_f_kappa(double theta, double kappa) {
  if (!(theta >= 0.0 && theta <= 1.0)) throw std::domain_error("f_kappa: theta outside [0, 1]");
  if (!(kappa >= 1.0)) throw std::domain_error("f_kappa: kappa must be >= 1");
  if (kappa == 1.0) return 1.0 - theta;
  const double head = (1.0 + kappa) / 2.0 - theta;
  const double tail = theta + (kappa - 1.0) / 2.0;
  const double head_exp = (1.0 + kappa) / (2.0 * kappa);
  const double tail_exp = (kappa - 1.0) / (2.0 * kappa);
  return std::pow(head, head_exp) * std::pow(tail, tail_exp);
}

double beta_star(double kappa) { return 1.0 + eval_f_kappa(0.0, kappa); }

double log_form_bound(double theta, double epsilon) {
  if (!(epsilon > 0.0) || theta < 0.0 || theta > 1.0) throw std::domain_error("log_form_bound: bad arguments");
  return (1.0 - theta) * (1.0 + epsilon * std::log((theta + epsilon) / (1.0 + epsilon - theta))) + 1.01 * epsilon;
}

ThetaResult solve_theta(std::span<const double> duals, double kappa) {
  auto slack = [&](double theta) {
    double used = 0.0;
    for (double y : duals) used += std::max(0.0, theta - y);
    return used - eval_f_kappa(theta, kappa);
  };
  if (slack(1.0) <= 0.0) return {1.0, ThetaBinding::AtOne};

  // slack(0) = -f(0) < 0 and slack(1) > 0.
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    (slack(mid) <= 0.0 ? lo : hi) = mid;
  }
  return {lo, ThetaBinding::Interior};
}

FractionalState::FractionalState(std::size_t capacity)
    : y_(capacity, 0.0), load_(capacity, 0.0), arrived_(capacity, false) {}

ArrivalUpdate FractionalState::process_arrival(VertexId v, std::span<const VertexId> nbrs,
                                               const WWParams& params) {
  if (v >= arrived_.size()) throw std::invalid_argument("vertex beyond state capacity");
  if (arrived_[v]) throw std::invalid_argument("vertex " + std::to_string(v) + " already arrived");
  for (VertexId u : nbrs) {
    if (u >= arrived_.size() || !arrived_[u])
      throw std::invalid_argument("neighbor " + std::to_string(u) + " of vertex " +
                                  std::to_string(v) + " has not arrived");
  }

  ArrivalUpdate update;
  update.vertex = v;
  update.prior_duals.reserve(nbrs.size());
  for (VertexId u : nbrs) update.prior_duals.push_back(y_[u]);
  update.theta = solve_theta(update.prior_duals, params.kappa);

  const double theta = update.theta.theta;
  const double f = eval_f_kappa(theta, params.kappa);
  // (1 - theta) / f(theta) is taken as 0 at theta = 1.
  const double boost = theta >= 1.0 ? 0.0 : (1.0 - theta) / f;

  update.increments.reserve(nbrs.size());
  for (VertexId u : nbrs) {
    const double raise = std::max(0.0, theta - y_[u]);
    const double value = raise / params.beta * (1.0 + boost);
    x_[Edge(u, v)] = value;
    load_[u] += value;
    load_[v] += value;
    primal_ += value;
    dual_ += raise;
    y_[u] += raise;
    update.increments.emplace_back(u, value);
  }
  y_[v] = 1.0 - theta;
  dual_ += y_[v];
  arrived_[v] = true;
  return update;
}

FractionalRun run_fractional(const ArrivalInstance& inst, const WWParams& params,
                             bool record_snapshots) {
  FractionalState state(inst.size());
  FractionalRun run;
  run.trace.reserve(inst.size());
  run.updates.reserve(inst.size());
  for (VertexId v = 0; v < inst.size(); ++v) {
    if (record_snapshots) {
      run.snapshots.push_back({v, {state.loads().begin(), state.loads().end()},
                               {state.duals().begin(), state.duals().end()}});
    }
    auto update = state.process_arrival(v, inst.earlier_neighbors(v), params);
    run.trace.push_back({v, update.theta.theta, state.dual_value(), state.primal_value()});
    run.updates.push_back(std::move(update));
  }
  run.x = state.assignment();
  run.y.assign(state.duals().begin(), state.duals().end());
  return run;
}

void write_trace_csv(std::ostream& out, const FractionalRun& run) {
  out << "arrival,theta,dual_sum,primal_sum\n";
  for (const auto& row : run.trace) {
    out << row.arrival << ',' << format_real(row.theta) << ',' << format_real(row.dual_sum) << ','
        << format_real(row.primal_sum) << '\n';
  }
}

}  // namespace match_arena
