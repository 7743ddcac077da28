#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "match_arena/fractional.hpp"
#include "support/oracles.hpp"

using namespace match_arena;

TEST(FKappa, ClosedForms) {
  EXPECT_DOUBLE_EQ(eval_f_kappa(0.3, 1.0), 0.7);
  for (double k : {1.0, 1.2, 1.5}) EXPECT_NEAR(eval_f_kappa(0.5, k), k / 2.0, 1e-14);
  EXPECT_NEAR(eval_f_kappa(0.0, 1.1997), 0.9007616973416453, 1e-12);
  EXPECT_NEAR(eval_f_kappa(1.0, 1.0), 0.0, 0.0);
}

TEST(FKappa, DomainErrors) {
  EXPECT_THROW(eval_f_kappa(-0.1, 1.1), std::domain_error);
  EXPECT_THROW(eval_f_kappa(1.1, 1.1), std::domain_error);
  EXPECT_THROW(eval_f_kappa(0.5, 0.9), std::domain_error);
}

TEST(FKappa, NonIncreasing) {
  for (double k : {1.0, 1.05, 1.1, 1.1997, 1.5, 2.0, 3.0}) {
    double prev = eval_f_kappa(0.0, k);
    for (int i = 1; i <= 1000; ++i) {
      const double cur = eval_f_kappa(i / 1000.0, k);
      EXPECT_LE(cur, prev + 1e-15) << "kappa " << k << " theta " << i / 1000.0;
      prev = cur;
    }
  }
}

TEST(BetaStar, Values) {
  EXPECT_DOUBLE_EQ(beta_star(1.0), 2.0);
  EXPECT_NEAR(beta_star(1.1997), 1.9007616973416453, 1e-12);
  EXPECT_NEAR(1.0 / beta_star(1.1997), 0.5261048775333454, 1e-12);
  EXPECT_NEAR(beta_star(1.1), 1.9142993732003004, 1e-12);
}

// 1 + f(1 - theta) + int_theta^1 (1 - t) / f(t) dt is the same constant for
// every theta, namely beta_star.
TEST(BetaStar, IntegralIdentity) {
  for (double k : {1.0, 1.05, 1.1, 1.1997, 1.4}) {
    const auto integrand = [k](double t) {
      const double f = eval_f_kappa(t, k);
      return f > 0.0 ? (1.0 - t) / f : 0.0;
    };
    for (int i = 0; i <= 20; ++i) {
      const double theta = i / 20.0;
      const double integral = theta < 1.0 ? oracle::simpson(integrand, theta, 1.0, 1e-10) : 0.0;
      const double lhs = 1.0 + eval_f_kappa(1.0 - theta, k) + integral;
      EXPECT_NEAR(lhs, beta_star(k), 1e-6) << "kappa " << k << " theta " << theta;
    }
  }
}

TEST(SolveTheta, Examples) {
  EXPECT_EQ(solve_theta({}, 1.0).theta, 1.0);
  EXPECT_EQ(solve_theta({}, 1.0).binding, ThetaBinding::AtOne);
  const std::vector<double> one{0.0};
  EXPECT_NEAR(solve_theta(one, 1.0).theta, 0.5, 1e-12);
  EXPECT_EQ(solve_theta(one, 1.0).binding, ThetaBinding::Interior);
  const std::vector<double> two{0.0, 0.0};
  EXPECT_NEAR(solve_theta(two, 1.0).theta, 1.0 / 3.0, 1e-12);
  const std::vector<double> full{1.0, 1.0};
  EXPECT_EQ(solve_theta(full, 1.3).theta, 1.0);
}

TEST(SolveTheta, ConstraintTightWhenInterior) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int t = 0; t < 500; ++t) {
    std::vector<double> duals(1 + rng() % 6);
    for (double& y : duals) y = unit(rng);
    const double k = 1.0 + 0.5 * unit(rng);
    const ThetaResult r = solve_theta(duals, k);
    double slack = -eval_f_kappa(r.theta, k);
    for (double y : duals) slack += std::max(0.0, r.theta - y);
    EXPECT_LE(slack, 1e-9);
    if (r.binding == ThetaBinding::Interior) EXPECT_GE(slack, -1e-9);
  }
}

TEST(ProcessArrival, PathByHand) {
  FractionalState s(3);
  const WWParams wf = WWParams::water_filling();
  auto u0 = s.process_arrival(0, {}, wf);
  EXPECT_EQ(u0.theta.theta, 1.0);
  EXPECT_EQ(s.duals()[0], 0.0);

  const std::vector<VertexId> n1{0};
  auto u1 = s.process_arrival(1, n1, wf);
  EXPECT_NEAR(u1.theta.theta, 0.5, 1e-12);
  EXPECT_NEAR(u1.increments[0].second, 0.5, 1e-12);
  EXPECT_NEAR(s.duals()[0], 0.5, 1e-12);
  EXPECT_NEAR(s.duals()[1], 0.5, 1e-12);

  const std::vector<VertexId> n2{1};
  auto u2 = s.process_arrival(2, n2, wf);
  EXPECT_NEAR(u2.theta.theta, 0.75, 1e-12);
  EXPECT_NEAR(u2.increments[0].second, 0.25, 1e-12);
  EXPECT_NEAR(s.duals()[1], 0.75, 1e-12);
  EXPECT_NEAR(s.duals()[2], 0.25, 1e-12);
  EXPECT_NEAR(s.primal_value(), 0.75, 1e-12);
  EXPECT_NEAR(fractional_value(s.assignment()), 0.75, 1e-12);
}

TEST(ProcessArrival, Errors) {
  FractionalState s(3);
  const std::vector<VertexId> later{1};
  EXPECT_THROW(s.process_arrival(0, later, WWParams::water_filling()), std::invalid_argument);
  s.process_arrival(0, {}, WWParams::water_filling());
  EXPECT_THROW(s.process_arrival(0, {}, WWParams::water_filling()), std::invalid_argument);
}

TEST(RunFractional, SingleEdgeAndIsolated) {
  const auto run = run_fractional(ArrivalInstance({{}, {0}, {}}), WWParams::water_filling());
  EXPECT_NEAR(run.x.at(Edge(0, 1)), 0.5, 1e-12);
  EXPECT_EQ(run.y[2], 0.0);
  EXPECT_EQ(run.trace[2].theta, 1.0);
}

// Frozen from an independent 50-digit reference with a different root finder.
TEST(RunFractional, MatchesReferenceValues) {
  const ArrivalInstance inst({{}, {0}, {0, 1}, {1, 2}, {}, {3, 4}});
  const auto run = run_fractional(inst, WWParams::tight(1.1997));
  const double theta[] = {1, 0.55406111925673978, 0.70805819476555965, 0.70805819476555965, 1,
                          0.46167731099762272};
  for (std::size_t v = 0; v < 6; ++v) EXPECT_NEAR(run.trace[v].theta, theta[v], 1e-10) << v;
  EXPECT_NEAR(run.x.at(Edge(0, 1)), 0.52610487753334539, 1e-10);
  EXPECT_NEAR(run.x.at(Edge(0, 2)), 0.13786020927931863, 1e-10);
  EXPECT_NEAR(run.x.at(Edge(1, 2)), 0.23465266056429775, 1e-10);
  EXPECT_NEAR(run.x.at(Edge(1, 3)), 0.0, 1e-10);
  EXPECT_NEAR(run.x.at(Edge(2, 3)), 0.37251286984361638, 1e-10);
  EXPECT_NEAR(run.x.at(Edge(3, 5)), 0.16543191852401841, 1e-10);
  EXPECT_NEAR(run.x.at(Edge(4, 5)), 0.44997163648192647, 1e-10);
  EXPECT_NEAR(fractional_value(run.x), 1.886534172226523, 1e-10);
  double ysum = 0.0;
  for (double y : run.y) ysum += y;
  EXPECT_NEAR(ysum, 3.5858518952943017, 1e-10);

  const auto tri = run_fractional(ArrivalInstance({{}, {0}, {0, 1}}), {1.1, 1.95});
  EXPECT_NEAR(tri.trace[1].theta, 0.52613480082376063, 1e-10);
  EXPECT_NEAR(tri.trace[2].theta, 0.68729539349591899, 1e-10);
  EXPECT_NEAR(tri.x.at(Edge(0, 1)), 0.51282051282051283, 1e-10);
  EXPECT_NEAR(tri.x.at(Edge(0, 2)), 0.1516388862030259, 1e-10);
  EXPECT_NEAR(tri.x.at(Edge(1, 2)), 0.20082028994872744, 1e-10);
}

TEST(RunFractional, InvariantsOnRandomInstances) {
  std::mt19937 rng(17);
  for (int t = 0; t < 150; ++t) {
    const std::size_t n = 2 + rng() % 25;
    const auto inst = oracle::random_instance(rng, n, 0.3, t % 2 == 0);
    const double k = std::vector<double>{1.0, 1.1, 1.1997, 1.3}[t % 4];
    const WWParams params = WWParams::tight(k);
    const auto run = run_fractional(inst, params, true);
    const Graph g = inst.graph();
    EXPECT_TRUE(check_fractional_feasibility(run.x, g).feasible);
    for (const Edge& e : inst.edges()) EXPECT_GE(run.y[e.u] + run.y[e.v], 1.0 - 1e-9);
    for (const TraceRow& row : run.trace) EXPECT_GE(row.primal_sum, row.dual_sum / params.beta - 1e-9);
    // Duals never decrease, and degree bounds hold before every arrival.
    for (std::size_t s = 1; s < run.snapshots.size(); ++s)
      for (std::size_t u = 0; u < n; ++u) EXPECT_GE(run.snapshots[s].duals[u], run.snapshots[s - 1].duals[u]);
    for (const auto& snap : run.snapshots)
      for (std::size_t u = 0; u < snap.before_arrival; ++u) {
        const double y = snap.duals[u];
        EXPECT_GE(snap.loads[u], y / params.beta - 1e-9);
        EXPECT_LE(snap.loads[u], (y + eval_f_kappa(1.0 - y, k)) / params.beta + 1e-9);
      }
  }
}

TEST(RunFractional, TraceCsv) {
  const auto run = run_fractional(ArrivalInstance({{}, {0}}), WWParams::water_filling());
  std::ostringstream out;
  write_trace_csv(out, run);
  EXPECT_EQ(out.str(), "arrival,theta,dual_sum,primal_sum\n0,1,0,0\n1,0.5,1,0.5\n");
}
