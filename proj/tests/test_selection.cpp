#include <gtest/gtest.h>

#include <random>

#include "match_arena/rounding.hpp"
#include "match_arena/selection.hpp"
#include "support/oracles.hpp"

using namespace match_arena;

namespace {

ArcChoice primary(VertexId u) { return {u, std::nullopt, 0.0, 1.0}; }
ArcChoice both(VertexId u, VertexId w) { return {u, w, 0.0, 1.0}; }

// Twelve vertices in arrival order with a hand-picked profile that mixes
// primary and secondary arcs.
struct TwelveVertexFixture {
  ArrivalInstance inst{{{}, {}, {}, {0, 1}, {2}, {3}, {4, 5}, {5}, {7}, {}, {8}, {9, 10}}};
  ArcProfile profile{{ArcChoice{}, ArcChoice{}, ArcChoice{}, both(0, 1), primary(2), primary(3), both(4, 5),
                      primary(5), primary(7), ArcChoice{}, primary(8), both(9, 10)}};
};

}  // namespace

TEST(BuildSelection, EmptyAndDirect) {
  const ArrivalInstance inst({{}, {0}, {0, 1}});
  EXPECT_TRUE(build_selection(inst, ArcProfile{}).arcs.empty());
  const ArcProfile p{{ArcChoice{}, ArcChoice{}, both(0, 1)}};
  const SelectionGraph g = build_selection(inst, p);
  ASSERT_EQ(g.arcs.size(), 2u);
  EXPECT_EQ(g.arcs[0], (Arc{2, 0, ArcKind::Primary}));
  EXPECT_EQ(g.arcs[1], (Arc{2, 1, ArcKind::Secondary}));
}

TEST(BuildSelection, DroppedSecondaryIsAbsent) {
  const ArrivalInstance inst({{}, {0}, {0, 1}});
  ArcChoice c = both(0, 1);
  c.keep_coin = 0.7;
  c.keep_threshold = 0.5;
  EXPECT_EQ(build_selection(inst, ArcProfile{{ArcChoice{}, ArcChoice{}, c}}).arcs.size(), 1u);
}

TEST(BuildSelection, RejectsNonNeighbors) {
  const ArrivalInstance inst({{}, {}, {0}});
  EXPECT_THROW(build_selection(inst, ArcProfile{{ArcChoice{}, ArcChoice{}, primary(1)}}), std::invalid_argument);
  EXPECT_THROW(build_selection(inst, ArcProfile{{ArcChoice{}, primary(0)}}), std::invalid_argument);
}

TEST(BuildSelection, ArcCountMatchesChoices) {
  std::mt19937 rng(3);
  for (int t = 0; t < 50; ++t) {
    const auto inst = oracle::random_instance(rng, 10, 0.6, false);
    const RoundingPlan plan = plan_improved_exact(inst, {0.05, ExactEngine{}, 0});
    std::mt19937_64 gen(t);
    const ArcProfile p = sample_profile(plan, gen);
    std::size_t expected = 0;
    for (const auto& c : p.choices) expected += c.primary.has_value() + c.secondary_kept();
    EXPECT_EQ(build_selection(inst, p).arcs.size(), expected);
  }
}

TEST(Prune, EarliestPrimaryWins) {
  SelectionGraph g{4, {{2, 0, ArcKind::Primary}, {3, 0, ArcKind::Primary}, {3, 1, ArcKind::Secondary}}};
  const PrunedGraph h = prune_selection(g);
  ASSERT_EQ(h.arcs.size(), 2u);
  EXPECT_EQ(h.arcs[0], (Arc{2, 0, ArcKind::Primary}));
  EXPECT_EQ(h.arcs[1], (Arc{3, 1, ArcKind::Secondary}));
}

TEST(Prune, SecondaryBlockedByEarlierPrimary) {
  SelectionGraph g{4, {{1, 0, ArcKind::Primary}, {3, 2, ArcKind::Primary}, {3, 0, ArcKind::Secondary}}};
  const PrunedGraph h = prune_selection(g);
  EXPECT_EQ(h.arcs.size(), 2u);
  EXPECT_FALSE(h.secondary_targets()[3].has_value());
}

TEST(Prune, SecondaryDuplicatingPrimary) {
  SelectionGraph g{3, {{2, 0, ArcKind::Primary}, {2, 0, ArcKind::Secondary}}};
  const PrunedGraph h = prune_selection(g);
  ASSERT_EQ(h.arcs.size(), 1u);
  EXPECT_EQ(h.arcs[0].kind, ArcKind::Primary);
}

TEST(Prune, ArclessUnchanged) {
  EXPECT_TRUE(prune_selection(SelectionGraph{5, {}}).arcs.empty());
}

TEST(Greedy, SinglePrimaryArc) {
  const ArrivalInstance inst({{}, {0}});
  const PrunedGraph h = prune_selection(build_selection(inst, ArcProfile{{ArcChoice{}, primary(0)}}));
  const Matching m = greedy_match_pruned(h, inst);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m.edges[0], Edge(0, 1));
}

TEST(Greedy, TwelveVertexFixture) {
  const TwelveVertexFixture f;
  const PrunedGraph h = prune_selection(build_selection(f.inst, f.profile));
  Matching m = greedy_match_pruned(h, f.inst);
  std::sort(m.edges.begin(), m.edges.end());
  const std::vector<Edge> expected{Edge(0, 3), Edge(2, 4), Edge(5, 6), Edge(7, 8), Edge(9, 11)};
  EXPECT_EQ(m.edges, expected);
  Matching online = online_match(f.inst, f.profile);
  std::sort(online.edges.begin(), online.edges.end());
  EXPECT_EQ(online.edges, expected);
}

TEST(Greedy, PrimaryChain) {
  const ArrivalInstance inst({{}, {0}, {1}, {2}, {3}});
  const ArcProfile p{{ArcChoice{}, primary(0), primary(1), primary(2), primary(3)}};
  const Matching m = greedy_match_pruned(prune_selection(build_selection(inst, p)), inst);
  EXPECT_EQ(m.edges, (std::vector<Edge>{Edge(0, 1), Edge(2, 3)}));
}

TEST(Greedy, EqualsOnlineRule) {
  std::mt19937 rng(7);
  for (int t = 0; t < 100; ++t) {
    const auto inst = oracle::random_instance(rng, 2 + rng() % 9, 0.55, t % 2 == 1);
    const auto run = run_improved(inst, {0.05, ExactEngine{}, static_cast<std::uint64_t>(t)});
    const PrunedGraph h = prune_selection(build_selection(inst, run.profile));
    EXPECT_EQ(greedy_match_pruned(h, inst).edges, run.matching.edges);
  }
}

TEST(Prune, PrimaryDegreesAtMostOne) {
  std::mt19937 rng(13);
  for (int t = 0; t < 100; ++t) {
    const auto inst = oracle::random_instance(rng, 10, 0.7, false);
    const RoundingPlan plan = plan_improved_exact(inst, {0.05, ExactEngine{}, 0});
    std::mt19937_64 gen(t);
    const PrunedGraph h = prune_selection(build_selection(inst, sample_profile(plan, gen)));
    std::vector<int> in(10, 0), out(10, 0);
    for (const Arc& a : h.arcs)
      if (a.kind == ArcKind::Primary) ++in[a.target], ++out[a.source];
    for (int v = 0; v < 10; ++v) {
      EXPECT_LE(in[v], 1);
      EXPECT_LE(out[v], 1);
    }
  }
}

TEST(Perturbation, OneVertexChangesAtMostTwoStatuses) {
  std::mt19937 rng(19);
  for (int t = 0; t < 40; ++t) {
    const auto inst = oracle::random_instance(rng, 12, 0.5, t % 2 == 0);
    const RoundingPlan plan = plan_improved_exact(inst, {0.05, ExactEngine{}, 0});
    std::mt19937_64 gen(t);
    for (int pair = 0; pair < 25; ++pair) {
      ArcProfile tau = sample_profile(plan, gen);
      ArcProfile tau2 = tau;
      const VertexId v = static_cast<VertexId>(gen() % inst.size());
      tau2.choices[v] = sample_choice(plan.arrivals[v], gen);
      const auto a = matched_status_trace(prune_selection(build_selection(inst, tau)));
      const auto b = matched_status_trace(prune_selection(build_selection(inst, tau2)));
      for (std::size_t step = 0; step < a.size(); ++step) {
        int diff = 0;
        for (std::size_t u = 0; u < a[step].size(); ++u) diff += a[step][u] != b[step][u];
        EXPECT_LE(diff, 2);
      }
    }
  }
}
