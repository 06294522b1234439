#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "smellcast/cycles.hpp"
#include "smellcast/errors.hpp"
#include "smellcast/smells.hpp"
#include "testkit.hpp"

using namespace smellcast;
namespace tk = smellcast::testkit;

namespace {

using Cycle = std::vector<NodeId>;

std::vector<std::size_t> lengths(const std::vector<std::vector<std::size_t>>& cycles) {
  std::vector<std::size_t> out;
  for (const auto& c : cycles) out.push_back(c.size());
  std::sort(out.begin(), out.end());
  return out;
}

bool cycle_in_graph(const Cycle& c, const DependencyGraph& g) {
  for (std::size_t i = 0; i < c.size(); ++i)
    if (!g.has_edge(c[i], c[(i + 1) % c.size()])) return false;
  return true;
}

bool uses_edge(const Cycle& c, const Edge& e) {
  for (std::size_t i = 0; i < c.size(); ++i)
    if (c[i] == e.source && c[(i + 1) % c.size()] == e.target) return true;
  return false;
}

std::vector<Edge> random_non_edges(std::mt19937_64& rng, const DependencyGraph& g, std::size_t k) {
  std::vector<Edge> cand;
  for (const auto& u : g.nodes())
    for (const auto& v : g.nodes())
      if (u != v && !g.has_edge(u, v)) cand.push_back({u, v});
  std::shuffle(cand.begin(), cand.end(), rng);
  cand.resize(std::min(k, cand.size()));
  std::sort(cand.begin(), cand.end());
  return cand;
}

}  // namespace

TEST(Cycles, DagHasNone) {
  DependencyGraph g("v", {}, {{"A", "B"}, {"B", "C"}, {"A", "C"}});
  auto r = detect_cycles(g);
  EXPECT_EQ(r.count, 0u);
  EXPECT_EQ(r.mean_length, 0.0);
  EXPECT_TRUE(r.cycles.empty());
  EXPECT_EQ(detect_cycles(DependencyGraph{}).count, 0u);
}

TEST(Cycles, WorkedExample) {
  DependencyGraph g("v", {}, {{"A", "B"}, {"B", "A"}, {"B", "C"}, {"C", "A"}});
  auto r = detect_cycles(g);
  EXPECT_EQ(r.cycles, (std::vector<Cycle>{{"A", "B"}, {"A", "B", "C"}}));
  EXPECT_EQ(r.count, 2u);
  EXPECT_EQ(r.mean_length, 2.5);
}

TEST(Cycles, DisjointTwoCycles) {
  DependencyGraph g("v", {}, {{"A", "B"}, {"B", "A"}, {"C", "D"}, {"D", "C"}});
  auto r = detect_cycles(g);
  EXPECT_EQ(r.count, 2u);
  EXPECT_EQ(r.mean_length, 2.0);
}

TEST(Cycles, RotatedToSmallestName) {
  DependencyGraph g("v", {}, {{"m", "z"}, {"z", "b"}, {"b", "m"}});
  EXPECT_EQ(detect_cycles(g).cycles, (std::vector<Cycle>{{"b", "m", "z"}}));
}

TEST(Cycles, MatchesBruteForce) {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 200; ++round) {
    auto g = tk::random_graph(rng, 1 + rng() % 8, 0.1 + 0.1 * (rng() % 5));
    auto oracle = tk::oracle_cycles(g);
    std::vector<std::vector<std::size_t>> mine;
    cycles::Adjacency adj(g.node_count());
    for (std::size_t i = 0; i < g.node_count(); ++i)
      adj[i].assign(g.out_adjacent(i).begin(), g.out_adjacent(i).end());
    cycles::enumerate_all(adj, [&](std::span<const std::size_t> c) {
      mine.emplace_back(c.begin(), c.end());
      return true;
    });
    std::sort(mine.begin(), mine.end());
    EXPECT_EQ(mine, oracle);

    auto r = detect_cycles(g);
    EXPECT_EQ(r.count, oracle.size());
    std::vector<std::size_t> ls;
    for (const auto& c : r.cycles) {
      ls.push_back(c.size());
      EXPECT_GE(c.size(), 2u);
      EXPECT_EQ(std::set<NodeId>(c.begin(), c.end()).size(), c.size());
      EXPECT_TRUE(cycle_in_graph(c, g));
    }
    std::sort(ls.begin(), ls.end());
    EXPECT_EQ(ls, lengths(oracle));
  }
}

TEST(Cycles, CapSetsTruncated) {
  std::vector<Edge> edges;
  for (char a = 'a'; a <= 'f'; ++a)
    for (char b = 'a'; b <= 'f'; ++b)
      if (a != b) edges.push_back({std::string(1, a), std::string(1, b)});
  DependencyGraph g("k6", {}, edges);
  auto r = detect_cycles(g, 10);
  EXPECT_TRUE(r.truncated);
  EXPECT_EQ(r.count, 10u);
  EXPECT_FALSE(detect_cycles(g).truncated);
  EXPECT_EQ(detect_cycles(g).count, 409u);
}

TEST(Cycles, ThroughEdge) {
  cycles::Adjacency adj{{1, 2}, {2, 0}, {0}};
  std::vector<std::vector<std::size_t>> got;
  cycles::enumerate_through_edge(adj, 1, 2, [&](std::span<const std::size_t> c) {
    got.emplace_back(c.begin(), c.end());
    return true;
  });
  EXPECT_EQ(got, (std::vector<std::vector<std::size_t>>{{1, 2, 0}}));
}

TEST(Cycles, Components) {
  cycles::Adjacency adj{{1}, {0}, {3}, {}};
  std::size_t count = 0;
  auto comp = cycles::strongly_connected_components(adj, &count);
  EXPECT_EQ(count, 3u);
  EXPECT_EQ(comp[0], comp[1]);
  EXPECT_NE(comp[2], comp[3]);
  EXPECT_EQ(cycles::canonical_rotation(std::vector<std::size_t>{4, 2, 7}),
            (std::vector<std::size_t>{2, 7, 4}));
}

TEST(Hubs, IdenticalDegreesGiveNone) {
  DependencyGraph ring("v", {}, {{"A", "B"}, {"B", "C"}, {"C", "A"}});
  EXPECT_TRUE(detect_hubs(ring).hubs.empty());
}

TEST(Hubs, WorkedExample) {
  // X: in 3, out 3. Y: in 3, out 1. Both medians are 1.
  DependencyGraph g("v", {}, {{"A", "X"}, {"B", "X"}, {"C", "X"}, {"X", "A"}, {"X", "B"}, {"X", "Y"},
                              {"D", "Y"}, {"A", "Y"}, {"Y", "C"}});
  auto r = detect_hubs(g, 0.25);
  EXPECT_EQ(r.median_in.value(), 1.0);
  EXPECT_EQ(r.median_out.value(), 1.0);
  ASSERT_EQ(r.hubs.size(), 1u);
  EXPECT_EQ(r.hubs[0].node, "X");
  EXPECT_EQ(r.hubs[0].balance, 0u);
  EXPECT_EQ(r.hubs[0].fraction_bound, 1.5);
  EXPECT_FALSE(is_hub(3, 1, r.median_in, r.median_out, 0.25));
}

TEST(Hubs, Errors) {
  DependencyGraph g("v", {}, {{"A", "B"}});
  EXPECT_THROW(detect_hubs(DependencyGraph{}), DomainError);
  EXPECT_THROW(detect_hubs(g, 0.0), ArgumentError);
  EXPECT_THROW(detect_hubs(g, 1.5), ArgumentError);
}

TEST(Hubs, MatchesPredicateOracle) {
  std::mt19937_64 rng(44);
  for (int round = 0; round < 200; ++round) {
    auto g = tk::random_graph(rng, 1 + rng() % 25, 0.05 + 0.05 * (rng() % 6));
    for (double f : {0.1, 0.25, 0.5, 1.0}) {
      std::vector<NodeId> got;
      for (const auto& h : detect_hubs(g, f).hubs) got.push_back(h.node);
      EXPECT_EQ(got, tk::oracle_hubs(g, f));
    }
  }
}

TEST(CycleFilter, ClosingEdge) {
  DependencyGraph g("v", {}, {{"A", "B"}, {"B", "C"}});
  std::vector<Edge> pred{{"C", "A"}};
  auto s = cycle_filter(g, pred);
  EXPECT_EQ(s.kind, SmellKind::CyclicDependency);
  EXPECT_EQ(s.cycles, (std::vector<Cycle>{{"A", "B", "C"}}));
  EXPECT_EQ(s.triggering_edges, pred);
  EXPECT_TRUE(cycle_filter(g, {}).cycles.empty());
}

TEST(CycleFilter, JointClosure) {
  DependencyGraph g("v", {"D"}, {{"A", "B"}, {"B", "C"}});
  std::vector<Edge> pred{{"C", "D"}, {"D", "A"}};
  auto s = cycle_filter(g, pred);
  EXPECT_EQ(s.cycles, (std::vector<Cycle>{{"A", "B", "C", "D"}}));
  EXPECT_EQ(s.triggering_edges, pred);
}

TEST(CycleFilter, Errors) {
  DependencyGraph g("v", {}, {{"A", "B"}});
  std::vector<Edge> existing{{"A", "B"}}, unknown{{"A", "Q"}}, loop{{"A", "A"}};
  EXPECT_THROW(cycle_filter(g, existing), ArgumentError);
  EXPECT_THROW(cycle_filter(g, unknown), LookupError);
  EXPECT_THROW(cycle_filter(g, loop), ArgumentError);
  EXPECT_THROW(hub_filter(g, existing), ArgumentError);
}

TEST(CycleFilter, Invariants) {
  std::mt19937_64 rng(71);
  for (int round = 0; round < 100; ++round) {
    auto g = tk::random_graph(rng, 3 + rng() % 6, 0.2);
    auto pred = random_non_edges(rng, g, 1 + rng() % 4);
    auto s = cycle_filter(g, pred);
    auto plus = g.with_edges(pred, "plus");

    // exactly the cycles of g+ that use a predicted edge, each once
    std::vector<Cycle> expected;
    for (const auto& c : detect_cycles(plus).cycles)
      if (std::any_of(pred.begin(), pred.end(), [&](const Edge& e) { return uses_edge(c, e); }))
        expected.push_back(c);
    EXPECT_EQ(s.cycles, expected);

    std::set<Edge> triggering;
    for (const auto& c : s.cycles) {
      EXPECT_TRUE(cycle_in_graph(c, plus));
      EXPECT_FALSE(cycle_in_graph(c, g));
      for (const auto& e : pred)
        if (uses_edge(c, e)) triggering.insert(e);
    }
    EXPECT_EQ(s.triggering_edges, std::vector<Edge>(triggering.begin(), triggering.end()));
    for (const auto& e : s.triggering_edges) EXPECT_FALSE(g.has_edge(e.source, e.target));

    // adding one more predicted edge keeps every earlier cycle
    auto more = random_non_edges(rng, plus, 1);
    if (more.empty()) continue;
    auto pred2 = pred;
    pred2.push_back(more[0]);
    std::sort(pred2.begin(), pred2.end());
    auto s2 = cycle_filter(g, pred2);
    for (const auto& c : s.cycles)
      EXPECT_TRUE(std::find(s2.cycles.begin(), s2.cycles.end(), c) != s2.cycles.end());
  }
}

TEST(HubFilter, EmergingHub) {
  // H has in 6, out 4 and gains two outgoing dependencies; |6 - 4| is not
  // below 0.2 * 10 but |6 - 6| is below 0.2 * 12.
  std::vector<Edge> edges;
  std::vector<NodeId> in_src{"i1", "i2", "i3", "i4", "i5", "i6"};
  std::vector<NodeId> out_dst{"o1", "o2", "o3", "o4"};
  for (const auto& s : in_src) edges.push_back({s, "H"});
  for (const auto& d : out_dst) edges.push_back({"H", d});
  DependencyGraph g("v", {"o5", "o6"}, edges);
  EXPECT_TRUE(detect_hubs(g, 0.2).hubs.empty());

  std::vector<Edge> pred{{"H", "o5"}, {"H", "o6"}};
  auto s = hub_filter(g, pred, 0.2);
  EXPECT_EQ(s.kind, SmellKind::HubLike);
  ASSERT_EQ(s.hubs.size(), 1u);
  EXPECT_EQ(s.hubs[0].node, "H");
  EXPECT_EQ(s.hubs[0].out_degree, 6u);
  EXPECT_EQ(s.triggering_edges, pred);
  EXPECT_TRUE(hub_filter(g, {}).hubs.empty());
}

TEST(HubFilter, CandidateStillBelowMedian) {
  DependencyGraph g("v", {}, {{"A", "B"}, {"B", "C"}, {"C", "A"}, {"D", "A"}});
  std::vector<Edge> pred{{"D", "B"}};
  EXPECT_TRUE(hub_filter(g, pred).hubs.empty());
}

TEST(HubFilter, NeverReportsExistingHubsOrBystanders) {
  std::mt19937_64 rng(19);
  for (int round = 0; round < 150; ++round) {
    auto g = tk::random_graph(rng, 4 + rng() % 14, 0.15);
    auto pred = random_non_edges(rng, g, 1 + rng() % 6);
    for (double f : {0.1, 0.25, 0.5}) {
      auto existing = tk::oracle_hubs(g, f);
      auto after = tk::oracle_hubs(g.with_edges(pred, "plus"), f);
      std::set<NodeId> touched;
      for (const auto& e : pred) touched.insert({e.source, e.target});
      std::vector<NodeId> expected;
      for (const auto& n : after)
        if (touched.count(n) && std::find(existing.begin(), existing.end(), n) == existing.end())
          expected.push_back(n);
      std::vector<NodeId> got;
      for (const auto& h : hub_filter(g, pred, f).hubs) got.push_back(h.node);
      EXPECT_EQ(got, expected);
    }
  }
}

TEST(SmellKindNames, RoundTrip) {
  for (auto k : {SmellKind::CyclicDependency, SmellKind::HubLike})
    EXPECT_EQ(smell_kind_from_name(smell_kind_name(k)), k);
  EXPECT_THROW(smell_kind_from_name("god-class"), ArgumentError);
}
