#include <gtest/gtest.h>

#include <algorithm>
#include <queue>
#include <random>
#include <set>

#include "smellcast/dataset.hpp"
#include "smellcast/errors.hpp"
#include "smellcast/evaluation.hpp"
#include "testkit.hpp"

using namespace smellcast;
namespace tk = smellcast::testkit;

namespace {

PredictionSet preds(std::vector<std::pair<Edge, bool>> rows) {
  PredictionSet p{"v", "m", 0.5, {}};
  for (auto& [e, yes] : rows) p.predictions.push_back({e.source, e.target, yes ? 0.9 : 0.1, yes});
  return p;
}

Dataset truth(std::vector<std::pair<Edge, bool>> rows) {
  Dataset ds;
  ds.kind = DatasetKind::Test;
  for (auto& [e, yes] : rows)
    ds.instances.push_back({e.source, e.target, {}, yes ? Label::Positive : Label::Negative});
  return ds;
}

bool reaches(const DependencyGraph& g, const NodeId& from, const NodeId& to) {
  std::set<NodeId> seen{from};
  std::queue<NodeId> q;
  q.push(from);
  while (!q.empty()) {
    auto n = q.front();
    q.pop();
    if (n == to) return true;
    for (const auto& m : neighbors(g, n, NeighborMode::Out))
      if (seen.insert(m).second) q.push(m);
  }
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

TEST(Counts, ZeroDenominators) {
  auto m = metrics_from_counts(0, 0, 0, 5);
  EXPECT_EQ(m.precision, 0.0);
  EXPECT_EQ(m.recall, 0.0);
  EXPECT_EQ(m.f1, 0.0);
  EXPECT_EQ(m.negative_f1, 1.0);
  EXPECT_EQ(m.weighted_f, m.negative_f1);
  EXPECT_EQ(metrics_from_counts(0, 0, 0, 0).weighted_f, 0.0);
}

TEST(Counts, HandComputed) {
  auto m = metrics_from_counts(2, 2, 0, 4);
  EXPECT_EQ(m.precision, 0.5);
  EXPECT_EQ(m.recall, 1.0);
  EXPECT_DOUBLE_EQ(m.f1, 2.0 / 3.0);
  // negatives: precision 4/4, recall 4/6
  EXPECT_DOUBLE_EQ(m.negative_f1, 0.8);
  EXPECT_DOUBLE_EQ(m.weighted_f, (2 * (2.0 / 3.0) + 6 * 0.8) / 8);
}

TEST(Counts, WeightedFBetweenClassScores) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 500; ++i) {
    auto m = metrics_from_counts(rng() % 20, rng() % 20, rng() % 20, rng() % 20);
    EXPECT_GE(m.weighted_f, std::min(m.f1, m.negative_f1) - 1e-15);
    EXPECT_LE(m.weighted_f, std::max(m.f1, m.negative_f1) + 1e-15);
    for (double x : {m.precision, m.recall, m.f1, m.negative_f1, m.weighted_f}) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
  }
}

TEST(EdgeMetrics, AllCorrect) {
  auto m = edge_metrics(preds({{{"a", "b"}, true}, {{"b", "a"}, false}}),
                        truth({{{"a", "b"}, true}, {{"b", "a"}, false}}));
  EXPECT_EQ(m.precision, 1.0);
  EXPECT_EQ(m.recall, 1.0);
  EXPECT_EQ(m.weighted_f, 1.0);
}

TEST(EdgeMetrics, Confusion) {
  auto m = edge_metrics(
      preds({{{"a", "b"}, true}, {{"a", "c"}, true}, {{"b", "a"}, true}, {{"b", "c"}, true}, {{"c", "a"}, false}}),
      truth({{{"a", "b"}, true}, {{"a", "c"}, true}, {{"b", "a"}, false}, {{"b", "c"}, false}, {{"c", "a"}, false}}));
  EXPECT_EQ(m.tp, 2u);
  EXPECT_EQ(m.fp, 2u);
  EXPECT_EQ(m.fn, 0u);
  EXPECT_EQ(m.tn, 1u);
  EXPECT_EQ(m.precision, 0.5);
  EXPECT_EQ(m.recall, 1.0);
}

TEST(EdgeMetrics, OrderDoesNotMatter) {
  auto p = preds({{{"a", "b"}, true}, {{"a", "c"}, false}, {{"c", "b"}, true}});
  auto t = truth({{{"c", "b"}, false}, {{"a", "b"}, true}, {{"a", "c"}, true}});
  auto m = edge_metrics(p, t);
  std::reverse(p.predictions.begin(), p.predictions.end());
  EXPECT_EQ(edge_metrics(p, t), m);
}

TEST(EdgeMetrics, SchemaErrors) {
  auto p = preds({{{"a", "b"}, true}});
  EXPECT_THROW(edge_metrics(p, truth({{{"a", "c"}, true}})), SchemaError);
  EXPECT_THROW(edge_metrics(p, truth({{{"a", "b"}, true}, {{"b", "a"}, true}})), SchemaError);
  auto unlabeled = truth({{{"a", "b"}, true}});
  unlabeled.instances[0].label.reset();
  EXPECT_THROW(edge_metrics(p, unlabeled), SchemaError);
}

TEST(CycleMetrics, RealizedClosureIsTruePositive) {
  DependencyGraph curr("1", {}, {{"A", "B"}, {"B", "C"}});
  std::vector<Edge> pred{{"C", "A"}};
  auto s = cycle_filter(curr, pred);
  DependencyGraph next("2", {}, {{"A", "B"}, {"B", "C"}, {"C", "A"}});
  auto m = cycle_metrics(s, curr, next);
  EXPECT_EQ(m.tp, 1u);
  EXPECT_EQ(m.fp, 0u);
  EXPECT_EQ(m.recall, 1.0);
}

TEST(CycleMetrics, UnrealizedIsFalsePositive) {
  DependencyGraph curr("1", {}, {{"A", "B"}, {"B", "C"}});
  std::vector<Edge> pred{{"C", "A"}};
  auto m = cycle_metrics(cycle_filter(curr, pred), curr, curr);
  EXPECT_EQ(m.tp, 0u);
  EXPECT_EQ(m.fp, 1u);
}

TEST(CycleMetrics, UnpredictedClosureIsFalseNegative) {
  DependencyGraph curr("1", {}, {{"A", "B"}, {"B", "C"}});
  DependencyGraph next("2", {}, {{"A", "B"}, {"B", "C"}, {"C", "A"}});
  auto m = cycle_metrics(cycle_filter(curr, {}), curr, next);
  EXPECT_EQ(m.fn, 1u);
  EXPECT_EQ(m.recall, 0.0);
}

TEST(CycleMetrics, KindMismatch) {
  DependencyGraph g("1", {}, {{"A", "B"}});
  auto hubs = hub_filter(g, {});
  EXPECT_THROW(cycle_metrics(hubs, g, g), ArgumentError);
  EXPECT_THROW(hub_metrics(cycle_filter(g, {}), g, g, 0.25), ArgumentError);
  EXPECT_NO_THROW(smell_metrics(hubs, g, g, 0.25));
}

TEST(HubMetrics, Scenario) {
  std::vector<Edge> edges;
  for (const char* s : {"i1", "i2", "i3", "i4", "i5", "i6"}) edges.push_back({s, "H"});
  for (const char* d : {"o1", "o2", "o3", "o4"}) edges.push_back({"H", d});
  DependencyGraph curr("1", {"o5", "o6"}, edges);
  std::vector<Edge> pred{{"H", "o5"}, {"H", "o6"}};
  auto s = hub_filter(curr, pred, 0.2);
  auto next = curr.with_edges(pred, "2");
  auto hit = hub_metrics(s, curr, next, 0.2);
  EXPECT_EQ(hit.tp, 1u);
  EXPECT_EQ(hit.fp, 0u);
  EXPECT_EQ(hit.fn, 0u);
  EXPECT_EQ(hit.tn, curr.node_count() - 1);

  auto miss = hub_metrics(s, curr, curr, 0.2);
  EXPECT_EQ(miss.fp, 1u);
  auto unseen = hub_metrics(hub_filter(curr, {}, 0.2), curr, next, 0.2);
  EXPECT_EQ(unseen.fn, 1u);
}

TEST(SmellMetrics, BookkeepingIdentities) {
  std::mt19937_64 rng(33);
  for (int round = 0; round < 80; ++round) {
    auto curr = tk::random_graph(rng, 4 + rng() % 8, 0.15, "c");
    auto pred = random_non_edges(rng, curr, 1 + rng() % 5);
    auto added = random_non_edges(rng, curr, rng() % 5);
    auto next = curr.with_edges(added, "n");

    auto cyc = cycle_filter(curr, pred);
    auto cm = cycle_metrics(cyc, curr, next);
    std::size_t actual = 0;
    for (const auto& e : added) actual += reaches(next, e.target, e.source);
    EXPECT_EQ(cm.tp + cm.fp, cyc.triggering_edges.size());
    EXPECT_EQ(cm.tp + cm.fn, actual);

    for (double f : {0.1, 0.25, 0.5}) {
      auto hub = hub_filter(curr, pred, f);
      auto hm = hub_metrics(hub, curr, next, f);
      auto before = tk::oracle_hubs(curr, f), after = tk::oracle_hubs(next, f);
      std::size_t emerging = 0;
      for (const auto& n : after) emerging += std::find(before.begin(), before.end(), n) == before.end();
      EXPECT_EQ(hm.tp + hm.fp, hub.hubs.size());
      EXPECT_EQ(hm.tp + hm.fn, emerging);
      EXPECT_EQ(hm.tp + hm.fp + hm.fn + hm.tn, curr.node_count());
    }
  }
}
