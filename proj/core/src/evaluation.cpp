#include "smellcast/evaluation.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "smellcast/cycles.hpp"
#include "smellcast/errors.hpp"

namespace smellcast {

namespace {

double safe_div(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

double f_measure(double precision, double recall) {
  return safe_div(2.0 * precision * recall, precision + recall);
}

// Edges of `next` between packages of `curr` that were absent in `curr` and
// lie on some cycle of `next`.
std::set<Edge> new_cycle_edges(const DependencyGraph& curr, const DependencyGraph& next) {
  cycles::Adjacency adj(next.node_count());
  for (std::size_t v = 0; v < next.node_count(); ++v) {
    auto out = next.out_adjacent(v);
    adj[v].assign(out.begin(), out.end());
  }
  const auto comp = cycles::strongly_connected_components(adj);
  std::set<Edge> out;
  for (std::size_t s = 0; s < next.node_count(); ++s) {
    for (auto t : next.out_adjacent(s)) {
      // No self-loops, so an edge is on a cycle iff both ends share an SCC.
      if (comp[s] != comp[t]) continue;
      const auto& a = next.name(s);
      const auto& b = next.name(t);
      if (!curr.contains(a) || !curr.contains(b) || curr.has_edge(a, b)) continue;
      out.insert({a, b});
    }
  }
  return out;
}

bool edge_on_cycle(const DependencyGraph& g, const std::vector<std::size_t>& comp, const Edge& e) {
  auto s = g.index_of(e.source);
  auto t = g.index_of(e.target);
  return s && t && g.has_edge(*s, *t) && comp[*s] == comp[*t];
}

}  // namespace

MetricsReport metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn) {
  MetricsReport m{tp, fp, fn, tn};
  const auto dtp = static_cast<double>(tp);
  const auto dfp = static_cast<double>(fp);
  const auto dfn = static_cast<double>(fn);
  const auto dtn = static_cast<double>(tn);
  m.precision = safe_div(dtp, dtp + dfp);
  m.recall = safe_div(dtp, dtp + dfn);
  m.f1 = f_measure(m.precision, m.recall);
  const double neg_precision = safe_div(dtn, dtn + dfn);
  const double neg_recall = safe_div(dtn, dtn + dfp);
  m.negative_f1 = f_measure(neg_precision, neg_recall);
  const double pos_support = dtp + dfn;
  const double neg_support = dtn + dfp;
  m.weighted_f = safe_div(pos_support * m.f1 + neg_support * m.negative_f1, pos_support + neg_support);
  return m;
}

MetricsReport edge_metrics(const PredictionSet& pred, const Dataset& truth) {
  if (pred.predictions.size() != truth.size()) {
    throw SchemaError("prediction set has " + std::to_string(pred.predictions.size()) +
                      " pairs but the labeled set has " + std::to_string(truth.size()));
  }
  std::map<std::pair<std::string_view, std::string_view>, Label> labels;
  for (const auto& inst : truth.instances) {
    if (!inst.label) throw SchemaError("evaluation set is not labeled");
    if (!labels.emplace(std::make_pair(std::string_view(inst.source), std::string_view(inst.target)),
                        *inst.label)
             .second) {
      throw SchemaError("duplicate pair " + inst.source + " -> " + inst.target + " in evaluation set");
    }
  }
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
  std::set<std::pair<std::string_view, std::string_view>> seen;
  for (const auto& p : pred.predictions) {
    const auto key = std::make_pair(std::string_view(p.source), std::string_view(p.target));
    auto it = labels.find(key);
    if (it == labels.end() || !seen.insert(key).second) {
      throw SchemaError("pair " + p.source + " -> " + p.target + " is not matched by the evaluation set");
    }
    const bool actual = it->second == Label::Positive;
    if (p.will_appear && actual) ++tp;
    else if (p.will_appear) ++fp;
    else if (actual) ++fn;
    else ++tn;
  }
  return metrics_from_counts(tp, fp, fn, tn);
}

MetricsReport cycle_metrics(const AnticipatedSmells& anticipated, const DependencyGraph& curr,
                            const DependencyGraph& next) {
  if (anticipated.kind != SmellKind::CyclicDependency) {
    throw ArgumentError("cycle metrics need a cyclic-dependency report");
  }
  cycles::Adjacency adj(next.node_count());
  for (std::size_t v = 0; v < next.node_count(); ++v) {
    auto out = next.out_adjacent(v);
    adj[v].assign(out.begin(), out.end());
  }
  const auto comp = cycles::strongly_connected_components(adj);
  const auto actual = new_cycle_edges(curr, next);

  std::set<Edge> triggering(anticipated.triggering_edges.begin(), anticipated.triggering_edges.end());
  std::size_t tp = 0, fp = 0;
  for (const auto& e : triggering) {
    if (edge_on_cycle(next, comp, e)) ++tp;
    else ++fp;
  }
  std::size_t fn = 0;
  for (const auto& e : actual) {
    if (!triggering.count(e)) ++fn;
  }
  // Universe of scoring units: ordered non-adjacent pairs of curr.
  const auto n = curr.node_count();
  const std::size_t universe = n < 2 ? 0 : n * (n - 1) - curr.edge_count();
  const std::size_t tn = universe >= tp + fp + fn ? universe - tp - fp - fn : 0;
  return metrics_from_counts(tp, fp, fn, tn);
}

MetricsReport hub_metrics(const AnticipatedSmells& anticipated, const DependencyGraph& curr,
                          const DependencyGraph& next, double fraction) {
  if (anticipated.kind != SmellKind::HubLike) {
    throw ArgumentError("hub metrics need a hub-like report");
  }
  std::set<NodeId> before;
  for (const auto& h : detect_hubs(curr, fraction).hubs) before.insert(h.node);
  std::set<NodeId> emerging;
  for (const auto& h : detect_hubs(next, fraction).hubs) {
    if (curr.contains(h.node) && !before.count(h.node)) emerging.insert(h.node);
  }
  std::set<NodeId> reported;
  for (const auto& h : anticipated.hubs) reported.insert(h.node);

  std::size_t tp = 0, fp = 0, fn = 0;
  for (const auto& n : reported) {
    if (emerging.count(n)) ++tp;
    else ++fp;
  }
  for (const auto& n : emerging) {
    if (!reported.count(n)) ++fn;
  }
  const auto universe = curr.node_count();
  const std::size_t tn = universe >= tp + fp + fn ? universe - tp - fp - fn : 0;
  return metrics_from_counts(tp, fp, fn, tn);
}

MetricsReport smell_metrics(const AnticipatedSmells& anticipated, const DependencyGraph& curr,
                            const DependencyGraph& next, double fraction) {
  if (anticipated.kind == SmellKind::CyclicDependency) return cycle_metrics(anticipated, curr, next);
  return hub_metrics(anticipated, curr, next, fraction);
}

}  // namespace smellcast
