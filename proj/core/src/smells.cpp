#include "smellcast/smells.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "smellcast/cycles.hpp"
#include "smellcast/errors.hpp"

namespace smellcast {

namespace {

cycles::Adjacency adjacency_of(const DependencyGraph& g) {
  cycles::Adjacency adj(g.node_count());
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    auto out = g.out_adjacent(v);
    adj[v].assign(out.begin(), out.end());
  }
  return adj;
}

std::vector<std::vector<NodeId>> to_names(const DependencyGraph& g,
                                          const std::vector<std::vector<std::size_t>>& found) {
  std::vector<std::vector<NodeId>> out;
  out.reserve(found.size());
  for (const auto& c : found) {
    std::vector<NodeId> names;
    for (auto v : c) names.push_back(g.name(v));
    out.push_back(std::move(names));
  }
  return out;
}

void check_fraction(double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ArgumentError("hub fraction must lie in (0, 1]");
  }
}

// Validates predicted edges against curr and returns them sorted and unique.
std::vector<Edge> checked_predictions(const DependencyGraph& curr, std::span<const Edge> predicted) {
  std::vector<Edge> out(predicted.begin(), predicted.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  for (const auto& e : out) {
    const auto s = curr.require_index(e.source);
    const auto t = curr.require_index(e.target);
    if (s == t) throw ArgumentError("predicted self-loop on " + e.source);
    if (curr.has_edge(s, t)) {
      throw ArgumentError("predicted edge " + e.source + " -> " + e.target + " already exists in '" +
                          curr.version_id() + "'");
    }
  }
  return out;
}

}  // namespace

CycleReport detect_cycles(const DependencyGraph& g, std::size_t max_cycles) {
  CycleReport report;
  std::vector<std::vector<std::size_t>> found;
  std::size_t total_length = 0;
  cycles::enumerate_all(adjacency_of(g), [&](std::span<const std::size_t> c) {
    if (found.size() >= max_cycles) {
      report.truncated = true;
      return false;
    }
    found.push_back(cycles::canonical_rotation(c));
    total_length += c.size();
    return true;
  });
  std::sort(found.begin(), found.end());
  report.count = found.size();
  report.mean_length =
      found.empty() ? 0.0 : static_cast<double>(total_length) / static_cast<double>(found.size());
  report.cycles = to_names(g, found);
  return report;
}

bool is_hub(std::size_t in_degree, std::size_t out_degree, const Median& median_in,
            const Median& median_out, double fraction) {
  if (!median_in.exceeded_by(in_degree) || !median_out.exceeded_by(out_degree)) return false;
  const auto balance = in_degree > out_degree ? in_degree - out_degree : out_degree - in_degree;
  return static_cast<double>(balance) < fraction * static_cast<double>(in_degree + out_degree);
}

HubReport detect_hubs(const DependencyGraph& g, double fraction) {
  check_fraction(fraction);
  const auto stats = degree_stats(g);
  HubReport report;
  report.median_in = stats.median_in;
  report.median_out = stats.median_out;
  report.fraction = fraction;
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    const auto in = stats.in_degree[v];
    const auto out = stats.out_degree[v];
    if (!is_hub(in, out, stats.median_in, stats.median_out, fraction)) continue;
    report.hubs.push_back({g.name(v), in, out, in > out ? in - out : out - in,
                           fraction * static_cast<double>(in + out)});
  }
  return report;
}

std::string_view smell_kind_name(SmellKind kind) {
  return kind == SmellKind::CyclicDependency ? "cyclic-dependency" : "hub-like";
}

SmellKind smell_kind_from_name(std::string_view name) {
  if (name == "cyclic-dependency") return SmellKind::CyclicDependency;
  if (name == "hub-like") return SmellKind::HubLike;
  throw ArgumentError("unknown smell kind '" + std::string(name) + "'");
}

AnticipatedSmells cycle_filter(const DependencyGraph& curr, std::span<const Edge> predicted,
                               std::size_t max_cycles) {
  const auto edges = checked_predictions(curr, predicted);
  AnticipatedSmells out;
  out.kind = SmellKind::CyclicDependency;
  out.versions = {curr.version_id()};
  out.cycle_cap = max_cycles;

  auto adj = adjacency_of(curr);
  std::vector<std::pair<std::size_t, std::size_t>> pred_idx;
  for (const auto& e : edges) {
    const auto s = *curr.index_of(e.source);
    const auto t = *curr.index_of(e.target);
    pred_idx.emplace_back(s, t);
    auto& lst = adj[s];
    lst.insert(std::lower_bound(lst.begin(), lst.end(), t), t);
  }

  // Cycles are attributed to their first predicted edge (in sorted order):
  // the search for edge i runs after edges 0..i-1 have been removed.
  std::vector<std::vector<std::size_t>> found;
  std::set<std::size_t> triggering;
  for (std::size_t i = 0; i < pred_idx.size() && !out.truncated; ++i) {
    const auto [s, t] = pred_idx[i];
    cycles::enumerate_through_edge(adj, s, t, [&](std::span<const std::size_t> c) {
      if (found.size() >= max_cycles) {
        out.truncated = true;
        return false;
      }
      found.push_back(cycles::canonical_rotation(c));
      // Mark every predicted edge on the cycle, not just the one searched.
      for (std::size_t k = 0; k < c.size(); ++k) {
        const auto a = c[k];
        const auto b = c[(k + 1) % c.size()];
        auto it = std::lower_bound(pred_idx.begin(), pred_idx.end(), std::make_pair(a, b));
        if (it != pred_idx.end() && *it == std::make_pair(a, b)) {
          triggering.insert(static_cast<std::size_t>(it - pred_idx.begin()));
        }
      }
      return true;
    });
    auto& lst = adj[s];
    lst.erase(std::lower_bound(lst.begin(), lst.end(), t));
  }

  std::sort(found.begin(), found.end());
  out.cycles = to_names(curr, found);
  for (auto i : triggering) out.triggering_edges.push_back(edges[i]);
  return out;
}

AnticipatedSmells hub_filter(const DependencyGraph& curr, std::span<const Edge> predicted,
                             double fraction) {
  check_fraction(fraction);
  const auto edges = checked_predictions(curr, predicted);
  AnticipatedSmells out;
  out.kind = SmellKind::HubLike;
  out.versions = {curr.version_id()};
  out.fraction = fraction;
  if (edges.empty() || curr.empty()) return out;

  const auto augmented = curr.with_edges(edges, curr.version_id() + "+predicted");
  const auto before = degree_stats(curr);
  const auto after = degree_stats(augmented);

  std::set<NodeId> candidates;
  for (const auto& e : edges) {
    candidates.insert(e.source);
    candidates.insert(e.target);
  }
  std::set<NodeId> reported;
  for (const auto& node : candidates) {
    // Both graphs share one node set, hence one index space.
    const auto v = *curr.index_of(node);
    const auto in = after.in_degree[v];
    const auto deg_out = after.out_degree[v];
    if (!is_hub(in, deg_out, after.median_in, after.median_out, fraction)) continue;
    if (is_hub(before.in_degree[v], before.out_degree[v], before.median_in, before.median_out,
               fraction)) {
      continue;
    }
    reported.insert(node);
    out.hubs.push_back({node, in, deg_out, in > deg_out ? in - deg_out : deg_out - in,
                        fraction * static_cast<double>(in + deg_out)});
  }
  for (const auto& e : edges) {
    if (reported.count(e.source) || reported.count(e.target)) out.triggering_edges.push_back(e);
  }
  return out;
}

}  // namespace smellcast
