#include "smellcast/graph.hpp"

#include <algorithm>
#include <iterator>
#include <set>
#include <utility>

#include "smellcast/errors.hpp"
#include "smellcast/text.hpp"

namespace smellcast {

namespace {

NodeId clean_name(std::string_view raw) {
  auto name = text::trim(raw);
  if (name.empty()) throw ArgumentError("empty node name");
  return NodeId(name);
}

}  // namespace

DependencyGraph::DependencyGraph(std::string version_id, std::vector<NodeId> nodes,
                                 std::vector<Edge> edges, std::vector<std::string>* warnings)
    : version_(std::move(version_id)) {
  for (auto& n : nodes) n = clean_name(n);
  for (auto& e : edges) {
    e.source = clean_name(e.source);
    e.target = clean_name(e.target);
    nodes.push_back(e.source);
    nodes.push_back(e.target);
  }
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  nodes_ = std::move(nodes);

  const std::size_t n = nodes_.size();
  out_.assign(n, {});
  in_.assign(n, {});
  undirected_.assign(n, {});

  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& e : edges) {
    if (e.source == e.target) {
      if (warnings) warnings->push_back("dropped self-loop on " + e.source);
      continue;
    }
    const auto s = *index_of(e.source);
    const auto t = *index_of(e.target);
    if (!seen.emplace(s, t).second) {
      if (warnings) warnings->push_back("collapsed duplicate edge " + e.source + " -> " + e.target);
      continue;
    }
  }
  for (const auto& [s, t] : seen) {
    out_[s].push_back(t);
    in_[t].push_back(s);
  }
  edge_count_ = seen.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(in_[i].begin(), in_[i].end());
    auto& u = undirected_[i];
    std::set_union(out_[i].begin(), out_[i].end(), in_[i].begin(), in_[i].end(),
                   std::back_inserter(u));
  }
}

std::vector<Edge> DependencyGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (std::size_t s = 0; s < nodes_.size(); ++s) {
    for (auto t : out_[s]) out.push_back({nodes_[s], nodes_[t]});
  }
  return out;
}

std::optional<std::size_t> DependencyGraph::index_of(std::string_view node) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), node,
                             [](const NodeId& a, std::string_view b) { return a < b; });
  if (it == nodes_.end() || *it != node) return std::nullopt;
  return static_cast<std::size_t>(it - nodes_.begin());
}

std::size_t DependencyGraph::require_index(std::string_view node) const {
  auto idx = index_of(node);
  if (!idx) throw LookupError("unknown node '" + std::string(node) + "' in version '" + version_ + "'");
  return *idx;
}

bool DependencyGraph::has_edge(std::size_t source, std::size_t target) const {
  const auto& adj = out_[source];
  return std::binary_search(adj.begin(), adj.end(), target);
}

bool DependencyGraph::has_edge(std::string_view source, std::string_view target) const {
  auto s = index_of(source);
  auto t = index_of(target);
  return s && t && has_edge(*s, *t);
}

DependencyGraph DependencyGraph::with_edges(std::span<const Edge> extra,
                                            std::string version_id) const {
  auto all = edges();
  for (const auto& e : extra) {
    require_index(e.source);
    require_index(e.target);
    all.push_back(e);
  }
  return DependencyGraph(std::move(version_id), nodes_, std::move(all));
}

bool operator==(const DependencyGraph& a, const DependencyGraph& b) {
  return a.version_ == b.version_ && a.nodes_ == b.nodes_ && a.out_ == b.out_;
}

GraphDelta diff_graphs(const DependencyGraph& older, const DependencyGraph& newer) {
  GraphDelta d;
  const auto& on = older.nodes();
  const auto& nn = newer.nodes();
  std::set_difference(nn.begin(), nn.end(), on.begin(), on.end(),
                      std::back_inserter(d.added_nodes));
  std::set_difference(on.begin(), on.end(), nn.begin(), nn.end(),
                      std::back_inserter(d.removed_nodes));
  const auto oe = older.edges();
  const auto ne = newer.edges();
  std::set_difference(ne.begin(), ne.end(), oe.begin(), oe.end(),
                      std::back_inserter(d.added_edges));
  std::set_difference(oe.begin(), oe.end(), ne.begin(), ne.end(),
                      std::back_inserter(d.removed_edges));
  return d;
}

DependencyGraph apply_delta(const DependencyGraph& older, const GraphDelta& delta,
                            std::string version_id) {
  std::vector<NodeId> nodes;
  const auto& on = older.nodes();
  std::set_difference(on.begin(), on.end(), delta.removed_nodes.begin(),
                      delta.removed_nodes.end(), std::back_inserter(nodes));
  nodes.insert(nodes.end(), delta.added_nodes.begin(), delta.added_nodes.end());

  std::vector<Edge> edges;
  const auto oe = older.edges();
  std::set_difference(oe.begin(), oe.end(), delta.removed_edges.begin(),
                      delta.removed_edges.end(), std::back_inserter(edges));
  edges.insert(edges.end(), delta.added_edges.begin(), delta.added_edges.end());
  return DependencyGraph(std::move(version_id), std::move(nodes), std::move(edges));
}

std::vector<NodeId> neighbors(const DependencyGraph& g, std::string_view node, NeighborMode mode) {
  const auto i = g.require_index(node);
  std::span<const std::size_t> adj;
  switch (mode) {
    case NeighborMode::In: adj = g.in_adjacent(i); break;
    case NeighborMode::Out: adj = g.out_adjacent(i); break;
    case NeighborMode::All: adj = g.adjacent(i); break;
  }
  std::vector<NodeId> out;
  out.reserve(adj.size());
  for (auto j : adj) out.push_back(g.name(j));
  return out;
}

Median Median::of(std::vector<std::size_t> values) {
  if (values.empty()) throw DomainError("median of an empty list");
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  const auto mid = n / 2;
  if (n % 2 == 1) return Median(2 * static_cast<std::int64_t>(values[mid]));
  return Median(static_cast<std::int64_t>(values[mid - 1]) +
                static_cast<std::int64_t>(values[mid]));
}

DegreeStats degree_stats(const DependencyGraph& g) {
  if (g.empty()) throw DomainError("degree statistics of an empty graph");
  DegreeStats s;
  s.in_degree.resize(g.node_count());
  s.out_degree.resize(g.node_count());
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    s.in_degree[i] = g.in_degree(i);
    s.out_degree[i] = g.out_degree(i);
  }
  s.median_in = Median::of(s.in_degree);
  s.median_out = Median::of(s.out_degree);
  return s;
}

}  // namespace smellcast
