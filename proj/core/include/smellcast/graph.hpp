#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace smellcast {

// Fully-qualified package name. Identity is the exact (trimmed) string.
using NodeId = std::string;

struct Edge {
  NodeId source;
  NodeId target;

  friend auto operator<=>(const Edge&, const Edge&) = default;
  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class NeighborMode { In, Out, All };

// Directed simple graph of packages for one system version.
//
// Immutable after construction. Nodes are kept in lexicographic order and
// addressed either by name or by their position in that order; every index
// based accessor uses the same numbering as nodes().
class DependencyGraph {
 public:
  DependencyGraph() = default;

  // Edge endpoints that are not listed in `nodes` are added implicitly.
  // Self-loops are dropped and duplicate edges collapsed; each repair appends
  // a message to `warnings` when it is non-null.
  DependencyGraph(std::string version_id, std::vector<NodeId> nodes, std::vector<Edge> edges,
                  std::vector<std::string>* warnings = nullptr);

  const std::string& version_id() const noexcept { return version_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  bool empty() const noexcept { return nodes_.empty(); }

  const std::vector<NodeId>& nodes() const noexcept { return nodes_; }
  // All edges, sorted by (source, target).
  std::vector<Edge> edges() const;

  bool contains(std::string_view node) const { return index_of(node).has_value(); }
  std::optional<std::size_t> index_of(std::string_view node) const;
  // Throws LookupError for unknown nodes.
  std::size_t require_index(std::string_view node) const;
  const NodeId& name(std::size_t index) const { return nodes_[index]; }

  bool has_edge(std::size_t source, std::size_t target) const;
  bool has_edge(std::string_view source, std::string_view target) const;

  std::span<const std::size_t> out_adjacent(std::size_t i) const { return out_[i]; }
  std::span<const std::size_t> in_adjacent(std::size_t i) const { return in_[i]; }
  // Undirected projection: sorted union of in- and out-neighbours.
  std::span<const std::size_t> adjacent(std::size_t i) const { return undirected_[i]; }

  std::size_t out_degree(std::size_t i) const { return out_[i].size(); }
  std::size_t in_degree(std::size_t i) const { return in_[i].size(); }

  // Copy of this graph with `extra` edges added (endpoints must already exist).
  DependencyGraph with_edges(std::span<const Edge> extra, std::string version_id) const;

  friend bool operator==(const DependencyGraph& a, const DependencyGraph& b);

 private:
  std::string version_;
  std::vector<NodeId> nodes_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
  std::vector<std::vector<std::size_t>> undirected_;
  std::size_t edge_count_ = 0;
};

// Exact set differences between two versions.
struct GraphDelta {
  std::vector<NodeId> added_nodes;
  std::vector<NodeId> removed_nodes;
  std::vector<Edge> added_edges;
  std::vector<Edge> removed_edges;

  bool empty() const {
    return added_nodes.empty() && removed_nodes.empty() && added_edges.empty() &&
           removed_edges.empty();
  }
  friend bool operator==(const GraphDelta&, const GraphDelta&) = default;
};

GraphDelta diff_graphs(const DependencyGraph& older, const DependencyGraph& newer);

// Reconstructs `newer` from `older` and diff_graphs(older, newer).
DependencyGraph apply_delta(const DependencyGraph& older, const GraphDelta& delta,
                            std::string version_id);

// Sorted neighbour names. Throws LookupError when `node` is absent.
std::vector<NodeId> neighbors(const DependencyGraph& g, std::string_view node, NeighborMode mode);

// Median of a list of non-negative integers, held exactly as twice its value
// so half-integers compare without rounding.
class Median {
 public:
  Median() = default;
  static Median of(std::vector<std::size_t> values);

  std::int64_t twice() const noexcept { return twice_; }
  double value() const noexcept { return static_cast<double>(twice_) / 2.0; }
  // True when `degree` > median.
  bool exceeded_by(std::size_t degree) const noexcept {
    return 2 * static_cast<std::int64_t>(degree) > twice_;
  }

  friend bool operator==(const Median&, const Median&) = default;

 private:
  explicit Median(std::int64_t twice) : twice_(twice) {}
  std::int64_t twice_ = 0;
};

struct DegreeStats {
  // Indexed like DependencyGraph::nodes().
  std::vector<std::size_t> in_degree;
  std::vector<std::size_t> out_degree;
  Median median_in;
  Median median_out;

  std::size_t total_degree(std::size_t i) const { return in_degree[i] + out_degree[i]; }
};

// Throws DomainError on an empty graph.
DegreeStats degree_stats(const DependencyGraph& g);

}  // namespace smellcast
