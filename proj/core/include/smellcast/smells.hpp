#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "smellcast/graph.hpp"

namespace smellcast {

inline constexpr std::size_t kDefaultCycleCap = 10000;
inline constexpr double kDefaultHubFraction = 0.25;

struct CycleReport {
  // Each cycle starts at its lexicographically smallest package; the list is
  // sorted lexicographically.
  std::vector<std::vector<NodeId>> cycles;
  std::size_t count = 0;
  double mean_length = 0.0;  // 0 when no cycle was found
  bool truncated = false;    // enumeration stopped at the cap
};

CycleReport detect_cycles(const DependencyGraph& g, std::size_t max_cycles = kDefaultCycleCap);

struct HubEntry {
  NodeId node;
  std::size_t in_degree = 0;
  std::size_t out_degree = 0;
  std::size_t balance = 0;      // |in - out|
  double fraction_bound = 0.0;  // fraction * (in + out)

  friend bool operator==(const HubEntry&, const HubEntry&) = default;
};

struct HubReport {
  std::vector<HubEntry> hubs;  // sorted by node
  Median median_in;
  Median median_out;
  double fraction = kDefaultHubFraction;
};

// in > median_in, out > median_out and |in - out| < fraction * (in + out).
bool is_hub(std::size_t in_degree, std::size_t out_degree, const Median& median_in,
            const Median& median_out, double fraction);

// Throws DomainError on an empty graph, ArgumentError unless 0 < fraction <= 1.
HubReport detect_hubs(const DependencyGraph& g, double fraction = kDefaultHubFraction);

enum class SmellKind { CyclicDependency, HubLike };

std::string_view smell_kind_name(SmellKind kind);
SmellKind smell_kind_from_name(std::string_view name);

// Smells that appear once predicted dependencies are added to the current
// version.
struct AnticipatedSmells {
  SmellKind kind = SmellKind::CyclicDependency;
  std::vector<Edge> triggering_edges;        // sorted
  std::vector<std::vector<NodeId>> cycles;   // cyclic-dependency entities
  std::vector<HubEntry> hubs;                // hub-like entities, degrees on the augmented graph
  std::vector<std::string> versions;         // provenance
  std::string model_id;
  double fraction = kDefaultHubFraction;
  std::size_t cycle_cap = kDefaultCycleCap;
  bool truncated = false;
};

// Reports every elementary cycle of curr ∪ predicted that uses at least one
// predicted edge. Throws ArgumentError if a predicted edge already exists and
// LookupError if an endpoint is unknown.
AnticipatedSmells cycle_filter(const DependencyGraph& curr, std::span<const Edge> predicted,
                               std::size_t max_cycles = kDefaultCycleCap);

// Nodes touched by a predicted edge that satisfy the hub rule on
// curr ∪ predicted (degrees and medians both taken there) but not on curr.
AnticipatedSmells hub_filter(const DependencyGraph& curr, std::span<const Edge> predicted,
                             double fraction = kDefaultHubFraction);

}  // namespace smellcast
