#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

// Elementary-cycle enumeration on index graphs (Johnson's circuit search with
// blocking, one strongly connected component at a time).
namespace smellcast::cycles {

using Adjacency = std::vector<std::vector<std::size_t>>;

// Receives each cycle as a vertex sequence without the closing repeat.
// Returning false stops the enumeration.
using CycleSink = std::function<bool(std::span<const std::size_t>)>;

// Every elementary cycle exactly once, each starting at its smallest vertex.
// Returns false if the sink stopped the search early.
bool enumerate_all(const Adjacency& adj, const CycleSink& sink);

// Every elementary cycle that uses the edge source -> target, each starting
// at `source`. The edge must be present in `adj`.
bool enumerate_through_edge(const Adjacency& adj, std::size_t source, std::size_t target,
                            const CycleSink& sink);

// Strongly connected component id per vertex (Tarjan, iterative).
std::vector<std::size_t> strongly_connected_components(const Adjacency& adj,
                                                       std::size_t* component_count = nullptr);

// Rotates a cycle so that it starts at its smallest vertex.
std::vector<std::size_t> canonical_rotation(std::span<const std::size_t> cycle);

}  // namespace smellcast::cycles
