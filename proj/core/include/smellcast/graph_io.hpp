#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "smellcast/graph.hpp"

namespace smellcast {

enum class GraphFormat {
  EdgeList,  // canonical: "#version <id>", "node <name>", "edge <source> <target>"
  Dot,       // restricted digraph subset, import only
};

struct GraphLoadOptions {
  // Reject edges whose endpoints were not introduced by a node declaration.
  bool require_declared_nodes = false;
};

// .dot and .gv select Dot; everything else is EdgeList.
GraphFormat graph_format_for(const std::filesystem::path& path);

GraphFormat parse_graph_format(std::string_view name);

DependencyGraph load_graph(const std::filesystem::path& path, GraphFormat format,
                           const GraphLoadOptions& options = {},
                           std::vector<std::string>* warnings = nullptr);

// `source_name` is used in error messages; for Dot input without a graph name
// it also becomes the version id.
DependencyGraph parse_edge_list(std::istream& in, const std::string& source_name,
                                const GraphLoadOptions& options = {},
                                std::vector<std::string>* warnings = nullptr);
DependencyGraph parse_dot(std::istream& in, const std::string& source_name,
                          const GraphLoadOptions& options = {},
                          std::vector<std::string>* warnings = nullptr);

// Canonical edge-list text: header, every node, then every edge, all sorted.
void write_edge_list(std::ostream& out, const DependencyGraph& g);
std::string to_edge_list(const DependencyGraph& g);
void save_graph(const std::filesystem::path& path, const DependencyGraph& g);

}  // namespace smellcast
