#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "smellcast/content.hpp"
#include "smellcast/graph.hpp"
#include "smellcast/pipeline.hpp"

namespace smellcast::testkit {

// Zero-padded so lexicographic order equals numeric order.
std::string node_name(std::size_t i, std::string_view prefix = "n");

// Each ordered pair (i, j), i != j, is an edge with probability p.
DependencyGraph random_graph(std::mt19937_64& rng, std::size_t n, double p,
                             const std::string& version = "rnd");

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(std::string_view tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(std::string_view name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& p);

struct VersionTriple {
  DependencyGraph prev;
  DependencyGraph curr;
  DependencyGraph next;
  ContentCorpus corpus_prev;
  ContentCorpus corpus_curr;
  // Ground truth planted by the generator.
  std::vector<Edge> closing_edges;
  NodeId emerging_hub;
};

// About 40 packages. Three paths a -> b -> c are closed by c -> a in next and
// one package turns into a hub there. Every dependency shares a "link" token
// between its endpoints in the corpus of the version before it appears.
VersionTriple planted_triple(std::uint64_t seed = 7);

// About 100 packages and 900 dependencies with the same content signal.
VersionTriple scale_triple(std::uint64_t seed = 11);

// Writes the triple into `dir` and returns a config pointing at the files.
PipelineConfig write_triple(const VersionTriple& t, const std::filesystem::path& dir,
                            bool with_corpora = true);

// ---- brute-force oracles ----

// Undirected neighbour sets built straight from the edge list.
std::vector<std::set<std::size_t>> oracle_neighbourhoods(const DependencyGraph& g);

// The seven topological indices in canonical order, by set arithmetic.
std::array<double, 7> oracle_topo(const DependencyGraph& g, std::size_t u, std::size_t v);

double oracle_median(std::vector<std::size_t> values);

// Every elementary cycle, rotated to its smallest vertex, sorted.
std::vector<std::vector<std::size_t>> oracle_cycles(const DependencyGraph& g);

bool oracle_is_hub(std::size_t in, std::size_t out, double median_in, double median_out,
                   double fraction);

// Hub names by direct predicate evaluation with double medians.
std::vector<NodeId> oracle_hubs(const DependencyGraph& g, double fraction);

double oracle_entropy(const std::vector<int>& labels);

}  // namespace smellcast::testkit
