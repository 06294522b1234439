#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "smellcast/content.hpp"
#include "smellcast/dataset.hpp"
#include "smellcast/graph.hpp"

namespace smellcast {

inline constexpr std::size_t kTopologicalFeatureCount = 7;
inline constexpr std::size_t kContentFeatureCount = kChannelCount;

// Canonical column order: topological first, then one cosine per channel.
inline constexpr std::array<std::string_view, kTopologicalFeatureCount> kTopologicalFeatureNames = {
    "adamic_adar", "common_neighbors", "resource_allocation", "sorensen",
    "kulczynski",  "relative_matching", "russell_rao"};
inline constexpr std::array<std::string_view, kContentFeatureCount> kContentFeatureNames = {
    "cosine_fields", "cosine_methods", "cosine_comments", "cosine_method_usage",
    "cosine_variable_defs"};

std::vector<std::string> canonical_feature_names(bool include_content);

struct FeatureVector {
  std::vector<std::string> names;
  std::vector<double> values;

  // Throws LookupError for an unknown name.
  double at(std::string_view name) const;
  std::size_t size() const noexcept { return values.size(); }
};

// Contingency counts for a node pair over the undirected projection, with u
// and v removed from each other's neighbourhood.
struct PairContext {
  std::vector<std::size_t> gamma_u;  // node indices, sorted
  std::vector<std::size_t> gamma_v;
  std::size_t a = 0;  // |Γu ∩ Γv|
  std::size_t b = 0;  // |Γu \ Γv|
  std::size_t c = 0;  // |Γv \ Γu|
  std::size_t d = 0;  // nodes outside {u, v} ∪ Γu ∪ Γv
  std::size_t n = 0;  // |V|
};

// Throws DomainError when u == v and LookupError for unknown nodes.
PairContext pair_context(const DependencyGraph& g, std::string_view u, std::string_view v);

FeatureVector topo_features(const DependencyGraph& g, std::string_view u, std::string_view v);

// Index-based variant used when filling whole datasets.
void topo_features_into(const DependencyGraph& g, std::size_t u, std::size_t v,
                        std::span<double, kTopologicalFeatureCount> out);

FeatureVector content_features(const ContentCorpus& corpus, std::string_view u,
                               std::string_view v, bool hierarchy);

// Package bags resolved once per node so pair scoring is a sparse dot product.
class ContentIndex {
 public:
  ContentIndex(const ContentCorpus& corpus, const std::vector<NodeId>& nodes, bool hierarchy);

  void similarities_into(std::size_t u, std::size_t v,
                         std::span<double, kContentFeatureCount> out) const;

 private:
  struct Entry {
    std::vector<std::pair<std::string, double>> terms;  // sorted by token
    double norm_sq = 0.0;
  };
  std::vector<std::array<Entry, kChannelCount>> entries_;
};

struct FeatureGain {
  std::string name;
  double gain = 0.0;  // bits

  friend bool operator==(const FeatureGain&, const FeatureGain&) = default;
};

// Entropy in bits of a discrete distribution given as counts.
double entropy_bits(std::span<const std::size_t> counts);

// Equal-width discretization into `bins` over each column's [min, max];
// gain = H(label) - H(label | bin). Sorted by descending gain, ties in column
// order. Throws DomainError unless both labels are present.
std::vector<FeatureGain> information_gain(const Dataset& ds, std::size_t bins = 10);

struct TopK {
  std::size_t k = 0;
};
struct MinGain {
  double threshold = 0.0;  // keep features whose gain is strictly above
};
using SelectionPolicy = std::variant<TopK, MinGain>;

std::string describe(const SelectionPolicy& policy);

// Retained columns keep their original relative order.
Dataset select_features(const Dataset& ds, const SelectionPolicy& policy, std::size_t bins = 10);

// Restricts `ds` to `names` in that order. Throws SchemaError if one is absent.
Dataset project_features(const Dataset& ds, std::span<const std::string> names);

}  // namespace smellcast
