#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "smellcast/content.hpp"
#include "smellcast/graph.hpp"

namespace smellcast {

enum class Label : std::uint8_t { Negative, Positive };

struct Instance {
  NodeId source;
  NodeId target;
  std::vector<double> features;  // aligned with Dataset::feature_names
  std::optional<Label> label;

  friend bool operator==(const Instance&, const Instance&) = default;
};

enum class DatasetKind { Train, Test };

struct Dataset {
  DatasetKind kind = DatasetKind::Train;
  // Train: {v_{n-1}, v_n}. Test: {v_n} or, once labeled, {v_n, v_{n+1}}.
  std::vector<std::string> provenance;
  std::vector<std::string> feature_names;
  std::vector<Instance> instances;
  // Description of the feature selection that produced this column set.
  std::string selection;

  std::size_t size() const noexcept { return instances.size(); }
  bool empty() const noexcept { return instances.empty(); }
  std::size_t count(Label label) const;
  bool labeled() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

struct FeatureOptions {
  bool content = true;    // append the five per-channel cosine columns
  bool hierarchy = true;  // package bags include nested sub-packages
};

// All ordered pairs over the nodes shared by both versions. Features come
// from `prev`; a pair is positive when it is an edge of `prev` or of `curr`.
// A null corpus is treated as empty. Throws DomainError if the versions share
// no node.
Dataset build_training_set(const DependencyGraph& prev, const DependencyGraph& curr,
                           const ContentCorpus* corpus_prev, const FeatureOptions& options = {});

// Every ordered pair of `curr` that is not an edge, unlabeled, no sampling.
Dataset build_test_set(const DependencyGraph& curr, const ContentCorpus* corpus_curr,
                       const FeatureOptions& options = {});

// Labels a test set against the realized next version. Pairs with an
// endpoint missing from `next` become negative and are counted in `vanished`.
Dataset label_for_evaluation(const Dataset& test, const DependencyGraph& next,
                             std::size_t* vanished = nullptr);

// Delimited table: provenance line ("#train a b" / "#test a [b]"), optional
// "#selection ..." line, header row, one row per pair, label column 1/0/empty.
void write_dataset(std::ostream& out, const Dataset& ds);
Dataset parse_dataset(std::istream& in, const std::string& source_name);
Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const std::filesystem::path& path, const Dataset& ds);

}  // namespace smellcast
