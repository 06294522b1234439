#pragma once

#include <cstddef>
#include <exception>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "smellcast/classifier.hpp"
#include "smellcast/features.hpp"
#include "smellcast/reports.hpp"
#include "smellcast/smells.hpp"

namespace smellcast {

enum class SmellSelection { Cycles, Hubs, All };

SmellSelection parse_smell_selection(std::string_view name);
std::string_view smell_selection_name(SmellSelection s);

struct PipelineConfig {
  // Graphs for v_{n-1} and v_n are required; v_{n+1} enables evaluation.
  std::filesystem::path prev;
  std::filesystem::path curr;
  std::filesystem::path next;
  // Both or neither; content features are used only when both are given.
  std::filesystem::path corpus_prev;
  std::filesystem::path corpus_curr;
  std::filesystem::path out_dir = "smellcast-out";

  std::size_t bins = 10;
  SelectionPolicy selection = MinGain{0.0};
  bool hierarchy = true;
  TrainConfig classifier;

  SmellSelection smells = SmellSelection::All;
  double fraction = kDefaultHubFraction;
  std::size_t cycle_cap = kDefaultCycleCap;
};

// Flat "key = value" text; '#' starts a comment. Relative paths are resolved
// against `base_dir`. Throws ValidationError for unknown keys or bad values.
void apply_config_text(PipelineConfig& cfg, std::istream& in, const std::string& source_name,
                       const std::filesystem::path& base_dir);
void apply_config_value(PipelineConfig& cfg, std::string_view key, std::string_view value,
                        const std::filesystem::path& base_dir = {});
PipelineConfig load_config(const std::filesystem::path& path);

// Throws ValidationError.
void validate(const PipelineConfig& cfg);

struct PipelineResult {
  std::vector<std::string> warnings;
  std::vector<std::filesystem::path> written;
  std::size_t training_instances = 0;
  std::size_t test_instances = 0;
  std::vector<std::string> retained_features;
  std::vector<Edge> predicted_edges;
  std::optional<AnticipatedSmells> cycles;
  std::optional<AnticipatedSmells> hubs;
  std::optional<reports::MetricsDocument> metrics;
};

// Loads the versions, trains, predicts, filters and (with v_{n+1}) evaluates,
// writing every artifact into cfg.out_dir. Throws on failure; see
// exit_status_for for the mapping to process exit codes.
PipelineResult run_pipeline(const PipelineConfig& cfg);

// 1 for configuration/validation problems, 2 for data problems.
int exit_status_for(const std::exception& e);

}  // namespace smellcast
