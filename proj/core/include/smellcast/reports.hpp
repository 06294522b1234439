#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "smellcast/evaluation.hpp"
#include "smellcast/features.hpp"
#include "smellcast/smells.hpp"

// JSON reports with a fixed key order. Every writer has a matching reader so
// that pipeline outputs can be loaded back.
namespace smellcast::reports {

inline constexpr int kReportFormatVersion = 1;

void write_smell_report(std::ostream& out, const AnticipatedSmells& smells, std::uint64_t seed);
AnticipatedSmells parse_smell_report(std::istream& in, const std::string& source_name);

void write_cycle_report(std::ostream& out, const CycleReport& report, const std::string& version,
                        std::size_t cap);
void write_hub_report(std::ostream& out, const HubReport& report, const std::string& version);

struct NamedMetrics {
  std::string scope;  // "edges", "cyclic-dependency" or "hub-like"
  MetricsReport metrics;

  friend bool operator==(const NamedMetrics&, const NamedMetrics&) = default;
};

struct MetricsDocument {
  std::uint64_t seed = 0;
  std::vector<std::string> versions;
  std::string model_id;
  std::vector<NamedMetrics> sections;

  friend bool operator==(const MetricsDocument&, const MetricsDocument&) = default;
};

void write_metrics_report(std::ostream& out, const MetricsDocument& doc);
MetricsDocument parse_metrics_report(std::istream& in, const std::string& source_name);
// One row per section, for plotting.
void write_metrics_csv(std::ostream& out, const MetricsDocument& doc);

void write_feature_ranking(std::ostream& out, const std::vector<FeatureGain>& ranking,
                           const std::vector<std::string>& retained, std::size_t bins,
                           const std::string& policy);

}  // namespace smellcast::reports
