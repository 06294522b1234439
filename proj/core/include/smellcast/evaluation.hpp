#pragma once

#include <cstddef>

#include "smellcast/classifier.hpp"
#include "smellcast/dataset.hpp"
#include "smellcast/graph.hpp"
#include "smellcast/smells.hpp"

namespace smellcast {

// Positive-class precision/recall/F1 plus the support-weighted F1 over both
// classes. Every ratio with a zero denominator is 0.
struct MetricsReport {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  double negative_f1 = 0.0;
  double weighted_f = 0.0;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

MetricsReport metrics_from_counts(std::size_t tp, std::size_t fp, std::size_t fn, std::size_t tn);

// Throws SchemaError unless both sides cover the same pairs and `truth` is
// fully labeled.
MetricsReport edge_metrics(const PredictionSet& pred, const Dataset& truth);

// Cyclic dependency, scored per triggering edge. Positives are edges new in
// `next` (between packages already in `curr`) that lie on a cycle of `next`.
// Throws ArgumentError for a hub-like report.
MetricsReport cycle_metrics(const AnticipatedSmells& anticipated, const DependencyGraph& curr,
                            const DependencyGraph& next);

// Hub-like, scored per node. Positives are packages of `curr` that are hubs
// in `next` but not in `curr`. Throws ArgumentError for a cycle report.
MetricsReport hub_metrics(const AnticipatedSmells& anticipated, const DependencyGraph& curr,
                          const DependencyGraph& next, double fraction);

// Dispatches on anticipated.kind.
MetricsReport smell_metrics(const AnticipatedSmells& anticipated, const DependencyGraph& curr,
                            const DependencyGraph& next, double fraction);

}  // namespace smellcast
