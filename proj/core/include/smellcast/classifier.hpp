#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "smellcast/dataset.hpp"

namespace smellcast {

enum class ClassWeightMode {
  InverseFrequency,  // n / (2 n_c): per-instance weights average to 1
  Uniform,
  Manual,            // TrainConfig::positive_weight / negative_weight
};

struct TrainConfig {
  double l2_lambda = 1e-3;
  std::size_t max_iters = 5000;
  double tolerance = 1e-8;  // stop once the accepted loss decrease is below this
  ClassWeightMode class_weight_mode = ClassWeightMode::InverseFrequency;
  double positive_weight = 1.0;
  double negative_weight = 1.0;
  double threshold = 0.5;
  std::uint64_t seed = 42;  // recorded only; full-batch training draws no randomness
};

struct FeatureScaling {
  double mean = 0.0;
  double stddev = 1.0;
  bool constant = false;  // zero variance in training data; weight pinned to 0

  friend bool operator==(const FeatureScaling&, const FeatureScaling&) = default;
};

// Class-weighted L2 logistic regression over z-standardized features.
struct PredictionModel {
  std::vector<std::string> feature_names;
  std::vector<FeatureScaling> scaling;
  std::vector<double> weights;
  double bias = 0.0;
  double positive_weight = 1.0;
  double negative_weight = 1.0;
  double threshold = 0.5;
  double l2_lambda = 0.0;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  double final_loss = 0.0;

  // Stable content hash of the serialized model, used in report provenance.
  std::string id() const;

  friend bool operator==(const PredictionModel&, const PredictionModel&) = default;
};

// Weighted regularized logistic loss on already standardized rows:
//   L(w, b) = (1/N) Σ s_i [softplus(z_i) - y_i z_i] + (λ/2) |w|²,  z_i = w·x_i + b.
// Parameter vector layout: feature weights, then bias.
class LogisticObjective {
 public:
  LogisticObjective(std::vector<double> rows, std::size_t features, std::vector<double> targets,
                    std::vector<double> sample_weights, double l2_lambda);

  std::size_t dimension() const noexcept { return features_ + 1; }
  std::size_t samples() const noexcept { return targets_.size(); }

  double value(std::span<const double> theta) const;
  // Returns the loss and writes its gradient into `grad`.
  double value_and_gradient(std::span<const double> theta, std::span<double> grad) const;

 private:
  std::vector<double> rows_;  // row-major, samples x features
  std::size_t features_;
  std::vector<double> targets_;
  std::vector<double> sample_weights_;
  double l2_lambda_;
};

// Throws TrainingError when the dataset lacks a class and DataError on
// non-finite features.
PredictionModel train(const Dataset& ds, const TrainConfig& cfg = {});

struct Prediction {
  NodeId source;
  NodeId target;
  double probability = 0.0;
  bool will_appear = false;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

struct PredictionSet {
  std::string version_id;  // graph the candidate pairs came from
  std::string model_id;
  double threshold = 0.5;
  std::vector<Prediction> predictions;

  std::vector<Edge> predicted_edges() const;  // will_appear == true, sorted

  friend bool operator==(const PredictionSet&, const PredictionSet&) = default;
};

double probability(const PredictionModel& m, std::span<const double> raw_features);

// Throws SchemaError unless the dataset columns equal the model features.
PredictionSet predict(const PredictionModel& m, const Dataset& ds);

void write_model(std::ostream& out, const PredictionModel& m);
PredictionModel parse_model(std::istream& in, const std::string& source_name);
PredictionModel load_model(const std::filesystem::path& path);
void save_model(const std::filesystem::path& path, const PredictionModel& m);

void write_predictions(std::ostream& out, const PredictionSet& p);
PredictionSet parse_predictions(std::istream& in, const std::string& source_name);
PredictionSet load_predictions(const std::filesystem::path& path);
void save_predictions(const std::filesystem::path& path, const PredictionSet& p);

}  // namespace smellcast
