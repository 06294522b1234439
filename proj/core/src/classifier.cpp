#include "smellcast/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "smellcast/errors.hpp"
#include "smellcast/text.hpp"

namespace smellcast {

namespace {

constexpr int kModelFormatVersion = 1;
constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 60;

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

LogisticObjective::LogisticObjective(std::vector<double> rows, std::size_t features,
                                     std::vector<double> targets,
                                     std::vector<double> sample_weights, double l2_lambda)
    : rows_(std::move(rows)),
      features_(features),
      targets_(std::move(targets)),
      sample_weights_(std::move(sample_weights)),
      l2_lambda_(l2_lambda) {
  if (rows_.size() != features_ * targets_.size() || sample_weights_.size() != targets_.size()) {
    throw ArgumentError("objective dimensions disagree");
  }
}

double LogisticObjective::value(std::span<const double> theta) const {
  const auto w = theta.first(features_);
  const double b = theta[features_];
  double loss = 0.0;
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    const double z = dot(w, std::span<const double>(rows_).subspan(i * features_, features_)) + b;
    loss += sample_weights_[i] * (softplus(z) - targets_[i] * z);
  }
  loss /= static_cast<double>(targets_.size());
  return loss + 0.5 * l2_lambda_ * dot(w, w);
}

double LogisticObjective::value_and_gradient(std::span<const double> theta,
                                             std::span<double> grad) const {
  const auto w = theta.first(features_);
  const double b = theta[features_];
  std::fill(grad.begin(), grad.end(), 0.0);
  double loss = 0.0;
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    const auto x = std::span<const double>(rows_).subspan(i * features_, features_);
    const double z = dot(w, x) + b;
    loss += sample_weights_[i] * (softplus(z) - targets_[i] * z);
    const double r = sample_weights_[i] * (sigmoid(z) - targets_[i]);
    for (std::size_t j = 0; j < features_; ++j) grad[j] += r * x[j];
    grad[features_] += r;
  }
  const double inv_n = 1.0 / static_cast<double>(targets_.size());
  loss *= inv_n;
  for (auto& g : grad) g *= inv_n;
  for (std::size_t j = 0; j < features_; ++j) grad[j] += l2_lambda_ * w[j];
  return loss + 0.5 * l2_lambda_ * dot(w, w);
}

PredictionModel train(const Dataset& ds, const TrainConfig& cfg) {
  if (cfg.l2_lambda < 0.0 || !std::isfinite(cfg.l2_lambda)) throw ArgumentError("l2_lambda must be >= 0");
  if (!(cfg.threshold > 0.0 && cfg.threshold < 1.0)) throw ArgumentError("threshold must lie in (0, 1)");
  const std::size_t n = ds.size();
  const std::size_t k = ds.feature_names.size();

  std::size_t positives = 0;
  for (const auto& inst : ds.instances) {
    if (!inst.label) throw TrainingError("training needs a fully labeled dataset");
    if (inst.features.size() != k) throw SchemaError("instance width differs from the feature header");
    for (double v : inst.features) {
      if (!std::isfinite(v)) {
        throw DataError("non-finite feature value for pair " + inst.source + " -> " + inst.target);
      }
    }
    if (*inst.label == Label::Positive) ++positives;
  }
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) {
    throw TrainingError("training data contains a single class (" + std::to_string(positives) +
                        " positive, " + std::to_string(negatives) + " negative)");
  }

  PredictionModel m;
  m.feature_names = ds.feature_names;
  m.threshold = cfg.threshold;
  m.l2_lambda = cfg.l2_lambda;
  m.seed = cfg.seed;
  switch (cfg.class_weight_mode) {
    case ClassWeightMode::InverseFrequency:
      m.positive_weight = static_cast<double>(n) / (2.0 * static_cast<double>(positives));
      m.negative_weight = static_cast<double>(n) / (2.0 * static_cast<double>(negatives));
      break;
    case ClassWeightMode::Uniform:
      m.positive_weight = m.negative_weight = 1.0;
      break;
    case ClassWeightMode::Manual:
      if (!(cfg.positive_weight > 0.0) || !(cfg.negative_weight > 0.0)) {
        throw ArgumentError("manual class weights must be positive");
      }
      m.positive_weight = cfg.positive_weight;
      m.negative_weight = cfg.negative_weight;
      break;
  }

  m.scaling.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    double mean = 0.0;
    for (const auto& inst : ds.instances) mean += inst.features[j];
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (const auto& inst : ds.instances) {
      const double d = inst.features[j] - mean;
      var += d * d;
    }
    var /= static_cast<double>(n);
    const double sd = std::sqrt(var);
    const bool constant = !(sd > 1e-12 * std::max(1.0, std::abs(mean)));
    m.scaling[j] = {mean, constant ? 0.0 : sd, constant};
  }

  std::vector<double> rows(n * k);
  std::vector<double> targets(n);
  std::vector<double> weights(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& inst = ds.instances[i];
    for (std::size_t j = 0; j < k; ++j) {
      const auto& s = m.scaling[j];
      rows[i * k + j] = s.constant ? 0.0 : (inst.features[j] - s.mean) / s.stddev;
    }
    const bool pos = *inst.label == Label::Positive;
    targets[i] = pos ? 1.0 : 0.0;
    weights[i] = pos ? m.positive_weight : m.negative_weight;
  }
  LogisticObjective objective(std::move(rows), k, std::move(targets), std::move(weights),
                              cfg.l2_lambda);

  // Full-batch gradient descent with backtracking (Armijo) line search.
  std::vector<double> theta(k + 1, 0.0);
  std::vector<double> grad(k + 1);
  std::vector<double> trial(k + 1);
  double loss = objective.value_and_gradient(theta, grad);
  double step = 1.0;
  std::size_t iter = 0;
  for (; iter < cfg.max_iters; ++iter) {
    const double gnorm_sq = dot(grad, grad);
    if (gnorm_sq == 0.0) break;
    double trial_loss = loss;
    bool accepted = false;
    for (int h = 0; h < kMaxHalvings; ++h) {
      for (std::size_t j = 0; j <= k; ++j) trial[j] = theta[j] - step * grad[j];
      trial_loss = objective.value(trial);
      if (trial_loss <= loss - kArmijo * step * gnorm_sq) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    theta.swap(trial);
    const double decrease = loss - trial_loss;
    loss = objective.value_and_gradient(theta, grad);
    step = std::min(step * 2.0, 1e6);
    if (decrease < cfg.tolerance) {
      ++iter;
      break;
    }
  }

  m.weights.assign(theta.begin(), theta.begin() + static_cast<std::ptrdiff_t>(k));
  for (std::size_t j = 0; j < k; ++j) {
    if (m.scaling[j].constant) m.weights[j] = 0.0;
  }
  m.bias = theta[k];
  m.iterations = iter;
  m.final_loss = loss;
  return m;
}

std::string PredictionModel::id() const {
  std::ostringstream os;
  write_model(os, *this);
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(os.str())));
  return buf;
}

std::vector<Edge> PredictionSet::predicted_edges() const {
  std::vector<Edge> out;
  for (const auto& p : predictions) {
    if (p.will_appear) out.push_back({p.source, p.target});
  }
  std::sort(out.begin(), out.end());
  return out;
}

double probability(const PredictionModel& m, std::span<const double> raw_features) {
  double z = m.bias;
  for (std::size_t j = 0; j < m.weights.size(); ++j) {
    const auto& s = m.scaling[j];
    if (s.constant) continue;
    z += m.weights[j] * ((raw_features[j] - s.mean) / s.stddev);
  }
  return sigmoid(z);
}

PredictionSet predict(const PredictionModel& m, const Dataset& ds) {
  if (ds.feature_names != m.feature_names) {
    std::string msg = "dataset columns do not match the model features (model:";
    for (const auto& f : m.feature_names) msg += " " + f;
    msg += "; dataset:";
    for (const auto& f : ds.feature_names) msg += " " + f;
    throw SchemaError(msg + ")");
  }
  PredictionSet out;
  out.version_id = ds.provenance.empty() ? std::string() : ds.provenance.front();
  out.model_id = m.id();
  out.threshold = m.threshold;
  out.predictions.reserve(ds.size());
  for (const auto& inst : ds.instances) {
    if (inst.features.size() != m.weights.size()) throw SchemaError("instance width differs from model");
    const double p = probability(m, inst.features);
    out.predictions.push_back({inst.source, inst.target, p, p >= m.threshold});
  }
  return out;
}

void write_model(std::ostream& out, const PredictionModel& m) {
  using text::format_double;
  out << "smellcast-model " << kModelFormatVersion << '\n';
  out << "features " << m.feature_names.size() << '\n';
  for (std::size_t j = 0; j < m.feature_names.size(); ++j) {
    const auto& s = m.scaling[j];
    out << "feature " << m.feature_names[j] << ' ' << format_double(s.mean) << ' '
        << format_double(s.stddev) << ' ' << (s.constant ? "constant" : "scaled") << ' '
        << format_double(m.weights[j]) << '\n';
  }
  out << "bias " << format_double(m.bias) << '\n';
  out << "threshold " << format_double(m.threshold) << '\n';
  out << "class_weights " << format_double(m.positive_weight) << ' '
      << format_double(m.negative_weight) << '\n';
  out << "l2_lambda " << format_double(m.l2_lambda) << '\n';
  out << "seed " << m.seed << '\n';
  out << "iterations " << m.iterations << '\n';
  out << "final_loss " << format_double(m.final_loss) << '\n';
  out << "end\n";
}

PredictionModel parse_model(std::istream& in, const std::string& source_name) {
  PredictionModel m;
  std::string line;
  std::size_t line_no = 0;
  std::size_t expected_features = 0;
  bool ended = false;

  auto number = [&](std::string_view s) {
    auto v = text::parse_double(s);
    if (!v) throw ParseError(source_name, line_no, "bad number '" + std::string(s) + "'");
    return *v;
  };
  auto integer = [&](std::string_view s) {
    auto v = text::parse_int(s);
    if (!v || *v < 0) throw ParseError(source_name, line_no, "bad count '" + std::string(s) + "'");
    return static_cast<std::uint64_t>(*v);
  };

  while (std::getline(in, line)) {
    ++line_no;
    auto parts = text::split_ws(line);
    if (parts.empty()) continue;
    if (line_no == 1) {
      if (parts.size() != 2 || parts[0] != "smellcast-model") {
        throw ParseError(source_name, line_no, "not a smellcast model file");
      }
      if (integer(parts[1]) != kModelFormatVersion) {
        throw ParseError(source_name, line_no, "unsupported model format version " + std::string(parts[1]));
      }
      continue;
    }
    const auto key = parts[0];
    auto want = [&](std::size_t count) {
      if (parts.size() != count) throw ParseError(source_name, line_no, "malformed '" + std::string(key) + "' line");
    };
    if (key == "features") {
      want(2);
      expected_features = integer(parts[1]);
    } else if (key == "feature") {
      want(6);
      m.feature_names.emplace_back(parts[1]);
      m.scaling.push_back({number(parts[2]), number(parts[3]), parts[4] == "constant"});
      m.weights.push_back(number(parts[5]));
    } else if (key == "bias") {
      want(2);
      m.bias = number(parts[1]);
    } else if (key == "threshold") {
      want(2);
      m.threshold = number(parts[1]);
    } else if (key == "class_weights") {
      want(3);
      m.positive_weight = number(parts[1]);
      m.negative_weight = number(parts[2]);
    } else if (key == "l2_lambda") {
      want(2);
      m.l2_lambda = number(parts[1]);
    } else if (key == "seed") {
      want(2);
      m.seed = integer(parts[1]);
    } else if (key == "iterations") {
      want(2);
      m.iterations = integer(parts[1]);
    } else if (key == "final_loss") {
      want(2);
      m.final_loss = number(parts[1]);
    } else if (key == "end") {
      ended = true;
      break;
    } else {
      throw ParseError(source_name, line_no, "unknown model field '" + std::string(key) + "'");
    }
  }
  if (line_no == 0) throw ParseError(source_name, 0, "empty model file");
  if (!ended) throw ParseError(source_name, line_no, "model file is truncated (no 'end')");
  if (m.feature_names.size() != expected_features) {
    throw ParseError(source_name, line_no, "feature count does not match 'features' line");
  }
  return m;
}

PredictionModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return parse_model(in, path.string());
}

void save_model(const std::filesystem::path& path, const PredictionModel& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_model(out, m);
}

void write_predictions(std::ostream& out, const PredictionSet& p) {
  out << "#predictions " << p.version_id << " model=" << p.model_id
      << " threshold=" << text::format_double(p.threshold) << '\n';
  out << "source,target,probability,will_appear\n";
  for (const auto& pr : p.predictions) {
    out << pr.source << ',' << pr.target << ',' << text::format_double(pr.probability) << ','
        << (pr.will_appear ? 1 : 0) << '\n';
  }
}

PredictionSet parse_predictions(std::istream& in, const std::string& source_name) {
  PredictionSet p;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    auto body = text::trim(line);
    if (body.empty()) continue;
    if (line_no == 1) {
      auto parts = text::split_ws(body);
      if (parts.empty() || parts[0] != "#predictions") {
        throw ParseError(source_name, line_no, "expected '#predictions' header");
      }
      for (std::size_t i = 1; i < parts.size(); ++i) {
        auto kv = parts[i];
        if (text::starts_with(kv, "model=")) {
          p.model_id = std::string(kv.substr(6));
        } else if (text::starts_with(kv, "threshold=")) {
          auto t = text::parse_double(kv.substr(10));
          if (!t) throw ParseError(source_name, line_no, "bad threshold");
          p.threshold = *t;
        } else {
          p.version_id = std::string(kv);
        }
      }
      continue;
    }
    if (!have_header) {
      if (body != "source,target,probability,will_appear") {
        throw ParseError(source_name, line_no, "expected header 'source,target,probability,will_appear'");
      }
      have_header = true;
      continue;
    }
    auto cells = text::split(body, ',');
    if (cells.size() != 4) throw ParseError(source_name, line_no, "expected 4 columns");
    auto prob = text::parse_double(cells[2]);
    if (!prob || *prob < 0.0 || *prob > 1.0) throw ParseError(source_name, line_no, "bad probability");
    if (cells[3] != "0" && cells[3] != "1") throw ParseError(source_name, line_no, "will_appear must be 0 or 1");
    p.predictions.push_back({std::string(cells[0]), std::string(cells[1]), *prob, cells[3] == "1"});
  }
  if (!have_header) throw ParseError(source_name, line_no, "missing prediction header");
  return p;
}

PredictionSet load_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return parse_predictions(in, path.string());
}

void save_predictions(const std::filesystem::path& path, const PredictionSet& p) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_predictions(out, p);
}

}  // namespace smellcast
