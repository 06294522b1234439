#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "smellcast/classifier.hpp"
#include "smellcast/errors.hpp"

using namespace smellcast;

namespace {

Dataset make(const std::vector<std::vector<double>>& rows, const std::vector<int>& labels) {
  Dataset ds;
  for (std::size_t c = 0; c < rows.front().size(); ++c) ds.feature_names.push_back("x" + std::to_string(c));
  for (std::size_t i = 0; i < rows.size(); ++i)
    ds.instances.push_back({"s" + std::to_string(i), "t", rows[i],
                            labels[i] ? Label::Positive : Label::Negative});
  return ds;
}

double accuracy(const PredictionSet& p, const Dataset& ds) {
  std::size_t ok = 0;
  for (std::size_t i = 0; i < ds.size(); ++i)
    ok += p.predictions[i].will_appear == (ds.instances[i].label == Label::Positive);
  return static_cast<double>(ok) / static_cast<double>(ds.size());
}

double positive_recall(const PredictionSet& p, const Dataset& ds) {
  std::size_t tp = 0, pos = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    if (ds.instances[i].label != Label::Positive) continue;
    ++pos;
    tp += p.predictions[i].will_appear;
  }
  return static_cast<double>(tp) / static_cast<double>(pos);
}

// Central differences, relative error against the analytic gradient.
double gradient_error(const LogisticObjective& obj, std::vector<double> theta) {
  std::vector<double> grad(obj.dimension());
  obj.value_and_gradient(theta, grad);
  double worst = 0;
  const double h = 1e-5;
  for (std::size_t k = 0; k < theta.size(); ++k) {
    auto plus = theta, minus = theta;
    plus[k] += h;
    minus[k] -= h;
    const double fd = (obj.value(plus) - obj.value(minus)) / (2 * h);
    const double err = std::fabs(fd - grad[k]) / std::max(1.0, std::fabs(fd) + std::fabs(grad[k]));
    worst = std::max(worst, err);
  }
  return worst;
}

}  // namespace

TEST(Objective, GradientMatchesFiniteDifferences) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> gauss;
  for (int round = 0; round < 20; ++round) {
    const std::size_t n = 5 + rng() % 30, f = 1 + rng() % 6;
    std::vector<double> rows(n * f), y(n), s(n), theta(f + 1);
    for (auto& x : rows) x = gauss(rng);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] = static_cast<double>(rng() % 2);
      s[i] = 0.2 + std::uniform_real_distribution<double>(0, 3)(rng);
    }
    for (auto& t : theta) t = gauss(rng);
    LogisticObjective obj(rows, f, y, s, 0.01 * static_cast<double>(rng() % 10));
    EXPECT_LT(gradient_error(obj, theta), 1e-6);
  }
}

TEST(Objective, ValueAgreesWithDirectFormula) {
  std::vector<double> rows{1, 2, -1, 0.5}, y{1, 0}, s{2, 0.5}, theta{0.3, -0.7, 0.1};
  LogisticObjective obj(rows, 2, y, s, 0.1);
  auto softplus = [](double z) { return std::log1p(std::exp(z)); };
  const double z0 = 0.3 * 1 - 0.7 * 2 + 0.1, z1 = 0.3 * -1 - 0.7 * 0.5 + 0.1;
  const double expected = (2 * (softplus(z0) - z0) + 0.5 * softplus(z1)) / 2 + 0.05 * (0.09 + 0.49);
  EXPECT_NEAR(obj.value(theta), expected, 1e-12);
}

TEST(Train, SeparableOneFeature) {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 50; ++i) {
    rows.push_back({1.0});
    labels.push_back(1);
    rows.push_back({-1.0});
    labels.push_back(0);
  }
  auto ds = make(rows, labels);
  auto m = train(ds);
  auto p = predict(m, ds);
  EXPECT_GE(accuracy(p, ds), 0.99);
  EXPECT_GE(positive_recall(p, ds), 0.99);
}

TEST(Train, ConstantFeatureGetsZeroWeight) {
  auto ds = make({{1, 7}, {2, 7}, {3, 7}, {4, 7}}, {0, 0, 1, 1});
  auto m = train(ds);
  EXPECT_TRUE(m.scaling[1].constant);
  EXPECT_EQ(m.weights[1], 0.0);
  EXPECT_FALSE(m.scaling[0].constant);
}

TEST(Train, Deterministic) {
  std::mt19937_64 rng(9);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 200; ++i) {
    rows.push_back({std::normal_distribution<double>()(rng), std::normal_distribution<double>()(rng)});
    labels.push_back(rows.back()[0] + 0.3 * rows.back()[1] > 0.2);
  }
  auto ds = make(rows, labels);
  auto a = train(ds), b = train(ds);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.id(), b.id());
}

TEST(Train, Errors) {
  EXPECT_THROW(train(make({{1}, {2}}, {1, 1})), TrainingError);
  EXPECT_THROW(train(make({{1}, {NAN}}, {1, 0})), DataError);
  auto unlabeled = make({{1}, {2}}, {1, 0});
  unlabeled.instances[0].label.reset();
  EXPECT_THROW(train(unlabeled), TrainingError);
  TrainConfig bad;
  bad.threshold = 1.0;
  EXPECT_THROW(train(make({{1}, {2}}, {1, 0}), bad), ArgumentError);
}

TEST(Train, LossNonIncreasingOverIterations) {
  std::mt19937_64 rng(3);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 120; ++i) {
    rows.push_back({std::normal_distribution<double>()(rng), std::normal_distribution<double>()(rng)});
    labels.push_back(std::bernoulli_distribution(rows.back()[0] > 0 ? 0.8 : 0.2)(rng));
  }
  auto ds = make(rows, labels);
  double last = INFINITY;
  for (std::size_t iters : {1, 2, 4, 8, 16, 64, 256}) {
    TrainConfig cfg;
    cfg.max_iters = iters;
    cfg.tolerance = 0;
    auto m = train(ds, cfg);
    EXPECT_LE(m.final_loss, last);
    last = m.final_loss;
  }
}

TEST(Train, RescalingKeepsProbabilityOrder) {
  std::mt19937_64 rng(8);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 60; ++i) {
    rows.push_back({std::normal_distribution<double>()(rng), std::normal_distribution<double>()(rng)});
    labels.push_back(std::bernoulli_distribution(rows.back()[0] > 0 ? 0.7 : 0.3)(rng));
  }
  auto ds = make(rows, labels);
  auto scaled = ds;
  for (auto& in : scaled.instances) in.features[0] = 250.0 * in.features[0] - 40.0;

  auto p1 = predict(train(ds), ds), p2 = predict(train(scaled), scaled);
  std::vector<std::size_t> o1(ds.size()), o2(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) o1[i] = o2[i] = i;
  auto by = [](const PredictionSet& p) {
    return [&p](std::size_t a, std::size_t b) {
      return p.predictions[a].probability < p.predictions[b].probability;
    };
  };
  std::stable_sort(o1.begin(), o1.end(), by(p1));
  std::stable_sort(o2.begin(), o2.end(), by(p2));
  EXPECT_EQ(o1, o2);
}

TEST(Train, HeavierPositiveWeightRaisesRecall) {
  std::mt19937_64 rng(12);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 400; ++i) {
    const bool pos = i % 10 == 0;
    rows.push_back({std::normal_distribution<double>(pos ? 1.0 : 0.0, 1.0)(rng)});
    labels.push_back(pos);
  }
  auto ds = make(rows, labels);
  TrainConfig uniform;
  uniform.class_weight_mode = ClassWeightMode::Uniform;
  TrainConfig heavy;
  heavy.class_weight_mode = ClassWeightMode::Manual;
  heavy.positive_weight = 20;
  heavy.negative_weight = 1;
  EXPECT_GE(positive_recall(predict(train(ds, heavy), ds), ds),
            positive_recall(predict(train(ds, uniform), ds), ds));
}

TEST(Train, InverseFrequencyWeightsAverageToOne) {
  auto m = train(make({{0}, {1}, {2}, {3}}, {0, 0, 0, 1}));
  EXPECT_DOUBLE_EQ(m.positive_weight, 2.0);
  EXPECT_DOUBLE_EQ(m.negative_weight, 4.0 / 6.0);
  EXPECT_DOUBLE_EQ((3 * m.negative_weight + m.positive_weight) / 4, 1.0);
}

TEST(Predict, FormulaAndThreshold) {
  PredictionModel m;
  m.feature_names = {"a"};
  m.scaling = {{2.0, 4.0, false}};
  m.weights = {1.5};
  m.bias = -0.25;
  m.threshold = 0.5;
  const double at_mean[] = {2.0};
  EXPECT_DOUBLE_EQ(probability(m, at_mean), 1.0 / (1.0 + std::exp(0.25)));
  double prev = 0;
  for (double x : {-3.0, 0.0, 2.0, 5.0, 9.0}) {
    const double raw[] = {x};
    const double p = probability(m, raw);
    EXPECT_GT(p, prev);
    prev = p;
  }
  Dataset ds;
  ds.feature_names = {"a"};
  ds.provenance = {"v"};
  ds.instances = {{"u", "v", {2.0}, std::nullopt}, {"v", "u", {30.0}, std::nullopt}};
  auto p = predict(m, ds);
  EXPECT_EQ(p.predictions.size(), 2u);
  EXPECT_FALSE(p.predictions[0].will_appear);
  EXPECT_TRUE(p.predictions[1].will_appear);
  EXPECT_EQ(p.version_id, "v");
  for (const auto& pr : p.predictions) EXPECT_EQ(pr.will_appear, pr.probability >= m.threshold);
  ds.feature_names = {"b"};
  EXPECT_THROW(predict(m, ds), SchemaError);
}

TEST(Serialization, ModelRoundTripsExactly) {
  std::mt19937_64 rng(4);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 80; ++i) {
    rows.push_back({std::normal_distribution<double>()(rng), 1.0 / 3.0, std::normal_distribution<double>()(rng)});
    labels.push_back(rows.back()[0] > 0.1);
  }
  auto m = train(make(rows, labels));
  std::ostringstream out;
  write_model(out, m);
  std::istringstream in(out.str());
  auto back = parse_model(in, "m.txt");
  EXPECT_EQ(back, m);
  EXPECT_EQ(back.id(), m.id());

  std::istringstream junk("smellcast-model 9\n");
  EXPECT_THROW(parse_model(junk, "m.txt"), ParseError);
}

TEST(Serialization, PredictionsRoundTrip) {
  PredictionSet p{"1.1", "abc", 0.5, {{"a", "b", 0.125, false}, {"b", "a", 0.75, true}}};
  std::ostringstream out;
  write_predictions(out, p);
  std::istringstream in(out.str());
  EXPECT_EQ(parse_predictions(in, "p.csv"), p);
  EXPECT_EQ(p.predicted_edges(), (std::vector<Edge>{{"b", "a"}}));
}
