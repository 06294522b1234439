#include "smellcast/pipeline.hpp"

#include <fstream>
#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>
#include <sstream>

#include "smellcast/content.hpp"
#include "smellcast/dataset.hpp"
#include "smellcast/errors.hpp"
#include "smellcast/evaluation.hpp"
#include "smellcast/graph_io.hpp"
#include "smellcast/text.hpp"

namespace smellcast {

namespace {

constexpr const char* kNoChangesHint =
    "the versions contain no dependency changes; pick a pair of versions where dependencies "
    "were added";

std::filesystem::path resolve(const std::filesystem::path& base, std::string_view value) {
  std::filesystem::path p{std::string(value)};
  if (p.is_relative() && !base.empty()) return base / p;
  return p;
}

double to_double(std::string_view key, std::string_view value) {
  auto v = text::parse_double(value);
  if (!v) throw ValidationError("config key '" + std::string(key) + "' expects a number, got '" + std::string(value) + "'");
  return *v;
}

std::size_t to_count(std::string_view key, std::string_view value) {
  auto v = text::parse_int(value);
  if (!v || *v < 0) {
    throw ValidationError("config key '" + std::string(key) + "' expects a non-negative integer, got '" + std::string(value) + "'");
  }
  return static_cast<std::size_t>(*v);
}

bool to_bool(std::string_view key, std::string_view value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw ValidationError("config key '" + std::string(key) + "' expects true/false, got '" + std::string(value) + "'");
}

template <typename Writer>
std::filesystem::path write_file(const std::filesystem::path& dir, const char* name, Writer&& writer,
                                 PipelineResult& result) {
  const auto path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  writer(out);
  if (!out) throw Error("write failed for " + path.string());
  result.written.push_back(path);
  return path;
}

DependencyGraph load_version(const std::filesystem::path& path, std::vector<std::string>& warnings) {
  std::vector<std::string> local;
  auto g = load_graph(path, graph_format_for(path), {}, &local);
  for (auto& w : local) warnings.push_back(path.filename().string() + ": " + w);
  return g;
}

}  // namespace

SmellSelection parse_smell_selection(std::string_view name) {
  if (name == "cycles") return SmellSelection::Cycles;
  if (name == "hubs") return SmellSelection::Hubs;
  if (name == "all") return SmellSelection::All;
  throw ValidationError("smell selection must be cycles, hubs or all; got '" + std::string(name) + "'");
}

std::string_view smell_selection_name(SmellSelection s) {
  switch (s) {
    case SmellSelection::Cycles: return "cycles";
    case SmellSelection::Hubs: return "hubs";
    case SmellSelection::All: return "all";
  }
  return "all";
}

void apply_config_value(PipelineConfig& cfg, std::string_view key, std::string_view value,
                        const std::filesystem::path& base_dir) {
  if (key == "prev") cfg.prev = resolve(base_dir, value);
  else if (key == "curr") cfg.curr = resolve(base_dir, value);
  else if (key == "next") cfg.next = resolve(base_dir, value);
  else if (key == "corpus_prev") cfg.corpus_prev = resolve(base_dir, value);
  else if (key == "corpus_curr") cfg.corpus_curr = resolve(base_dir, value);
  else if (key == "out") cfg.out_dir = resolve(base_dir, value);
  else if (key == "smell") cfg.smells = parse_smell_selection(value);
  else if (key == "fraction") cfg.fraction = to_double(key, value);
  else if (key == "cycle_cap") cfg.cycle_cap = to_count(key, value);
  else if (key == "bins") cfg.bins = to_count(key, value);
  else if (key == "top_k") cfg.selection = TopK{to_count(key, value)};
  else if (key == "min_gain") cfg.selection = MinGain{to_double(key, value)};
  else if (key == "hierarchy") cfg.hierarchy = to_bool(key, value);
  else if (key == "l2_lambda") cfg.classifier.l2_lambda = to_double(key, value);
  else if (key == "max_iters") cfg.classifier.max_iters = to_count(key, value);
  else if (key == "tolerance") cfg.classifier.tolerance = to_double(key, value);
  else if (key == "threshold") cfg.classifier.threshold = to_double(key, value);
  else if (key == "seed") cfg.classifier.seed = to_count(key, value);
  else if (key == "class_weight") {
    if (value == "inverse") cfg.classifier.class_weight_mode = ClassWeightMode::InverseFrequency;
    else if (value == "uniform") cfg.classifier.class_weight_mode = ClassWeightMode::Uniform;
    else throw ValidationError("class_weight must be inverse or uniform, got '" + std::string(value) + "'");
  } else {
    throw ValidationError("unknown config key '" + std::string(key) + "'");
  }
}

void apply_config_text(PipelineConfig& cfg, std::istream& in, const std::string& source_name,
                       const std::filesystem::path& base_dir) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto body = line.substr(0, line.find('#'));
    auto trimmed = text::trim(body);
    if (trimmed.empty()) continue;
    auto eq = trimmed.find('=');
    if (eq == std::string_view::npos) {
      throw ValidationError(source_name + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    auto key = text::trim(trimmed.substr(0, eq));
    auto value = text::trim(trimmed.substr(eq + 1));
    try {
      apply_config_value(cfg, key, value, base_dir);
    } catch (const ValidationError& e) {
      throw ValidationError(source_name + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file " + path.string());
  PipelineConfig cfg;
  apply_config_text(cfg, in, path.string(), path.parent_path());
  return cfg;
}

void validate(const PipelineConfig& cfg) {
  if (cfg.prev.empty()) throw ValidationError("missing required version v_{n-1} (--prev)");
  if (cfg.curr.empty()) throw ValidationError("missing required version v_n (--curr)");
  if (cfg.corpus_prev.empty() != cfg.corpus_curr.empty()) {
    throw ValidationError("content corpora must be given for both v_{n-1} and v_n, or for neither");
  }
  if (cfg.bins == 0) throw ValidationError("bins must be positive");
  if (const auto* top = std::get_if<TopK>(&cfg.selection); top && top->k == 0) {
    throw ValidationError("top_k must be positive");
  }
  if (!(cfg.fraction > 0.0 && cfg.fraction <= 1.0)) throw ValidationError("fraction must lie in (0, 1]");
  if (cfg.cycle_cap == 0) throw ValidationError("cycle_cap must be positive");
  if (!(cfg.classifier.threshold > 0.0 && cfg.classifier.threshold < 1.0)) {
    throw ValidationError("threshold must lie in (0, 1)");
  }
  if (!(cfg.classifier.l2_lambda >= 0.0)) throw ValidationError("l2_lambda must be >= 0");
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  validate(cfg);
  PipelineResult result;
  auto& warnings = result.warnings;

  const auto prev = load_version(cfg.prev, warnings);
  const auto curr = load_version(cfg.curr, warnings);
  std::optional<DependencyGraph> next;
  if (!cfg.next.empty()) next = load_version(cfg.next, warnings);

  const bool use_content = !cfg.corpus_prev.empty();
  std::optional<ContentCorpus> corpus_prev;
  std::optional<ContentCorpus> corpus_curr;
  if (use_content) {
    corpus_prev = load_corpus(cfg.corpus_prev);
    corpus_curr = load_corpus(cfg.corpus_curr);
    for (const auto& n : corpus_prev->nodes_missing_from(prev)) {
      warnings.push_back("corpus for '" + prev.version_id() + "' mentions unknown package " + n);
    }
    for (const auto& n : corpus_curr->nodes_missing_from(curr)) {
      warnings.push_back("corpus for '" + curr.version_id() + "' mentions unknown package " + n);
    }
  }

  const auto delta = diff_graphs(prev, curr);
  if (delta.added_edges.empty()) {
    warnings.push_back("version triple is unsuitable for prediction: no dependency was added between '" +
                       prev.version_id() + "' and '" + curr.version_id() + "'");
  }

  FeatureOptions fopts{use_content, cfg.hierarchy};
  const auto training = build_training_set(prev, curr, corpus_prev ? &*corpus_prev : nullptr, fopts);
  result.training_instances = training.size();
  if (training.count(Label::Positive) == 0 || training.count(Label::Negative) == 0) {
    throw DataError(std::string("training set has a single class: ") + kNoChangesHint);
  }

  const auto ranking = information_gain(training, cfg.bins);
  Dataset selected;
  try {
    selected = select_features(training, cfg.selection, cfg.bins);
  } catch (const DomainError& e) {
    throw DataError(std::string("feature selection failed: ") + e.what());
  }
  result.retained_features = selected.feature_names;

  PredictionModel model;
  try {
    model = train(selected, cfg.classifier);
  } catch (const TrainingError& e) {
    throw DataError(std::string(e.what()) + "; " + kNoChangesHint);
  }

  const auto test_full = build_test_set(curr, corpus_curr ? &*corpus_curr : nullptr, fopts);
  auto test = project_features(test_full, selected.feature_names);
  test.selection = selected.selection;
  result.test_instances = test.size();
  const auto predictions = predict(model, test);
  result.predicted_edges = predictions.predicted_edges();
  const auto model_id = model.id();

  std::vector<std::string> versions{prev.version_id(), curr.version_id()};
  if (next) versions.push_back(next->version_id());

  if (cfg.smells != SmellSelection::Hubs) {
    auto s = cycle_filter(curr, result.predicted_edges, cfg.cycle_cap);
    s.versions = versions;
    s.model_id = model_id;
    s.fraction = cfg.fraction;
    if (s.truncated) warnings.push_back("cycle enumeration hit the cap of " + std::to_string(cfg.cycle_cap));
    result.cycles = std::move(s);
  }
  if (cfg.smells != SmellSelection::Cycles) {
    auto s = hub_filter(curr, result.predicted_edges, cfg.fraction);
    s.versions = versions;
    s.model_id = model_id;
    s.cycle_cap = cfg.cycle_cap;
    result.hubs = std::move(s);
  }

  if (next) {
    std::size_t vanished = 0;
    const auto truth = label_for_evaluation(test, *next, &vanished);
    if (vanished > 0) {
      warnings.push_back(std::to_string(vanished) + " candidate pairs lost an endpoint in '" +
                         next->version_id() + "' and were labeled negative");
    }
    reports::MetricsDocument doc;
    doc.seed = cfg.classifier.seed;
    doc.versions = versions;
    doc.model_id = model_id;
    doc.sections.push_back({"edges", edge_metrics(predictions, truth)});
    if (result.cycles) {
      doc.sections.push_back({"cyclic-dependency", cycle_metrics(*result.cycles, curr, *next)});
    }
    if (result.hubs) {
      doc.sections.push_back({"hub-like", hub_metrics(*result.hubs, curr, *next, cfg.fraction)});
    }
    result.metrics = std::move(doc);
  }

  // Outputs.
  std::filesystem::create_directories(cfg.out_dir);
  const auto& dir = cfg.out_dir;
  write_file(dir, "train.csv", [&](std::ostream& o) { write_dataset(o, selected); }, result);
  write_file(dir, "features.json", [&](std::ostream& o) {
    reports::write_feature_ranking(o, ranking, selected.feature_names, cfg.bins, describe(cfg.selection));
  }, result);
  write_file(dir, "model.txt", [&](std::ostream& o) { write_model(o, model); }, result);
  write_file(dir, "test.csv", [&](std::ostream& o) { write_dataset(o, test); }, result);
  write_file(dir, "predictions.csv", [&](std::ostream& o) { write_predictions(o, predictions); }, result);
  if (result.cycles) {
    write_file(dir, "smells-cycles.json", [&](std::ostream& o) {
      reports::write_smell_report(o, *result.cycles, cfg.classifier.seed);
    }, result);
  }
  if (result.hubs) {
    write_file(dir, "smells-hubs.json", [&](std::ostream& o) {
      reports::write_smell_report(o, *result.hubs, cfg.classifier.seed);
    }, result);
  }
  if (result.metrics) {
    write_file(dir, "metrics.json", [&](std::ostream& o) { reports::write_metrics_report(o, *result.metrics); }, result);
    write_file(dir, "metrics.csv", [&](std::ostream& o) { reports::write_metrics_csv(o, *result.metrics); }, result);
  }

  nlohmann::ordered_json run;
  run["report"] = "run";
  run["format"] = reports::kReportFormatVersion;
  run["seed"] = cfg.classifier.seed;
  run["versions"] = versions;
  run["model"] = model_id;
  run["parameters"]["content_features"] = use_content;
  run["parameters"]["hierarchy"] = cfg.hierarchy;
  run["parameters"]["bins"] = cfg.bins;
  run["parameters"]["selection"] = describe(cfg.selection);
  run["parameters"]["smell"] = std::string(smell_selection_name(cfg.smells));
  run["parameters"]["fraction"] = cfg.fraction;
  run["parameters"]["cycle_cap"] = cfg.cycle_cap;
  run["training_instances"] = result.training_instances;
  run["test_instances"] = result.test_instances;
  run["retained_features"] = result.retained_features;
  run["predicted_edges"] = result.predicted_edges.size();
  run["warnings"] = warnings;
  std::vector<std::string> files;
  for (const auto& p : result.written) files.push_back(p.filename().string());
  files.push_back("run.json");
  run["files"] = files;
  write_file(dir, "run.json", [&](std::ostream& o) { o << run.dump(2) << '\n'; }, result);
  return result;
}

int exit_status_for(const std::exception& e) {
  if (dynamic_cast<const ValidationError*>(&e) || dynamic_cast<const ArgumentError*>(&e)) return 1;
  return 2;
}

}  // namespace smellcast
