// smellcast: anticipate cyclic and hub-like dependencies from version history.
//
//   smellcast pipeline --prev v1.deps --curr v2.deps [--next v3.deps] --out out/
//   smellcast convert  --in graph.dot --out graph.deps
//   smellcast features --prev v1.deps --curr v2.deps --out train.csv
//   smellcast train    --data train.csv --model model.txt
//   smellcast predict  --model model.txt --curr v2.deps --out predictions.csv
//   smellcast smells   --curr v2.deps [--predictions predictions.csv] --out reports/
//   smellcast evaluate --curr v2.deps --next v3.deps --predictions predictions.csv

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "smellcast/classifier.hpp"
#include "smellcast/content.hpp"
#include "smellcast/dataset.hpp"
#include "smellcast/errors.hpp"
#include "smellcast/evaluation.hpp"
#include "smellcast/features.hpp"
#include "smellcast/graph_io.hpp"
#include "smellcast/pipeline.hpp"
#include "smellcast/reports.hpp"
#include "smellcast/smells.hpp"

namespace fs = std::filesystem;
using namespace smellcast;

namespace {

DependencyGraph read_graph(const fs::path& path, std::optional<std::string> format = {},
                           bool strict = false) {
  std::vector<std::string> warnings;
  const auto fmt = format ? parse_graph_format(*format) : graph_format_for(path);
  auto g = load_graph(path, fmt, {strict}, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << path.string() << ": " << w << '\n';
  return g;
}

template <typename Writer>
void write_to(const std::string& path, Writer&& writer) {
  if (path.empty() || path == "-") {
    writer(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  writer(out);
}

std::optional<ContentCorpus> read_corpus(const std::string& path) {
  if (path.empty()) return std::nullopt;
  return load_corpus(path);
}

SelectionPolicy selection_from(std::size_t top_k, std::optional<double> min_gain,
                               const SelectionPolicy& fallback) {
  if (top_k > 0 && min_gain) throw ValidationError("--top-k and --min-gain are mutually exclusive");
  if (top_k > 0) return TopK{top_k};
  if (min_gain) return MinGain{*min_gain};
  return fallback;
}

// Each predicted pair labeled against v_{n+1}.
Dataset truth_for(const PredictionSet& p, const DependencyGraph& next, std::size_t* vanished) {
  Dataset pairs;
  pairs.kind = DatasetKind::Test;
  pairs.provenance = {p.version_id};
  for (const auto& pr : p.predictions) pairs.instances.push_back({pr.source, pr.target, {}, std::nullopt});
  return label_for_evaluation(pairs, next, vanished);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anticipates architectural smells by predicting next-version package dependencies"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "smellcast 0.3.0");

  // pipeline
  auto* pipeline = app.add_subcommand("pipeline", "Train on v_{n-1}/v_n, predict v_{n+1}, filter smells, evaluate");
  std::string config_file;
  std::string p_prev, p_curr, p_next, p_cprev, p_ccurr, p_out, p_smell;
  std::optional<double> p_fraction, p_min_gain, p_threshold;
  std::optional<std::uint64_t> p_seed;
  std::size_t p_top_k = 0, p_bins = 0, p_cap = 0;
  bool p_no_hierarchy = false;
  pipeline->add_option("--config", config_file, "Flat key = value configuration file");
  pipeline->add_option("--prev", p_prev, "Dependency graph of v_{n-1}");
  pipeline->add_option("--curr", p_curr, "Dependency graph of v_n");
  pipeline->add_option("--next", p_next, "Dependency graph of v_{n+1} (enables evaluation)");
  pipeline->add_option("--corpus-prev", p_cprev, "Content corpus of v_{n-1}");
  pipeline->add_option("--corpus-curr", p_ccurr, "Content corpus of v_n");
  pipeline->add_option("--out", p_out, "Output directory");
  pipeline->add_option("--smell", p_smell, "cycles, hubs or all")->check(CLI::IsMember({"cycles", "hubs", "all"}));
  pipeline->add_option("--fraction", p_fraction, "Hub balance fraction in (0, 1]");
  pipeline->add_option("--seed", p_seed, "Seed recorded in every report");
  pipeline->add_option("--bins", p_bins, "Equal-width bins for information gain");
  pipeline->add_option("--top-k", p_top_k, "Keep the k most informative features");
  pipeline->add_option("--min-gain", p_min_gain, "Keep features with gain above this value");
  pipeline->add_option("--threshold", p_threshold, "Decision threshold on the predicted probability");
  pipeline->add_option("--cycle-cap", p_cap, "Maximum number of cycles to enumerate");
  pipeline->add_flag("--no-hierarchy", p_no_hierarchy, "Do not fold sub-package content into packages");

  // convert
  auto* convert = app.add_subcommand("convert", "Convert a graph to the canonical edge-list format");
  std::string c_in, c_out;
  std::optional<std::string> c_format;
  bool c_strict = false;
  convert->add_option("--in", c_in, "Input graph")->required();
  convert->add_option("--format", c_format, "edge-list or dot (default: by extension)");
  convert->add_option("--out", c_out, "Output path (default: stdout)");
  convert->add_flag("--strict", c_strict, "Require every edge endpoint to be declared");

  // features
  auto* features = app.add_subcommand("features", "Build a training (--prev given) or test feature table");
  std::string f_prev, f_curr, f_next, f_cprev, f_ccurr, f_out;
  std::size_t f_bins = 10;
  bool f_no_hierarchy = false, f_rank = false;
  features->add_option("--prev", f_prev, "Dependency graph of v_{n-1}");
  features->add_option("--curr", f_curr, "Dependency graph of v_n")->required();
  features->add_option("--next", f_next, "Label the test table against v_{n+1}");
  features->add_option("--corpus-prev", f_cprev, "Content corpus of v_{n-1}");
  features->add_option("--corpus-curr", f_ccurr, "Content corpus of v_n");
  features->add_option("--out", f_out, "Output table (default: stdout)");
  features->add_option("--bins", f_bins, "Bins for --rank");
  features->add_flag("--rank", f_rank, "Print the information-gain ranking to stderr");
  features->add_flag("--no-hierarchy", f_no_hierarchy, "Do not fold sub-package content into packages");

  // train
  auto* train_cmd = app.add_subcommand("train", "Select features and train the link classifier");
  std::string t_data, t_model, t_config;
  std::size_t t_top_k = 0, t_bins = 0;
  std::optional<double> t_min_gain, t_threshold, t_l2;
  std::optional<std::uint64_t> t_seed;
  train_cmd->add_option("--data", t_data, "Training table")->required();
  train_cmd->add_option("--model", t_model, "Output model file")->required();
  train_cmd->add_option("--config", t_config, "Configuration file (classifier and selection keys)");
  train_cmd->add_option("--top-k", t_top_k, "Keep the k most informative features");
  train_cmd->add_option("--min-gain", t_min_gain, "Keep features with gain above this value");
  train_cmd->add_option("--bins", t_bins, "Equal-width bins for information gain");
  train_cmd->add_option("--threshold", t_threshold, "Decision threshold");
  train_cmd->add_option("--l2", t_l2, "L2 regularization strength");
  train_cmd->add_option("--seed", t_seed, "Seed recorded in the model");

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "Score the unconnected pairs of v_n");
  std::string pr_model, pr_data, pr_curr, pr_ccurr, pr_out;
  bool pr_no_hierarchy = false;
  predict_cmd->add_option("--model", pr_model, "Model file")->required();
  predict_cmd->add_option("--data", pr_data, "Test table");
  predict_cmd->add_option("--curr", pr_curr, "Dependency graph of v_n (builds the test table)");
  predict_cmd->add_option("--corpus-curr", pr_ccurr, "Content corpus of v_n");
  predict_cmd->add_option("--out", pr_out, "Output predictions (default: stdout)");
  predict_cmd->add_flag("--no-hierarchy", pr_no_hierarchy, "Do not fold sub-package content into packages");

  // smells
  auto* smells_cmd = app.add_subcommand("smells", "Detect smells on v_n, or filter predictions into anticipated smells");
  std::string s_curr, s_pred, s_out, s_smell = "all";
  double s_fraction = kDefaultHubFraction;
  std::size_t s_cap = kDefaultCycleCap;
  std::uint64_t s_seed = TrainConfig{}.seed;
  smells_cmd->add_option("--curr", s_curr, "Dependency graph of v_n")->required();
  smells_cmd->add_option("--predictions", s_pred, "Predictions to filter");
  smells_cmd->add_option("--out", s_out, "Output directory (default: stdout)");
  smells_cmd->add_option("--smell", s_smell, "cycles, hubs or all")->check(CLI::IsMember({"cycles", "hubs", "all"}));
  smells_cmd->add_option("--fraction", s_fraction, "Hub balance fraction in (0, 1]");
  smells_cmd->add_option("--cycle-cap", s_cap, "Maximum number of cycles to enumerate");
  smells_cmd->add_option("--seed", s_seed, "Seed recorded in the report header");

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "Score predictions and anticipated smells against v_{n+1}");
  std::string e_curr, e_next, e_pred, e_out, e_smell = "all";
  double e_fraction = kDefaultHubFraction;
  std::size_t e_cap = kDefaultCycleCap;
  std::uint64_t e_seed = TrainConfig{}.seed;
  eval_cmd->add_option("--curr", e_curr, "Dependency graph of v_n")->required();
  eval_cmd->add_option("--next", e_next, "Dependency graph of v_{n+1}")->required();
  eval_cmd->add_option("--predictions", e_pred, "Predictions made on v_n")->required();
  eval_cmd->add_option("--out", e_out, "Output directory (default: stdout)");
  eval_cmd->add_option("--smell", e_smell, "cycles, hubs or all")->check(CLI::IsMember({"cycles", "hubs", "all"}));
  eval_cmd->add_option("--fraction", e_fraction, "Hub balance fraction in (0, 1]");
  eval_cmd->add_option("--cycle-cap", e_cap, "Maximum number of cycles to enumerate");
  eval_cmd->add_option("--seed", e_seed, "Seed recorded in the report header");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*pipeline) {
      PipelineConfig cfg = config_file.empty() ? PipelineConfig{} : load_config(config_file);
      if (!p_prev.empty()) cfg.prev = p_prev;
      if (!p_curr.empty()) cfg.curr = p_curr;
      if (!p_next.empty()) cfg.next = p_next;
      if (!p_cprev.empty()) cfg.corpus_prev = p_cprev;
      if (!p_ccurr.empty()) cfg.corpus_curr = p_ccurr;
      if (!p_out.empty()) cfg.out_dir = p_out;
      if (!p_smell.empty()) cfg.smells = parse_smell_selection(p_smell);
      if (p_fraction) cfg.fraction = *p_fraction;
      if (p_seed) cfg.classifier.seed = *p_seed;
      if (p_bins > 0) cfg.bins = p_bins;
      if (p_threshold) cfg.classifier.threshold = *p_threshold;
      if (p_cap > 0) cfg.cycle_cap = p_cap;
      if (p_no_hierarchy) cfg.hierarchy = false;
      cfg.selection = selection_from(p_top_k, p_min_gain, cfg.selection);

      const auto result = run_pipeline(cfg);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
      std::cout << "training instances: " << result.training_instances << '\n'
                << "test instances:     " << result.test_instances << '\n'
                << "predicted edges:    " << result.predicted_edges.size() << '\n';
      if (result.cycles) std::cout << "anticipated cycles: " << result.cycles->cycles.size() << '\n';
      if (result.hubs) std::cout << "anticipated hubs:   " << result.hubs->hubs.size() << '\n';
      if (result.metrics) {
        for (const auto& s : result.metrics->sections) {
          std::cout << s.scope << ": precision " << s.metrics.precision << ", recall "
                    << s.metrics.recall << ", weighted F " << s.metrics.weighted_f << '\n';
        }
      }
      std::cout << "reports written to " << cfg.out_dir.string() << '\n';
      return 0;
    }

    if (*convert) {
      const auto g = read_graph(c_in, c_format, c_strict);
      write_to(c_out, [&](std::ostream& o) { write_edge_list(o, g); });
      return 0;
    }

    if (*features) {
      const FeatureOptions fopts{!f_cprev.empty() || !f_ccurr.empty(), !f_no_hierarchy};
      const auto curr = read_graph(f_curr);
      Dataset ds;
      if (!f_prev.empty()) {
        const auto prev = read_graph(f_prev);
        const auto corpus = read_corpus(f_cprev);
        ds = build_training_set(prev, curr, corpus ? &*corpus : nullptr, fopts);
      } else {
        const auto corpus = read_corpus(f_ccurr);
        ds = build_test_set(curr, corpus ? &*corpus : nullptr, fopts);
        if (!f_next.empty()) {
          std::size_t vanished = 0;
          ds = label_for_evaluation(ds, read_graph(f_next), &vanished);
          if (vanished) std::cerr << "warning: " << vanished << " pairs lost an endpoint in v_{n+1}\n";
        }
      }
      if (f_rank) {
        for (const auto& fg : information_gain(ds, f_bins)) {
          std::cerr << fg.name << '\t' << fg.gain << '\n';
        }
      }
      write_to(f_out, [&](std::ostream& o) { write_dataset(o, ds); });
      return 0;
    }

    if (*train_cmd) {
      PipelineConfig cfg = t_config.empty() ? PipelineConfig{} : load_config(t_config);
      if (t_bins > 0) cfg.bins = t_bins;
      if (t_threshold) cfg.classifier.threshold = *t_threshold;
      if (t_l2) cfg.classifier.l2_lambda = *t_l2;
      if (t_seed) cfg.classifier.seed = *t_seed;
      cfg.selection = selection_from(t_top_k, t_min_gain, cfg.selection);
      const auto data = load_dataset(t_data);
      const auto selected = select_features(data, cfg.selection, cfg.bins);
      const auto model = train(selected, cfg.classifier);
      save_model(t_model, model);
      std::cout << "model " << model.id() << ": " << model.feature_names.size() << " features, "
                << model.iterations << " iterations, loss " << model.final_loss << '\n';
      return 0;
    }

    if (*predict_cmd) {
      const auto model = load_model(pr_model);
      Dataset ds;
      if (!pr_data.empty()) {
        ds = load_dataset(pr_data);
      } else if (!pr_curr.empty()) {
        const auto corpus = read_corpus(pr_ccurr);
        ds = build_test_set(read_graph(pr_curr), corpus ? &*corpus : nullptr,
                            {corpus.has_value(), !pr_no_hierarchy});
      } else {
        throw ValidationError("predict needs --data or --curr");
      }
      const auto projected = project_features(ds, model.feature_names);
      const auto predictions = predict(model, projected);
      write_to(pr_out, [&](std::ostream& o) { write_predictions(o, predictions); });
      return 0;
    }

    if (*smells_cmd) {
      const auto selection = parse_smell_selection(s_smell);
      const auto curr = read_graph(s_curr);
      if (!s_out.empty()) fs::create_directories(s_out);
      auto target = [&](const char* name) { return s_out.empty() ? std::string() : (fs::path(s_out) / name).string(); };
      if (s_pred.empty()) {
        if (selection != SmellSelection::Hubs) {
          const auto report = detect_cycles(curr, s_cap);
          write_to(target("cycles.json"), [&](std::ostream& o) {
            reports::write_cycle_report(o, report, curr.version_id(), s_cap);
          });
        }
        if (selection != SmellSelection::Cycles) {
          const auto report = detect_hubs(curr, s_fraction);
          write_to(target("hubs.json"), [&](std::ostream& o) {
            reports::write_hub_report(o, report, curr.version_id());
          });
        }
        return 0;
      }
      const auto predictions = load_predictions(s_pred);
      const auto edges = predictions.predicted_edges();
      if (selection != SmellSelection::Hubs) {
        auto s = cycle_filter(curr, edges, s_cap);
        s.model_id = predictions.model_id;
        s.fraction = s_fraction;
        write_to(target("smells-cycles.json"), [&](std::ostream& o) { reports::write_smell_report(o, s, s_seed); });
      }
      if (selection != SmellSelection::Cycles) {
        auto s = hub_filter(curr, edges, s_fraction);
        s.model_id = predictions.model_id;
        s.cycle_cap = s_cap;
        write_to(target("smells-hubs.json"), [&](std::ostream& o) { reports::write_smell_report(o, s, s_seed); });
      }
      return 0;
    }

    if (*eval_cmd) {
      const auto selection = parse_smell_selection(e_smell);
      const auto curr = read_graph(e_curr);
      const auto next = read_graph(e_next);
      const auto predictions = load_predictions(e_pred);
      std::size_t vanished = 0;
      const auto truth = truth_for(predictions, next, &vanished);
      if (vanished) std::cerr << "warning: " << vanished << " pairs lost an endpoint in v_{n+1}\n";

      reports::MetricsDocument doc;
      doc.seed = e_seed;
      doc.versions = {curr.version_id(), next.version_id()};
      doc.model_id = predictions.model_id;
      doc.sections.push_back({"edges", edge_metrics(predictions, truth)});
      const auto edges = predictions.predicted_edges();
      if (selection != SmellSelection::Hubs) {
        doc.sections.push_back({"cyclic-dependency", cycle_metrics(cycle_filter(curr, edges, e_cap), curr, next)});
      }
      if (selection != SmellSelection::Cycles) {
        doc.sections.push_back({"hub-like", hub_metrics(hub_filter(curr, edges, e_fraction), curr, next, e_fraction)});
      }
      if (e_out.empty()) {
        reports::write_metrics_report(std::cout, doc);
      } else {
        fs::create_directories(e_out);
        write_to((fs::path(e_out) / "metrics.json").string(), [&](std::ostream& o) { reports::write_metrics_report(o, doc); });
        write_to((fs::path(e_out) / "metrics.csv").string(), [&](std::ostream& o) { reports::write_metrics_csv(o, doc); });
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_status_for(e);
  }
  return 0;
}
