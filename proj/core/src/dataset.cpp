#include "smellcast/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <set>
#include <utility>

#include "smellcast/errors.hpp"
#include "smellcast/features.hpp"
#include "smellcast/text.hpp"

namespace smellcast {

namespace {

const ContentCorpus& corpus_or_empty(const ContentCorpus* corpus) {
  static const ContentCorpus empty;
  return corpus ? *corpus : empty;
}

// Fills instance features for index pairs of `g`.
class PairFeaturizer {
 public:
  PairFeaturizer(const DependencyGraph& g, const ContentCorpus* corpus, const FeatureOptions& opts)
      : g_(g), opts_(opts) {
    if (opts.content) content_.emplace(corpus_or_empty(corpus), g.nodes(), opts.hierarchy);
  }

  std::vector<double> operator()(std::size_t u, std::size_t v) const {
    std::vector<double> f(opts_.content ? kTopologicalFeatureCount + kContentFeatureCount
                                        : kTopologicalFeatureCount);
    topo_features_into(g_, u, v,
                       std::span<double, kTopologicalFeatureCount>(f.data(), kTopologicalFeatureCount));
    if (content_) {
      content_->similarities_into(
          u, v,
          std::span<double, kContentFeatureCount>(f.data() + kTopologicalFeatureCount,
                                                  kContentFeatureCount));
    }
    return f;
  }

 private:
  const DependencyGraph& g_;
  FeatureOptions opts_;
  std::optional<ContentIndex> content_;
};

}  // namespace

std::size_t Dataset::count(Label label) const {
  return static_cast<std::size_t>(std::count_if(
      instances.begin(), instances.end(), [&](const Instance& i) { return i.label == label; }));
}

bool Dataset::labeled() const {
  return !instances.empty() &&
         std::all_of(instances.begin(), instances.end(),
                     [](const Instance& i) { return i.label.has_value(); });
}

Dataset build_training_set(const DependencyGraph& prev, const DependencyGraph& curr,
                           const ContentCorpus* corpus_prev, const FeatureOptions& options) {
  if (prev.empty() || curr.empty()) throw DomainError("training needs two non-empty graphs");
  std::vector<NodeId> common;
  std::set_intersection(prev.nodes().begin(), prev.nodes().end(), curr.nodes().begin(),
                        curr.nodes().end(), std::back_inserter(common));
  if (common.empty()) {
    throw DomainError("versions '" + prev.version_id() + "' and '" + curr.version_id() +
                      "' share no package");
  }

  std::vector<std::size_t> prev_idx;
  std::vector<std::size_t> curr_idx;
  for (const auto& n : common) {
    prev_idx.push_back(*prev.index_of(n));
    curr_idx.push_back(*curr.index_of(n));
  }

  PairFeaturizer featurize(prev, corpus_prev, options);
  Dataset ds;
  ds.kind = DatasetKind::Train;
  ds.provenance = {prev.version_id(), curr.version_id()};
  ds.feature_names = canonical_feature_names(options.content);
  ds.instances.reserve(common.size() * (common.size() - 1));
  for (std::size_t i = 0; i < common.size(); ++i) {
    for (std::size_t j = 0; j < common.size(); ++j) {
      if (i == j) continue;
      const bool positive = prev.has_edge(prev_idx[i], prev_idx[j]) ||
                            curr.has_edge(curr_idx[i], curr_idx[j]);
      ds.instances.push_back({common[i], common[j], featurize(prev_idx[i], prev_idx[j]),
                              positive ? Label::Positive : Label::Negative});
    }
  }
  return ds;
}

Dataset build_test_set(const DependencyGraph& curr, const ContentCorpus* corpus_curr,
                       const FeatureOptions& options) {
  PairFeaturizer featurize(curr, corpus_curr, options);
  Dataset ds;
  ds.kind = DatasetKind::Test;
  ds.provenance = {curr.version_id()};
  ds.feature_names = canonical_feature_names(options.content);
  const auto n = curr.node_count();
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) {
      if (u == v || curr.has_edge(u, v)) continue;
      ds.instances.push_back({curr.name(u), curr.name(v), featurize(u, v), std::nullopt});
    }
  }
  return ds;
}

Dataset label_for_evaluation(const Dataset& test, const DependencyGraph& next,
                             std::size_t* vanished) {
  Dataset out = test;
  out.kind = DatasetKind::Test;
  if (out.provenance.size() < 2) out.provenance.push_back(next.version_id());
  std::size_t missing = 0;
  for (auto& inst : out.instances) {
    if (!next.contains(inst.source) || !next.contains(inst.target)) {
      ++missing;
      inst.label = Label::Negative;
      continue;
    }
    inst.label = next.has_edge(inst.source, inst.target) ? Label::Positive : Label::Negative;
  }
  if (vanished) *vanished = missing;
  return out;
}

void write_dataset(std::ostream& out, const Dataset& ds) {
  out << (ds.kind == DatasetKind::Train ? "#train" : "#test");
  for (const auto& v : ds.provenance) out << ' ' << v;
  out << '\n';
  if (!ds.selection.empty()) out << "#selection " << ds.selection << '\n';
  out << "source,target";
  for (const auto& name : ds.feature_names) out << ',' << name;
  out << ",label\n";
  for (const auto& inst : ds.instances) {
    if (inst.source.find(',') != std::string::npos || inst.target.find(',') != std::string::npos) {
      throw DataError("node names may not contain ',' in a feature table");
    }
    out << inst.source << ',' << inst.target;
    for (double v : inst.features) out << ',' << text::format_double(v);
    out << ',';
    if (inst.label) out << (*inst.label == Label::Positive ? '1' : '0');
    out << '\n';
  }
}

Dataset parse_dataset(std::istream& in, const std::string& source_name) {
  Dataset ds;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  bool have_provenance = false;
  std::set<std::pair<std::string, std::string>> pairs;

  while (std::getline(in, line)) {
    ++line_no;
    auto body = text::trim(line);
    if (body.empty()) continue;
    if (body.front() == '#') {
      auto parts = text::split_ws(body);
      if (parts[0] == "#train" || parts[0] == "#test") {
        ds.kind = parts[0] == "#train" ? DatasetKind::Train : DatasetKind::Test;
        ds.provenance.assign(parts.begin() + 1, parts.end());
        have_provenance = true;
      } else if (parts[0] == "#selection") {
        ds.selection = std::string(text::trim(body.substr(std::string_view("#selection").size())));
      }
      continue;
    }
    auto cells = text::split(body, ',');
    if (!have_header) {
      if (cells.size() < 3 || cells[0] != "source" || cells[1] != "target" || cells.back() != "label") {
        throw ParseError(source_name, line_no, "expected header 'source,target,<features...>,label'");
      }
      for (std::size_t i = 2; i + 1 < cells.size(); ++i) ds.feature_names.emplace_back(cells[i]);
      have_header = true;
      continue;
    }
    if (cells.size() != ds.feature_names.size() + 3) {
      throw ParseError(source_name, line_no,
                       "expected " + std::to_string(ds.feature_names.size() + 3) + " columns, got " +
                           std::to_string(cells.size()));
    }
    Instance inst;
    inst.source = std::string(cells[0]);
    inst.target = std::string(cells[1]);
    if (inst.source.empty() || inst.target.empty() || inst.source == inst.target) {
      throw ParseError(source_name, line_no, "pair needs two distinct node names");
    }
    if (!pairs.emplace(inst.source, inst.target).second) {
      throw ParseError(source_name, line_no, "duplicate pair " + inst.source + " -> " + inst.target);
    }
    for (std::size_t i = 2; i + 1 < cells.size(); ++i) {
      auto v = text::parse_double(cells[i]);
      if (!v) throw ParseError(source_name, line_no, "bad number '" + std::string(cells[i]) + "'");
      inst.features.push_back(*v);
    }
    auto label = text::trim(cells.back());
    if (label == "1") {
      inst.label = Label::Positive;
    } else if (label == "0") {
      inst.label = Label::Negative;
    } else if (!label.empty()) {
      throw ParseError(source_name, line_no, "label must be 1, 0 or empty");
    }
    ds.instances.push_back(std::move(inst));
  }
  if (!have_provenance) throw ParseError(source_name, 1, "missing '#train' or '#test' provenance line");
  if (!have_header) throw ParseError(source_name, line_no, "missing header row");
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return parse_dataset(in, path.string());
}

void save_dataset(const std::filesystem::path& path, const Dataset& ds) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_dataset(out, ds);
}

}  // namespace smellcast
