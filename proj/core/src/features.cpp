#include "smellcast/features.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <numeric>
#include <sstream>

#include "smellcast/errors.hpp"
#include "smellcast/text.hpp"

namespace smellcast {

namespace {

// Sorted adjacency of `i` with `exclude` removed.
std::vector<std::size_t> neighbourhood_without(const DependencyGraph& g, std::size_t i,
                                               std::size_t exclude) {
  std::vector<std::size_t> out;
  auto adj = g.adjacent(i);
  out.reserve(adj.size());
  for (auto z : adj) {
    if (z != exclude) out.push_back(z);
  }
  return out;
}

double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

std::vector<std::string> canonical_feature_names(bool include_content) {
  std::vector<std::string> out;
  out.reserve(kTopologicalFeatureCount + kContentFeatureCount);
  for (auto name : kTopologicalFeatureNames) out.emplace_back(name);
  if (include_content) {
    for (auto name : kContentFeatureNames) out.emplace_back(name);
  }
  return out;
}

double FeatureVector::at(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return values[i];
  }
  throw LookupError("unknown feature '" + std::string(name) + "'");
}

PairContext pair_context(const DependencyGraph& g, std::string_view u, std::string_view v) {
  const auto iu = g.require_index(u);
  const auto iv = g.require_index(v);
  if (iu == iv) throw DomainError("pair features need two distinct nodes, got '" + std::string(u) + "' twice");

  PairContext ctx;
  ctx.n = g.node_count();
  ctx.gamma_u = neighbourhood_without(g, iu, iv);
  ctx.gamma_v = neighbourhood_without(g, iv, iu);
  std::vector<std::size_t> common;
  std::set_intersection(ctx.gamma_u.begin(), ctx.gamma_u.end(), ctx.gamma_v.begin(),
                        ctx.gamma_v.end(), std::back_inserter(common));
  ctx.a = common.size();
  ctx.b = ctx.gamma_u.size() - ctx.a;
  ctx.c = ctx.gamma_v.size() - ctx.a;
  ctx.d = ctx.n - 2 - (ctx.a + ctx.b + ctx.c);
  return ctx;
}

void topo_features_into(const DependencyGraph& g, std::size_t u, std::size_t v,
                        std::span<double, kTopologicalFeatureCount> out) {
  auto adj_u = g.adjacent(u);
  auto adj_v = g.adjacent(v);

  std::size_t deg_u = adj_u.size();
  std::size_t deg_v = adj_v.size();
  if (std::binary_search(adj_u.begin(), adj_u.end(), v)) --deg_u;
  if (std::binary_search(adj_v.begin(), adj_v.end(), u)) --deg_v;

  // Merge walk over the two sorted lists; u and v never count as common.
  std::size_t common = 0;
  double adamic_adar = 0.0;
  double resource_allocation = 0.0;
  auto iu = adj_u.begin();
  auto iv = adj_v.begin();
  while (iu != adj_u.end() && iv != adj_v.end()) {
    if (*iu < *iv) {
      ++iu;
    } else if (*iv < *iu) {
      ++iv;
    } else {
      const auto z = *iu;
      if (z != u && z != v) {
        const auto dz = static_cast<double>(g.adjacent(z).size());
        ++common;
        adamic_adar += 1.0 / std::log(dz);
        resource_allocation += 1.0 / dz;
      }
      ++iu;
      ++iv;
    }
  }

  const auto n = g.node_count();
  const auto a = static_cast<double>(common);
  const auto union_size = deg_u + deg_v - common;
  const auto d = static_cast<double>(n - 2 - union_size);
  const auto du = static_cast<double>(deg_u);
  const auto dv = static_cast<double>(deg_v);
  const auto universe = static_cast<double>(n - 2);

  out[0] = adamic_adar;
  out[1] = a;
  out[2] = resource_allocation;
  out[3] = ratio(2.0 * a, du + dv);
  out[4] = (deg_u == 0 || deg_v == 0) ? 0.0 : 0.5 * (a / du + a / dv);
  out[5] = ratio(a + d, universe);
  out[6] = ratio(a, universe);
}

FeatureVector topo_features(const DependencyGraph& g, std::string_view u, std::string_view v) {
  const auto iu = g.require_index(u);
  const auto iv = g.require_index(v);
  if (iu == iv) throw DomainError("pair features need two distinct nodes, got '" + std::string(u) + "' twice");
  FeatureVector fv;
  fv.names = canonical_feature_names(false);
  fv.values.resize(kTopologicalFeatureCount);
  topo_features_into(g, iu, iv, std::span<double, kTopologicalFeatureCount>(fv.values));
  return fv;
}

FeatureVector content_features(const ContentCorpus& corpus, std::string_view u,
                               std::string_view v, bool hierarchy) {
  if (u == v) throw DomainError("pair features need two distinct nodes, got '" + std::string(u) + "' twice");
  FeatureVector fv;
  fv.names.assign(kContentFeatureNames.begin(), kContentFeatureNames.end());
  for (auto ch : kAllChannels) {
    fv.values.push_back(cosine_similarity(package_bag(corpus, u, ch, hierarchy),
                                          package_bag(corpus, v, ch, hierarchy)));
  }
  return fv;
}

ContentIndex::ContentIndex(const ContentCorpus& corpus, const std::vector<NodeId>& nodes,
                           bool hierarchy) {
  entries_.resize(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (auto ch : kAllChannels) {
      auto bag = package_bag(corpus, nodes[i], ch, hierarchy);
      auto& e = entries_[i][static_cast<std::size_t>(ch)];
      e.terms.reserve(bag.size());
      for (const auto& [token, count] : bag.counts()) {
        const auto c = static_cast<double>(count);
        e.terms.emplace_back(token, c);
        e.norm_sq += c * c;
      }
    }
  }
}

void ContentIndex::similarities_into(std::size_t u, std::size_t v,
                                     std::span<double, kContentFeatureCount> out) const {
  for (std::size_t ch = 0; ch < kChannelCount; ++ch) {
    const auto& a = entries_[u][ch];
    const auto& b = entries_[v][ch];
    if (a.terms.empty() || b.terms.empty()) {
      out[ch] = 0.0;
      continue;
    }
    double dot = 0.0;
    auto ia = a.terms.begin();
    auto ib = b.terms.begin();
    while (ia != a.terms.end() && ib != b.terms.end()) {
      if (ia->first < ib->first) {
        ++ia;
      } else if (ib->first < ia->first) {
        ++ib;
      } else {
        dot += ia->second * ib->second;
        ++ia;
        ++ib;
      }
    }
    // Same expression as cosine_similarity so both paths agree bit for bit.
    out[ch] = std::min(1.0, std::max(0.0, dot / std::sqrt(a.norm_sq * b.norm_sq)));
  }
}

double entropy_bits(std::span<const std::size_t> counts) {
  const auto total = std::accumulate(counts.begin(), counts.end(), std::size_t{0});
  if (total == 0) return 0.0;
  double h = 0.0;
  for (auto c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

std::vector<FeatureGain> information_gain(const Dataset& ds, std::size_t bins) {
  if (bins == 0) throw ArgumentError("information gain needs at least one bin");
  if (ds.empty()) throw DomainError("information gain of an empty dataset");
  std::array<std::size_t, 2> label_counts{0, 0};
  for (const auto& inst : ds.instances) {
    if (!inst.label) throw DomainError("information gain needs a labeled dataset");
    ++label_counts[*inst.label == Label::Positive ? 1 : 0];
  }
  if (label_counts[0] == 0 || label_counts[1] == 0) {
    throw DomainError("information gain is degenerate: dataset has a single label");
  }
  const double h_label = entropy_bits(label_counts);
  const auto total = static_cast<double>(ds.size());

  std::vector<FeatureGain> gains;
  for (std::size_t f = 0; f < ds.feature_names.size(); ++f) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& inst : ds.instances) {
      lo = std::min(lo, inst.features[f]);
      hi = std::max(hi, inst.features[f]);
    }
    // table[bin][label]
    std::vector<std::array<std::size_t, 2>> table(bins, {0, 0});
    const double width = hi - lo;
    for (const auto& inst : ds.instances) {
      std::size_t bin = 0;
      if (width > 0.0) {
        const double pos = (inst.features[f] - lo) / width * static_cast<double>(bins);
        bin = std::min(bins - 1, static_cast<std::size_t>(pos));
      }
      ++table[bin][*inst.label == Label::Positive ? 1 : 0];
    }
    double h_cond = 0.0;
    for (const auto& cell : table) {
      const auto n_bin = cell[0] + cell[1];
      if (n_bin == 0) continue;
      h_cond += static_cast<double>(n_bin) / total * entropy_bits(cell);
    }
    double gain = h_label - h_cond;
    if (gain < 1e-12) gain = 0.0;
    gains.push_back({ds.feature_names[f], gain});
  }
  std::stable_sort(gains.begin(), gains.end(),
                   [](const FeatureGain& a, const FeatureGain& b) { return a.gain > b.gain; });
  return gains;
}

std::string describe(const SelectionPolicy& policy) {
  std::ostringstream os;
  if (const auto* top = std::get_if<TopK>(&policy)) {
    os << "top-k " << top->k;
  } else {
    os << "min-gain " << text::format_double(std::get<MinGain>(policy).threshold);
  }
  return os.str();
}

Dataset select_features(const Dataset& ds, const SelectionPolicy& policy, std::size_t bins) {
  const auto feature_count = ds.feature_names.size();
  if (const auto* top = std::get_if<TopK>(&policy)) {
    if (top->k == 0 || top->k > feature_count) {
      throw ArgumentError("top-k must be in [1, " + std::to_string(feature_count) + "], got " +
                          std::to_string(top->k));
    }
  } else if (!std::isfinite(std::get<MinGain>(policy).threshold)) {
    throw ArgumentError("min-gain threshold must be finite");
  }

  const auto ranking = information_gain(ds, bins);
  std::vector<std::string> keep;
  if (const auto* top = std::get_if<TopK>(&policy)) {
    for (std::size_t i = 0; i < top->k; ++i) keep.push_back(ranking[i].name);
  } else {
    const double threshold = std::get<MinGain>(policy).threshold;
    for (const auto& fg : ranking) {
      if (fg.gain > threshold) keep.push_back(fg.name);
    }
    if (keep.empty()) {
      throw DomainError("no feature has information gain above " + text::format_double(threshold));
    }
  }
  // Restore canonical column order.
  std::vector<std::string> ordered;
  for (const auto& name : ds.feature_names) {
    if (std::find(keep.begin(), keep.end(), name) != keep.end()) ordered.push_back(name);
  }
  auto out = project_features(ds, ordered);
  out.selection = describe(policy);
  return out;
}

Dataset project_features(const Dataset& ds, std::span<const std::string> names) {
  std::vector<std::size_t> columns;
  for (const auto& name : names) {
    auto it = std::find(ds.feature_names.begin(), ds.feature_names.end(), name);
    if (it == ds.feature_names.end()) throw SchemaError("dataset has no feature column '" + name + "'");
    columns.push_back(static_cast<std::size_t>(it - ds.feature_names.begin()));
  }
  Dataset out;
  out.kind = ds.kind;
  out.provenance = ds.provenance;
  out.selection = ds.selection;
  out.feature_names.assign(names.begin(), names.end());
  out.instances.reserve(ds.size());
  for (const auto& inst : ds.instances) {
    Instance p{inst.source, inst.target, {}, inst.label};
    p.features.reserve(columns.size());
    for (auto c : columns) p.features.push_back(inst.features[c]);
    out.instances.push_back(std::move(p));
  }
  return out;
}

}  // namespace smellcast
