#include "smellcast/reports.hpp"

#include <istream>
#include <nlohmann/json.hpp>
#include <ostream>

#include "smellcast/errors.hpp"
#include "smellcast/text.hpp"

namespace smellcast::reports {

namespace {

using json = nlohmann::ordered_json;

json edge_json(const Edge& e) { return json::array({e.source, e.target}); }

json hub_json(const HubEntry& h) {
  json j;
  j["node"] = h.node;
  j["in_degree"] = h.in_degree;
  j["out_degree"] = h.out_degree;
  j["balance"] = h.balance;
  j["fraction_bound"] = h.fraction_bound;
  return j;
}

json metrics_json(const MetricsReport& m) {
  json j;
  j["tp"] = m.tp;
  j["fp"] = m.fp;
  j["fn"] = m.fn;
  j["tn"] = m.tn;
  j["precision"] = m.precision;
  j["recall"] = m.recall;
  j["f1"] = m.f1;
  j["negative_f1"] = m.negative_f1;
  j["weighted_f"] = m.weighted_f;
  return j;
}

json header(const char* kind) {
  json j;
  j["report"] = kind;
  j["format"] = kReportFormatVersion;
  return j;
}

json parse_json(std::istream& in, const std::string& source_name) {
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(source_name, 0, e.what());
  }
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

}  // namespace

void write_smell_report(std::ostream& out, const AnticipatedSmells& smells, std::uint64_t seed) {
  auto j = header("anticipated-smells");
  j["seed"] = seed;
  j["kind"] = std::string(smell_kind_name(smells.kind));
  j["provenance"]["versions"] = smells.versions;
  j["provenance"]["model"] = smells.model_id;
  j["parameters"]["fraction"] = smells.fraction;
  j["parameters"]["cycle_cap"] = smells.cycle_cap;
  j["truncated"] = smells.truncated;
  j["triggering_edges"] = json::array();
  for (const auto& e : smells.triggering_edges) j["triggering_edges"].push_back(edge_json(e));
  if (smells.kind == SmellKind::CyclicDependency) {
    j["cycle_count"] = smells.cycles.size();
    j["cycles"] = smells.cycles;
  } else {
    j["hub_count"] = smells.hubs.size();
    j["hubs"] = json::array();
    for (const auto& h : smells.hubs) j["hubs"].push_back(hub_json(h));
  }
  emit(out, j);
}

AnticipatedSmells parse_smell_report(std::istream& in, const std::string& source_name) {
  const auto j = parse_json(in, source_name);
  try {
    if (j.at("report") != "anticipated-smells") {
      throw ParseError(source_name, 0, "not an anticipated-smells report");
    }
    AnticipatedSmells s;
    s.kind = smell_kind_from_name(j.at("kind").get<std::string>());
    s.versions = j.at("provenance").at("versions").get<std::vector<std::string>>();
    s.model_id = j.at("provenance").at("model").get<std::string>();
    s.fraction = j.at("parameters").at("fraction").get<double>();
    s.cycle_cap = j.at("parameters").at("cycle_cap").get<std::size_t>();
    s.truncated = j.at("truncated").get<bool>();
    for (const auto& e : j.at("triggering_edges")) {
      s.triggering_edges.push_back({e.at(0).get<std::string>(), e.at(1).get<std::string>()});
    }
    if (s.kind == SmellKind::CyclicDependency) {
      s.cycles = j.at("cycles").get<std::vector<std::vector<NodeId>>>();
    } else {
      for (const auto& h : j.at("hubs")) {
        s.hubs.push_back({h.at("node").get<std::string>(), h.at("in_degree").get<std::size_t>(),
                          h.at("out_degree").get<std::size_t>(), h.at("balance").get<std::size_t>(),
                          h.at("fraction_bound").get<double>()});
      }
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source_name, 0, std::string("malformed smell report: ") + e.what());
  }
}

void write_cycle_report(std::ostream& out, const CycleReport& report, const std::string& version,
                        std::size_t cap) {
  auto j = header("cycles");
  j["version"] = version;
  j["parameters"]["cycle_cap"] = cap;
  j["truncated"] = report.truncated;
  j["count"] = report.count;
  j["mean_length"] = report.mean_length;
  j["cycles"] = report.cycles;
  emit(out, j);
}

void write_hub_report(std::ostream& out, const HubReport& report, const std::string& version) {
  auto j = header("hubs");
  j["version"] = version;
  j["parameters"]["fraction"] = report.fraction;
  j["median_in"] = report.median_in.value();
  j["median_out"] = report.median_out.value();
  j["count"] = report.hubs.size();
  j["hubs"] = json::array();
  for (const auto& h : report.hubs) j["hubs"].push_back(hub_json(h));
  emit(out, j);
}

void write_metrics_report(std::ostream& out, const MetricsDocument& doc) {
  auto j = header("metrics");
  j["seed"] = doc.seed;
  j["provenance"]["versions"] = doc.versions;
  j["provenance"]["model"] = doc.model_id;
  j["sections"] = json::array();
  for (const auto& s : doc.sections) {
    json section;
    section["scope"] = s.scope;
    section["metrics"] = metrics_json(s.metrics);
    j["sections"].push_back(section);
  }
  emit(out, j);
}

MetricsDocument parse_metrics_report(std::istream& in, const std::string& source_name) {
  const auto j = parse_json(in, source_name);
  try {
    if (j.at("report") != "metrics") throw ParseError(source_name, 0, "not a metrics report");
    MetricsDocument doc;
    doc.seed = j.at("seed").get<std::uint64_t>();
    doc.versions = j.at("provenance").at("versions").get<std::vector<std::string>>();
    doc.model_id = j.at("provenance").at("model").get<std::string>();
    for (const auto& s : j.at("sections")) {
      const auto& m = s.at("metrics");
      MetricsReport r;
      r.tp = m.at("tp").get<std::size_t>();
      r.fp = m.at("fp").get<std::size_t>();
      r.fn = m.at("fn").get<std::size_t>();
      r.tn = m.at("tn").get<std::size_t>();
      r.precision = m.at("precision").get<double>();
      r.recall = m.at("recall").get<double>();
      r.f1 = m.at("f1").get<double>();
      r.negative_f1 = m.at("negative_f1").get<double>();
      r.weighted_f = m.at("weighted_f").get<double>();
      doc.sections.push_back({s.at("scope").get<std::string>(), r});
    }
    return doc;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source_name, 0, std::string("malformed metrics report: ") + e.what());
  }
}

void write_metrics_csv(std::ostream& out, const MetricsDocument& doc) {
  out << "scope,tp,fp,fn,tn,precision,recall,f1,negative_f1,weighted_f\n";
  for (const auto& s : doc.sections) {
    const auto& m = s.metrics;
    out << s.scope << ',' << m.tp << ',' << m.fp << ',' << m.fn << ',' << m.tn << ','
        << text::format_double(m.precision) << ',' << text::format_double(m.recall) << ','
        << text::format_double(m.f1) << ',' << text::format_double(m.negative_f1) << ','
        << text::format_double(m.weighted_f) << '\n';
  }
}

void write_feature_ranking(std::ostream& out, const std::vector<FeatureGain>& ranking,
                           const std::vector<std::string>& retained, std::size_t bins,
                           const std::string& policy) {
  auto j = header("feature-ranking");
  j["bins"] = bins;
  j["policy"] = policy;
  j["ranking"] = json::array();
  for (const auto& fg : ranking) {
    json e;
    e["feature"] = fg.name;
    e["gain"] = fg.gain;
    j["ranking"].push_back(e);
  }
  j["retained"] = retained;
  emit(out, j);
}

}  // namespace smellcast::reports
