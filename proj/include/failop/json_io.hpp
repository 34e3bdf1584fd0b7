#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "failop/config.hpp"
#include "failop/constraints.hpp"
#include "failop/model.hpp"
#include "failop/solver.hpp"
#include "failop/violation.hpp"

namespace failop {

using Json = nlohmann::ordered_json;

/// Raised for malformed documents: wrong types, missing keys, unknown
/// enum values. Domain-rule breaches are Violations, not SchemaErrors.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline const Json& require(const Json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw SchemaError(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(where + ": missing key '" + key + "'");
  return *it;
}

inline std::string as_string(const Json& j, const std::string& where) {
  if (!j.is_string()) throw SchemaError(where + ": expected a string");
  return j.get<std::string>();
}

inline std::int64_t as_integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw SchemaError(where + ": expected an integral number");
  return j.get<std::int64_t>();
}

inline std::vector<std::string> as_string_list(const Json& j, const std::string& where) {
  if (!j.is_array()) throw SchemaError(where + ": expected an array of strings");
  std::vector<std::string> out;
  for (const auto& item : j) out.push_back(as_string(item, where));
  return out;
}

inline int parse_asil(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return static_cast<int>(j.get<std::int64_t>());
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "QM") return 0;
    if (s == "A") return 1;
    if (s == "B") return 2;
    if (s == "C") return 3;
    if (s == "D") return 4;
    throw SchemaError(where + ": unknown asil '" + s + "', expected QM/A/B/C/D or 0..4");
  }
  throw SchemaError(where + ": asil must be a string or an integer");
}

inline std::string asil_to_string(int asil) {
  switch (asil) {
    case 0: return "QM";
    case 1: return "A";
    case 2: return "B";
    case 3: return "C";
    case 4: return "D";
  }
  return std::to_string(asil);
}

inline PowerSupply parse_supply(const Json& j, const std::string& where) {
  const std::string s = as_string(j, where);
  if (s == "red") return PowerSupply::red;
  if (s == "blue") return PowerSupply::blue;
  throw SchemaError(where + ": unknown power_supply '" + s + "', expected red or blue");
}

inline SlaveMode parse_slave_mode(const Json& j, const std::string& where) {
  const std::string s = as_string(j, where);
  if (s == "none") return SlaveMode::none;
  if (s == "hot") return SlaveMode::hot;
  if (s == "cold") return SlaveMode::cold;
  throw SchemaError(where + ": unknown slave_mode '" + s + "', expected none/hot/cold");
}

}  // namespace detail

/// Reads a model document. Structural problems raise SchemaError; rule
/// checks are left to validate_model.
inline SystemModel parse_model(const Json& doc) {
  using namespace detail;
  if (!doc.is_object()) throw SchemaError("model: expected a top-level object");
  SystemModel m;
  if (doc.contains("frt_us")) m.frt = as_integer(doc["frt_us"], "model.frt_us");

  for (const auto& fj : require(doc, "features", "model")) {
    Feature f;
    f.id = as_string(require(fj, "id", "feature"), "feature.id");
    if (fj.contains("name")) f.name = as_string(fj["name"], "feature.name");
    f.realized_by = as_string_list(require(fj, "realized_by", "feature " + f.id),
                                   "feature " + f.id + ".realized_by");
    m.features.push_back(std::move(f));
  }

  for (const auto& sj : require(doc, "aswcs", "model")) {
    Aswc s;
    s.id = as_string(require(sj, "id", "aswc"), "aswc.id");
    if (sj.contains("name")) s.name = as_string(sj["name"], "aswc.name");
    s.wcet = as_integer(require(sj, "wcet_us", "aswc " + s.id), "aswc " + s.id + ".wcet_us");
    s.asil = parse_asil(require(sj, "asil", "aswc " + s.id), "aswc " + s.id);
    s.fail_op = static_cast<int>(
        as_integer(require(sj, "fail_op", "aswc " + s.id), "aswc " + s.id + ".fail_op"));
    s.min_ftt =
        as_integer(require(sj, "min_ftt_us", "aswc " + s.id), "aswc " + s.id + ".min_ftt_us");
    s.features =
        as_string_list(require(sj, "features", "aswc " + s.id), "aswc " + s.id + ".features");
    m.aswcs.push_back(std::move(s));
  }

  for (const auto& ej : require(doc, "nodes", "model")) {
    ExecutionNode e;
    e.id = as_string(require(ej, "id", "node"), "node.id");
    if (ej.contains("name")) e.name = as_string(ej["name"], "node.name");
    if (ej.contains("kind")) {
      const std::string kind = as_string(ej["kind"], "node " + e.id + ".kind");
      if (kind == "central")
        e.kind = NodeKind::central;
      else if (kind == "peripheral")
        e.kind = NodeKind::peripheral;
      else
        throw SchemaError("node " + e.id + ": unknown kind '" + kind + "'");
    }
    if (e.kind == NodeKind::central) {
      e.total_time_budget = as_integer(require(ej, "total_time_budget_us", "node " + e.id),
                                       "node " + e.id + ".total_time_budget_us");
      e.power_supply = parse_supply(require(ej, "power_supply", "node " + e.id),
                                    "node " + e.id + ".power_supply");
    } else {
      if (ej.contains("total_time_budget_us"))
        e.total_time_budget =
            as_integer(ej["total_time_budget_us"], "node " + e.id + ".total_time_budget_us");
      if (ej.contains("power_supply"))
        e.power_supply = parse_supply(ej["power_supply"], "node " + e.id + ".power_supply");
    }
    m.nodes.push_back(std::move(e));
  }

  if (doc.contains("clusters")) {
    for (const auto& cj : doc["clusters"]) {
      AswcCluster sc;
      sc.id = as_string(require(cj, "id", "cluster"), "cluster.id");
      sc.members = as_string_list(require(cj, "members", "cluster " + sc.id),
                                  "cluster " + sc.id + ".members");
      if (cj.contains("prio_points_master"))
        sc.prio_points_master = static_cast<int>(
            as_integer(cj["prio_points_master"], "cluster " + sc.id + ".prio_points_master"));
      if (cj.contains("prio_points_hot_slave"))
        sc.prio_points_hot_slave = static_cast<int>(
            as_integer(cj["prio_points_hot_slave"], "cluster " + sc.id + ".prio_points_hot_slave"));
      m.clusters.push_back(std::move(sc));
    }
  }

  if (doc.contains("links")) {
    for (const auto& lj : doc["links"]) {
      Link l;
      l.a = as_string(require(lj, "a", "link"), "link.a");
      l.b = as_string(require(lj, "b", "link"), "link.b");
      m.links.push_back(std::move(l));
    }
  }
  return m;
}

inline Json model_to_json(const SystemModel& m) {
  Json doc;
  doc["frt_us"] = m.frt;
  doc["features"] = Json::array();
  for (const auto& f : m.features) {
    Json fj;
    fj["id"] = f.id;
    if (!f.name.empty()) fj["name"] = f.name;
    fj["realized_by"] = f.realized_by;
    doc["features"].push_back(fj);
  }
  doc["aswcs"] = Json::array();
  for (const auto& s : m.aswcs) {
    Json sj;
    sj["id"] = s.id;
    if (!s.name.empty()) sj["name"] = s.name;
    sj["wcet_us"] = s.wcet;
    sj["asil"] = detail::asil_to_string(s.asil);
    sj["fail_op"] = s.fail_op;
    sj["min_ftt_us"] = s.min_ftt;
    sj["features"] = s.features;
    doc["aswcs"].push_back(sj);
  }
  doc["nodes"] = Json::array();
  for (const auto& e : m.nodes) {
    Json ej;
    ej["id"] = e.id;
    if (!e.name.empty()) ej["name"] = e.name;
    ej["kind"] = to_string(e.kind);
    if (e.kind == NodeKind::central || e.total_time_budget > 0)
      ej["total_time_budget_us"] = e.total_time_budget;
    ej["power_supply"] = to_string(e.power_supply);
    doc["nodes"].push_back(ej);
  }
  if (!m.clusters.empty() && m.sealed) {
    doc["clusters"] = Json::array();
    for (const auto& sc : m.clusters) {
      Json cj;
      cj["id"] = sc.id;
      cj["members"] = sc.members;
      cj["prio_points_master"] = sc.prio_master();
      cj["prio_points_hot_slave"] = sc.prio_hot_slave();
      doc["clusters"].push_back(cj);
    }
  }
  if (!m.links.empty()) {
    doc["links"] = Json::array();
    for (const auto& l : m.links) doc["links"].push_back(Json{{"a", l.a}, {"b", l.b}});
  }
  return doc;
}

inline Json scenario_to_json(const FaultScenario& s) {
  Json j;
  j["isolated_nodes"] = Json::array();
  for (const auto& n : s.isolated_nodes) j["isolated_nodes"].push_back(n);
  j["fault_count"] = s.fault_count;
  return j;
}

inline FaultScenario parse_scenario(const Json& j) {
  using namespace detail;
  FaultScenario s;
  for (const auto& n : as_string_list(require(j, "isolated_nodes", "scenario"),
                                      "scenario.isolated_nodes"))
    s.isolated_nodes.insert(n);
  s.fault_count = static_cast<int>(as_integer(require(j, "fault_count", "scenario"),
                                              "scenario.fault_count"));
  return s;
}

inline Json placement_to_json(const ClusterPlacement& p) {
  Json j;
  j["cluster"] = p.cluster_id;
  j["allocated"] = Json::array();
  for (const auto& n : p.allocated) j["allocated"].push_back(n);
  j["master"] = p.master ? Json(*p.master) : Json(nullptr);
  j["slave"] = p.slave ? Json(*p.slave) : Json(nullptr);
  j["slave_mode"] = to_string(p.slave_mode);
  return j;
}

inline ClusterPlacement parse_placement(const Json& j) {
  using namespace detail;
  ClusterPlacement p;
  p.cluster_id = as_string(require(j, "cluster", "placement"), "placement.cluster");
  for (const auto& n : as_string_list(require(j, "allocated", "placement " + p.cluster_id),
                                      "placement " + p.cluster_id + ".allocated"))
    p.allocated.insert(n);
  const std::string where = "placement " + p.cluster_id;
  if (j.contains("master") && !j["master"].is_null())
    p.master = as_string(j["master"], where + ".master");
  if (j.contains("slave") && !j["slave"].is_null())
    p.slave = as_string(j["slave"], where + ".slave");
  if (j.contains("slave_mode")) p.slave_mode = parse_slave_mode(j["slave_mode"], where);
  return p;
}

/// A deployment document: the fault state it belongs to plus the
/// placements. Emitted by solve/transition and accepted back unchanged.
struct ConfigDocument {
  FaultScenario scenario;
  DeploymentConfig config;
};

inline Json config_document_to_json(const ConfigDocument& doc) {
  Json j;
  j["scenario"] = scenario_to_json(doc.scenario);
  j["placements"] = Json::array();
  for (const auto& p : doc.config.placements) j["placements"].push_back(placement_to_json(p));
  j["priority_sum"] = doc.config.priority_sum;
  return j;
}

inline ConfigDocument parse_config_document(const Json& j) {
  using namespace detail;
  ConfigDocument doc;
  doc.scenario = parse_scenario(require(j, "scenario", "config"));
  for (const auto& pj : require(j, "placements", "config")) doc.config.placements.push_back(parse_placement(pj));
  doc.config.sort_by_cluster();
  if (j.contains("priority_sum"))
    doc.config.priority_sum = static_cast<int>(as_integer(j["priority_sum"], "config.priority_sum"));
  return doc;
}

inline Json violations_to_json(const std::vector<Violation>& vs) {
  Json arr = Json::array();
  for (const auto& v : vs) {
    Json j;
    j["code"] = to_string(v.code);
    j["cluster"] = v.cluster_id.empty() ? Json(nullptr) : Json(v.cluster_id);
    j["node"] = v.node_id.empty() ? Json(nullptr) : Json(v.node_id);
    j["detail"] = v.detail;
    arr.push_back(j);
  }
  return arr;
}

/// The per-scenario report document: scenario, placements, node
/// utilization, priority sum, feature availability and violations, plus
/// the solver's probed targets when it produced the deployment.
inline Json deployment_report(const SystemModel& model, const FaultScenario& scenario,
                              const DeploymentConfig& config,
                              const std::vector<Violation>& violations,
                              const std::vector<std::pair<int, bool>>* checked_targets = nullptr) {
  Json j;
  j["scenario"] = scenario_to_json(scenario);
  j["placements"] = Json::array();
  for (const auto& p : config.placements) j["placements"].push_back(placement_to_json(p));
  j["nodes"] = Json::array();
  for (auto ni : model.central_by_id) {
    const ExecutionNode& e = model.nodes[ni];
    Json nj;
    nj["id"] = e.id;
    nj["used_us"] = used_time_budget(model, config, e.id);
    nj["total_us"] = e.total_time_budget;
    nj["isolated"] = scenario.is_isolated(e.id);
    j["nodes"].push_back(nj);
  }
  j["priority_sum"] = compute_priority_sum(model, config);
  Json provided = Json::array(), lost = Json::array();
  for (const auto& [fid, ok] : feature_availability(model, config))
    (ok ? provided : lost).push_back(fid);
  j["features"] = Json{{"provided", provided}, {"lost", lost}};
  j["violations"] = violations_to_json(violations);
  if (checked_targets) {
    j["checked_targets"] = Json::array();
    for (const auto& [t, sat] : *checked_targets) j["checked_targets"].push_back(Json{{"target", t}, {"satisfiable", sat}});
  }
  return j;
}

}  // namespace failop
