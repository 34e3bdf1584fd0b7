#pragma once

#include <sstream>
#include <string>

#include "failop/json_io.hpp"
#include "failop/pag.hpp"

namespace failop {

namespace detail {

inline Json cause_to_json(const PagCause& c) {
  Json j;
  if (c.kind == PagCause::Kind::isolation) {
    j["kind"] = "isolation";
    j["node"] = c.node_id;
  } else {
    j["kind"] = "supply_loss";
    j["supply"] = to_string(c.supply);
  }
  j["label"] = c.label();
  return j;
}

inline Json string_array(const std::vector<std::string>& v) {
  Json a = Json::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

inline Json string_array(const std::set<std::string>& v) {
  Json a = Json::array();
  for (const auto& s : v) a.push_back(s);
  return a;
}

}  // namespace detail

/// Structure-only view of an availability graph (no deployments).
inline Json pag_to_json(const Pag& pag) {
  Json j;
  j["max_faults"] = pag.max_faults;
  j["vertices"] = Json::array();
  for (const auto& v : pag.vertices) {
    Json vj;
    vj["id"] = v.id;
    vj["alive"] = detail::string_array(v.alive);
    vj["fault_depth"] = v.fault_depth;
    j["vertices"].push_back(vj);
  }
  j["edges"] = Json::array();
  for (const auto& e : pag.edges) {
    Json ej;
    ej["from"] = pag.vertices[e.from].id;
    ej["to"] = pag.vertices[e.to].id;
    ej["cause"] = detail::cause_to_json(e.cause);
    j["edges"].push_back(ej);
  }
  return j;
}

/// The full degradation account of a resolved availability graph: per
/// vertex the deployment, node utilization, priority sum and feature
/// availability; per edge the cause and what the transition costs; plus
/// the per-feature worst-case fault survivability.
inline Json degradation_report(const SystemModel& model, const Pag& pag) {
  if (!pag.resolved) throw std::invalid_argument("degradation_report: pag not resolved");
  Json j;
  j["max_faults"] = pag.max_faults;
  j["vertices"] = Json::array();
  for (const auto& v : pag.vertices) {
    Json vj;
    vj["id"] = v.id;
    vj["alive"] = detail::string_array(v.alive);
    vj["fault_depth"] = v.fault_depth;
    vj["priority_sum"] = v.result->priority_sum;
    vj["optimal"] = v.result->optimal;
    vj["placements"] = Json::array();
    for (const auto& p : v.result->config.placements)
      vj["placements"].push_back(placement_to_json(p));
    vj["nodes"] = Json::array();
    for (const auto& node : v.alive) {
      const ExecutionNode* e = model.find_node(node);
      Json nj;
      nj["id"] = node;
      nj["used_us"] = used_time_budget(model, v.result->config, node);
      nj["total_us"] = e->total_time_budget;
      vj["nodes"].push_back(nj);
    }
    vj["features"] = Json{{"provided", detail::string_array(v.provided_features)},
                          {"lost", detail::string_array(v.lost_features)}};
    Json targets = Json::array();
    for (const auto& [t, sat] : v.result->checked_targets)
      targets.push_back(Json{{"target", t}, {"satisfiable", sat}});
    vj["checked_targets"] = targets;
    vj["nodes_explored"] = v.result->stats.nodes_explored;
    j["vertices"].push_back(vj);
  }
  j["edges"] = Json::array();
  for (const auto& e : pag.edges) {
    Json ej;
    ej["from"] = pag.vertices[e.from].id;
    ej["to"] = pag.vertices[e.to].id;
    ej["cause"] = detail::cause_to_json(e.cause);
    ej["lost_clusters"] = detail::string_array(e.lost_clusters);
    ej["lost_features"] = detail::string_array(e.lost_features);
    ej["priority_delta"] = e.priority_delta;
    j["edges"].push_back(ej);
  }
  j["feature_survivability"] = Json::array();
  for (const auto& f : model.features)
    j["feature_survivability"].push_back(
        Json{{"feature", f.id}, {"survivable_faults", survivable_faults(pag, f.id)}});
  return j;
}

/// DOT text of the graph: vertices labeled with the alive node ids (and,
/// when resolved, the priority sum and lost features), edges labeled
/// with the isolated node id or R/B for a lost supply.
inline std::string to_dot(const Pag& pag) {
  std::ostringstream out;
  out << "digraph pag {\n";
  out << "  rankdir=TB;\n";
  out << "  node [shape=box];\n";
  for (const auto& v : pag.vertices) {
    out << "  " << v.id << " [label=\"";
    bool first = true;
    for (const auto& node : v.alive) {
      out << (first ? "" : " ") << node;
      first = false;
    }
    if (v.result) {
      out << "\\nP=" << v.result->priority_sum;
      if (!v.lost_features.empty()) {
        out << "\\nlost:";
        for (const auto& fid : v.lost_features) out << " " << fid;
      }
    }
    out << "\"];\n";
  }
  for (const auto& e : pag.edges)
    out << "  " << pag.vertices[e.from].id << " -> " << pag.vertices[e.to].id << " [label=\""
        << e.cause.label() << "\"];\n";
  out << "}\n";
  return out.str();
}

namespace detail {

inline std::string join(const Json& arr, const char* sep = ",") {
  std::string s;
  for (const auto& item : arr) {
    if (!s.empty()) s += sep;
    s += item.is_string() ? item.get<std::string>() : item.dump();
  }
  return s;
}

}  // namespace detail

/// Human-readable rendering of a deployment report document.
inline std::string render_deployment_text(const Json& report) {
  std::ostringstream out;
  const auto& scenario = report["scenario"];
  out << "scenario: isolated={" << detail::join(scenario["isolated_nodes"]) << "} fault_count="
      << scenario["fault_count"].get<int>() << "\n";
  out << "priority sum: " << report["priority_sum"].get<int>() << "\n";
  if (report.contains("checked_targets")) {
    out << "checked targets:";
    for (const auto& t : report["checked_targets"])
      out << " " << t["target"].get<int>() << (t["satisfiable"].get<bool>() ? ":sat" : ":unsat");
    out << "\n";
  }
  out << "placements:\n";
  for (const auto& p : report["placements"]) {
    out << "  " << p["cluster"].get<std::string>() << "  master="
        << (p["master"].is_null() ? "-" : p["master"].get<std::string>()) << "  slave="
        << (p["slave"].is_null() ? "-" : p["slave"].get<std::string>()) << "  mode="
        << p["slave_mode"].get<std::string>() << "  alloc={" << detail::join(p["allocated"])
        << "}\n";
  }
  out << "nodes:\n";
  for (const auto& n : report["nodes"]) {
    out << "  " << n["id"].get<std::string>() << "  used=" << n["used_us"].get<std::int64_t>()
        << "us  total=" << n["total_us"].get<std::int64_t>();
    if (n.contains("isolated") && n["isolated"].get<bool>()) out << "  [isolated]";
    out << "\n";
  }
  out << "features: provided={" << detail::join(report["features"]["provided"]) << "} lost={"
      << detail::join(report["features"]["lost"]) << "}\n";
  if (report["violations"].empty()) {
    out << "violations: none\n";
  } else {
    out << "violations:\n";
    for (const auto& v : report["violations"])
      out << "  " << v["code"].get<std::string>() << "  " << v["detail"].get<std::string>() << "\n";
  }
  return out.str();
}

inline std::string render_violations_text(const Json& violations) {
  std::ostringstream out;
  if (violations.empty()) {
    out << "ok: no violations\n";
    return out.str();
  }
  out << violations.size() << " violation(s):\n";
  for (const auto& v : violations) {
    out << "  " << v["code"].get<std::string>();
    if (!v["cluster"].is_null()) out << "  cluster=" << v["cluster"].get<std::string>();
    if (!v["node"].is_null()) out << "  node=" << v["node"].get<std::string>();
    out << "  " << v["detail"].get<std::string>() << "\n";
  }
  return out.str();
}

inline std::string render_pag_text(const Json& pag_doc) {
  std::ostringstream out;
  out << "pag: " << pag_doc["vertices"].size() << " vertices, " << pag_doc["edges"].size()
      << " edges, max_faults " << pag_doc["max_faults"].get<int>() << "\n";
  for (const auto& v : pag_doc["vertices"]) {
    out << "  " << v["id"].get<std::string>() << " depth=" << v["fault_depth"].get<int>()
        << " alive={" << detail::join(v["alive"]) << "}";
    if (v.contains("priority_sum")) {
      out << " sum=" << v["priority_sum"].get<int>() << " lost={"
          << detail::join(v["features"]["lost"]) << "}";
    }
    out << "\n";
  }
  out << "edges:\n";
  for (const auto& e : pag_doc["edges"]) {
    out << "  " << e["from"].get<std::string>() << " -" << e["cause"]["label"].get<std::string>()
        << "-> " << e["to"].get<std::string>();
    if (e.contains("priority_delta")) {
      out << "  dP=" << e["priority_delta"].get<int>();
      if (!e["lost_features"].empty()) out << " lost={" << detail::join(e["lost_features"]) << "}";
    }
    out << "\n";
  }
  if (pag_doc.contains("feature_survivability")) {
    out << "feature survivability (worst-case faults):\n";
    for (const auto& f : pag_doc["feature_survivability"])
      out << "  " << f["feature"].get<std::string>() << ": " << f["survivable_faults"].get<int>()
          << "\n";
  }
  return out.str();
}

}  // namespace failop
