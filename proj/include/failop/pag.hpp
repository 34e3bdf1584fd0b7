#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "failop/config.hpp"
#include "failop/constraints.hpp"
#include "failop/model.hpp"
#include "failop/solver.hpp"

namespace failop {

/// Thrown when a caller-supplied configuration breaks the constraint
/// catalog; carries the individual violations.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string what, std::vector<Violation> vs)
      : std::runtime_error(std::move(what)), violations(std::move(vs)) {}
  std::vector<Violation> violations;
};

struct PagCause {
  enum class Kind { isolation, supply_loss };
  Kind kind = Kind::isolation;
  std::string node_id;                      // isolation
  PowerSupply supply = PowerSupply::red;    // supply_loss

  /// Edge label: the isolated node's id, or "R"/"B" for a lost supply.
  std::string label() const {
    if (kind == Kind::isolation) return node_id;
    return supply == PowerSupply::red ? "R" : "B";
  }
};

struct PagEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  PagCause cause;
  // filled by analyze
  std::vector<std::string> lost_clusters;
  std::vector<std::string> lost_features;
  int priority_delta = 0;
};

struct PagVertex {
  std::string id;
  std::set<std::string> alive;  // central node ids
  int fault_depth = 0;          // minimum edge count from the root
  // filled by analyze
  std::optional<SolveResult> result;
  std::vector<std::string> provided_features;
  std::vector<std::string> lost_features;
};

/// Platform availability graph: every reachable set of alive central
/// nodes within max_faults transitions, each transition an isolation or
/// a supply loss. Vertices are keyed by their alive set; index 0 is the
/// root (all central nodes alive). Vertex order is (fault_depth, alive
/// set) ascending, edges are ordered by (from, to).
struct Pag {
  int max_faults = 0;
  std::vector<PagVertex> vertices;
  std::vector<PagEdge> edges;
  bool resolved = false;

  const PagVertex& root() const { return vertices.front(); }
  const PagVertex* find_vertex(const std::set<std::string>& alive) const {
    for (const auto& v : vertices)
      if (v.alive == alive) return &v;
    return nullptr;
  }
};

/// Expands the availability graph breadth-first from the full platform.
/// Each vertex below the depth bound gets one isolation edge per alive
/// node and one edge per power supply that still powers an alive node;
/// transitions that would empty the platform are skipped. Vertices with
/// equal alive sets merge, keeping the minimum depth.
inline Pag build_pag(const SystemModel& model, int max_faults) {
  if (!model.sealed) throw std::invalid_argument("build_pag: model not validated");
  if (max_faults < 1) throw std::invalid_argument("build_pag: max_faults must be >= 1");

  Pag pag;
  pag.max_faults = max_faults;

  std::map<std::set<std::string>, std::size_t> index_of;
  std::set<std::string> all;
  for (auto ni : model.central_by_id) all.insert(model.nodes[ni].id);

  pag.vertices.push_back({"", all, 0, {}, {}, {}});
  index_of[all] = 0;

  for (std::size_t v = 0; v < pag.vertices.size(); ++v) {
    if (pag.vertices[v].fault_depth >= max_faults) continue;
    const std::set<std::string> alive = pag.vertices[v].alive;
    int next_depth = pag.vertices[v].fault_depth + 1;

    auto link = [&](const std::set<std::string>& target, PagCause cause) {
      if (target.empty()) return;
      auto it = index_of.find(target);
      std::size_t to;
      if (it == index_of.end()) {
        to = pag.vertices.size();
        pag.vertices.push_back({"", target, next_depth, {}, {}, {}});
        index_of[target] = to;
      } else {
        to = it->second;  // breadth-first, so the stored depth is minimal
      }
      pag.edges.push_back({v, to, cause, {}, {}, 0});
    };

    for (const auto& node : alive) {
      std::set<std::string> target = alive;
      target.erase(node);
      link(target, {PagCause::Kind::isolation, node, PowerSupply::red});
    }
    for (PowerSupply supply : {PowerSupply::red, PowerSupply::blue}) {
      std::set<std::string> target;
      bool any_of_supply = false;
      for (const auto& node : alive) {
        if (model.find_node(node)->power_supply == supply)
          any_of_supply = true;
        else
          target.insert(node);
      }
      if (any_of_supply) link(target, {PagCause::Kind::supply_loss, "", supply});
    }
  }

  // canonical order: depth ascending, then alive set ascending
  std::vector<std::size_t> perm(pag.vertices.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) {
    const auto& va = pag.vertices[a];
    const auto& vb = pag.vertices[b];
    if (va.fault_depth != vb.fault_depth) return va.fault_depth < vb.fault_depth;
    return va.alive < vb.alive;
  });
  std::vector<std::size_t> where(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) where[perm[i]] = i;
  std::vector<PagVertex> sorted;
  sorted.reserve(pag.vertices.size());
  for (auto i : perm) sorted.push_back(std::move(pag.vertices[i]));
  pag.vertices = std::move(sorted);
  for (auto& e : pag.edges) {
    e.from = where[e.from];
    e.to = where[e.to];
  }
  std::sort(pag.edges.begin(), pag.edges.end(), [](const PagEdge& a, const PagEdge& b) {
    if (a.from != b.from) return a.from < b.from;
    return a.to < b.to;
  });
  for (std::size_t i = 0; i < pag.vertices.size(); ++i)
    pag.vertices[i].id = "v" + std::to_string(i);
  return pag;
}

namespace detail {

inline void fill_vertex_features(const SystemModel& model, PagVertex& v) {
  v.provided_features.clear();
  v.lost_features.clear();
  for (const auto& [fid, provided] : feature_availability(model, v.result->config))
    (provided ? v.provided_features : v.lost_features).push_back(fid);
}

}  // namespace detail

/// The predecessor whose deployment seeds a vertex's follow-up solve:
/// the lexicographically smallest alive set among the minimum-depth
/// predecessors (those one level up). Returns nullptr for the root.
inline const PagVertex* analysis_parent(const Pag& pag, std::size_t v) {
  const PagVertex* parent = nullptr;
  for (const auto& e : pag.edges) {
    if (e.to != v) continue;
    const PagVertex& from = pag.vertices[e.from];
    if (from.fault_depth != pag.vertices[v].fault_depth - 1) continue;
    if (!parent || from.alive < parent->alive) parent = &from;
  }
  return parent;
}

/// The fault state a vertex stands for: everything outside its alive set
/// is isolated, and the fault count equals the vertex depth.
inline FaultScenario vertex_scenario(const Pag& pag, const PagVertex& v) {
  FaultScenario scenario;
  scenario.fault_count = v.fault_depth;
  for (const auto& node : pag.root().alive)
    if (!v.alive.count(node)) scenario.isolated_nodes.insert(node);
  return scenario;
}

/// Builds the availability graph and resolves a deployment at every
/// vertex. The root takes the given initial configuration (checked
/// against the catalog) or an initial solve. Every other vertex is solved
/// as a follow-up of its parent — the lexicographically smallest alive
/// set among its minimum-depth predecessors — with the vertex depth as
/// fault count. Edge deltas (lost clusters, lost features, priority)
/// are recorded for every edge.
inline Pag analyze(const SystemModel& model, int max_faults,
                   const std::optional<DeploymentConfig>& initial = std::nullopt) {
  Pag pag = build_pag(model, max_faults);

  FaultScenario root_scenario;
  if (initial) {
    auto violations = check_config(model, root_scenario, *initial);
    if (!violations.empty())
      throw ConfigError("initial configuration violates the deployment constraints", violations);
    SolveResult r;
    r.config = *initial;
    r.config.sort_by_cluster();
    r.priority_sum = compute_priority_sum(model, r.config);
    r.config.priority_sum = r.priority_sum;
    r.optimal = false;
    pag.vertices[0].result = std::move(r);
  } else {
    SolveRequest req;
    req.model = &model;
    pag.vertices[0].result = solve(req);
  }
  detail::fill_vertex_features(model, pag.vertices[0]);

  for (std::size_t v = 1; v < pag.vertices.size(); ++v) {
    PagVertex& vertex = pag.vertices[v];
    const PagVertex* parent = analysis_parent(pag, v);
    if (!parent || !parent->result)
      throw std::logic_error("pag vertex without resolved predecessor");

    SolveRequest req;
    req.model = &model;
    req.previous = parent->result->config;
    req.scenario = vertex_scenario(pag, vertex);
    vertex.result = solve(req);
    detail::fill_vertex_features(model, vertex);
  }

  for (auto& e : pag.edges) {
    const PagVertex& from = pag.vertices[e.from];
    const PagVertex& to = pag.vertices[e.to];
    for (auto ci : model.clusters_by_id) {
      const std::string& cid = model.clusters[ci].id;
      const ClusterPlacement* pf = from.result->config.find(cid);
      const ClusterPlacement* pt = to.result->config.find(cid);
      if (pf && pf->master_present() && (!pt || !pt->master_present()))
        e.lost_clusters.push_back(cid);
    }
    std::set<std::string> provided_from(from.provided_features.begin(),
                                        from.provided_features.end());
    for (const auto& fid : to.lost_features)
      if (provided_from.count(fid)) e.lost_features.push_back(fid);
    e.priority_delta = to.result->priority_sum - from.result->priority_sum;
  }

  pag.resolved = true;
  return pag;
}

/// Largest fault depth d such that the feature is provided at every
/// vertex with depth <= d; capped at the analysis depth.
inline int survivable_faults(const Pag& pag, const std::string& feature_id) {
  int first_lost = pag.max_faults + 1;
  for (const auto& v : pag.vertices)
    for (const auto& fid : v.lost_features)
      if (fid == feature_id) first_lost = std::min(first_lost, v.fault_depth);
  return std::min(first_lost - 1, pag.max_faults);
}

}  // namespace failop
